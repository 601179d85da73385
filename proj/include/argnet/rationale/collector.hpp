#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argnet/data/types.hpp"
#include "argnet/rationale/cache.hpp"
#include "argnet/rationale/llm_client.hpp"
#include "argnet/rationale/prompt.hpp"

namespace argnet::rationale {

struct CollectorConfig {
    std::string language = "en";
    /// Unset: the language pack default.
    std::optional<bool> role_play;
    /// Empty: built-in template.
    std::filesystem::path template_dir;
    std::string template_id = "veracity";
    int max_concurrency = 4;
};

CollectorConfig collector_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CollectorConfig& c);

struct CollectStats {
    std::size_t records = 0;
    std::size_t llm_queries = 0;
    std::size_t cache_hits = 0;
    std::size_t ok = 0;
    std::size_t refusals = 0;
    std::size_t ambiguous = 0;

    double refusal_ratio() const noexcept {
        return records ? static_cast<double>(refusals) / static_cast<double>(records) : 0.0;
    }
};

nlohmann::json to_json(const CollectStats& s);

struct RenderedPrompt {
    std::string news_id;
    data::Perspective perspective;
    std::string prompt;
};

/// Prompts the collector would send, without contacting any endpoint.
std::vector<RenderedPrompt> render_collection_prompts(std::span<const data::NewsItem> items,
                                                      const std::vector<data::Perspective>& perspectives,
                                                      const CollectorConfig& cfg);

/// Render -> query -> parse per (item, perspective), through the cache.
/// Refusals keep the sample with placeholder text; usefulness is filled from
/// gold labels. The first endpoint error stops new requests and is rethrown
/// once in-flight work has been cached.
std::vector<data::EnrichedSample> collect_rationales(std::span<const data::NewsItem> items,
                                                     const std::vector<data::Perspective>& perspectives,
                                                     LLMClient& client, RationaleCache& cache,
                                                     const CollectorConfig& cfg, CollectStats* stats = nullptr);

/// Record for one parsed response; usefulness follows the gold label.
data::RationaleRecord make_record(const data::NewsItem& item, data::Perspective p, const std::string& response);

}  // namespace argnet::rationale
