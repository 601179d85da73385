#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "argnet/data/types.hpp"
#include "argnet/rationale/llm_client.hpp"

namespace argnet::rationale {

/// Append-only JSONL store of rationale records keyed by (news id, strategy
/// fingerprint). Every insert is flushed before returning, so an interrupted
/// run keeps everything it finished. Thread-safe.
class RationaleCache {
public:
    /// Loads `path` if it exists. An empty path keeps the cache in memory.
    explicit RationaleCache(std::filesystem::path path = {});

    std::optional<data::RationaleRecord> find(const std::string& news_id, const std::string& fingerprint) const;
    /// False (and nothing written) when the key is already present.
    bool insert(const std::string& news_id, const std::string& fingerprint, const data::RationaleRecord& record,
                const LLMResponse* response = nullptr);

    std::size_t size() const;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::map<std::pair<std::string, std::string>, data::RationaleRecord> entries_;
};

}  // namespace argnet::rationale
