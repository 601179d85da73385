#include "argnet/rationale/collector.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "argnet/rationale/parse.hpp"
#include "argnet/util/error.hpp"

namespace argnet::rationale {

namespace {

struct Setup {
    PromptTemplate tmpl;
    LanguagePack pack;
    bool role_play;
};

Setup setup_for(const CollectorConfig& cfg) {
    Setup s{cfg.template_dir.empty() ? builtin_template(cfg.language)
                                     : load_template(cfg.template_dir, cfg.language, cfg.template_id),
            builtin_language_pack(cfg.language), false};
    s.role_play = cfg.role_play.value_or(s.pack.role_play_default);
    return s;
}

std::vector<data::Perspective> unique_perspectives(const std::vector<data::Perspective>& ps) {
    if (ps.empty()) throw ValidationError("no perspectives requested");
    std::vector<data::Perspective> out;
    for (auto p : ps) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

}  // namespace

CollectorConfig collector_config_from_json(const nlohmann::json& j) {
    CollectorConfig c;
    c.language = j.value("language", c.language);
    if (j.contains("role_play") && !j["role_play"].is_null()) c.role_play = j["role_play"].get<bool>();
    c.template_dir = j.value("template_dir", std::string());
    c.template_id = j.value("template_id", c.template_id);
    c.max_concurrency = j.value("max_concurrency", c.max_concurrency);
    if (c.max_concurrency < 1) throw ValidationError("max_concurrency must be >= 1");
    return c;
}

nlohmann::json to_json(const CollectorConfig& c) {
    nlohmann::json j{{"language", c.language},
                     {"template_dir", c.template_dir.string()},
                     {"template_id", c.template_id},
                     {"max_concurrency", c.max_concurrency}};
    j["role_play"] = c.role_play ? nlohmann::json(*c.role_play) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const CollectStats& s) {
    return {{"records", s.records},     {"llm_queries", s.llm_queries}, {"cache_hits", s.cache_hits},
            {"ok", s.ok},               {"refusals", s.refusals},       {"ambiguous", s.ambiguous},
            {"refusal_ratio", s.refusal_ratio()}};
}

data::RationaleRecord make_record(const data::NewsItem& item, data::Perspective p, const std::string& response) {
    ParsedResponse parsed = parse_judgment(response);
    data::RationaleRecord r;
    r.news_id = item.id;
    r.perspective = p;
    r.parse_status = parsed.status;
    r.llm_judgment = parsed.judgment;
    r.rationale_text = parsed.status == data::ParseStatus::Refusal || parsed.rationale_text.empty()
                           ? std::string(kRefusalPlaceholder)
                           : parsed.rationale_text;
    r.usefulness = data::usefulness_for(r.llm_judgment, item.label);
    r.raw_response = response;
    return r;
}

std::vector<RenderedPrompt> render_collection_prompts(std::span<const data::NewsItem> items,
                                                      const std::vector<data::Perspective>& perspectives,
                                                      const CollectorConfig& cfg) {
    const Setup s = setup_for(cfg);
    std::vector<RenderedPrompt> out;
    for (const auto& item : items) {
        for (auto p : unique_perspectives(perspectives)) {
            out.push_back({item.id, p, render_prompt(PromptStrategy::perspective_cot(p, s.role_play), item, {}, s.tmpl, s.pack)});
        }
    }
    return out;
}

std::vector<data::EnrichedSample> collect_rationales(std::span<const data::NewsItem> items,
                                                     const std::vector<data::Perspective>& perspectives,
                                                     LLMClient& client, RationaleCache& cache,
                                                     const CollectorConfig& cfg, CollectStats* stats) {
    const Setup s = setup_for(cfg);
    const auto ps = unique_perspectives(perspectives);
    std::vector<std::string> fingerprints;
    for (auto p : ps) {
        fingerprints.push_back(strategy_fingerprint(PromptStrategy::perspective_cot(p, s.role_play), s.tmpl, s.pack, {},
                                                    client.endpoint().identifier()));
    }

    struct Job {
        std::size_t item;
        std::size_t persp;
    };
    const std::size_t width = ps.size();
    std::vector<std::optional<data::RationaleRecord>> results(items.size() * width);
    std::vector<Job> jobs;
    CollectStats local;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t k = 0; k < width; ++k) {
            if (auto hit = cache.find(items[i].id, fingerprints[k])) {
                results[i * width + k] = std::move(hit);
                ++local.cache_hits;
            } else {
                jobs.push_back({i, k});
            }
        }
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::atomic<std::size_t> queries{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job job = jobs[j];
            const data::NewsItem& item = items[job.item];
            const data::Perspective p = ps[job.persp];
            try {
                const std::string prompt =
                    render_prompt(PromptStrategy::perspective_cot(p, s.role_play), item, {}, s.tmpl, s.pack);
                LLMResponse resp = client.query(prompt);
                queries.fetch_add(1);
                data::RationaleRecord rec = make_record(item, p, resp.text);
                cache.insert(item.id, fingerprints[job.persp], rec, &resp);
                results[job.item * width + job.persp] = std::move(rec);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                stop = true;
                return;
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.max_concurrency)), jobs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    local.llm_queries = queries.load();
    if (stats) *stats = local;
    if (error) std::rethrow_exception(error);

    std::vector<data::EnrichedSample> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        data::EnrichedSample e;
        e.item = items[i];
        for (std::size_t k = 0; k < width; ++k) {
            data::RationaleRecord rec = *results[i * width + k];
            rec.usefulness = data::usefulness_for(rec.llm_judgment, e.item.label);
            ++local.records;
            if (rec.parse_status == data::ParseStatus::Ok) ++local.ok;
            if (rec.parse_status == data::ParseStatus::Refusal) ++local.refusals;
            if (rec.parse_status == data::ParseStatus::Ambiguous) ++local.ambiguous;
            (ps[k] == data::Perspective::TextualDescription ? e.rationale_td : e.rationale_cs) = std::move(rec);
        }
        out.push_back(std::move(e));
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace argnet::rationale
