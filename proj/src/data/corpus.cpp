#include "argnet/data/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "argnet/data/text_normalize.hpp"
#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::data {

namespace {

template <class T, class Parse>
std::vector<T> load_records(const std::filesystem::path& path, Parse parse, auto id_of) {
    std::vector<T> out;
    std::unordered_set<std::string> seen;
    util::for_each_jsonl(path, [&](std::size_t line, const util::Json& j) {
        T rec;
        try {
            rec = parse(j);
        } catch (const ValidationError& e) {
            throw IngestionError(e.what(), line);
        } catch (const nlohmann::json::exception& e) {
            throw IngestionError(e.what(), line);
        }
        if (!seen.insert(id_of(rec)).second) {
            throw IngestionError("duplicate id '" + id_of(rec) + "'", line);
        }
        out.push_back(std::move(rec));
    });
    if (out.empty()) throw IngestionError("empty corpus: " + path.string());
    return out;
}

const NewsItem& item_of(const NewsItem& n) { return n; }
const NewsItem& item_of(const EnrichedSample& s) { return s.item; }

template <class T>
BasicSplit<T> split_by_time(const std::vector<T>& rows, const SplitRatios& r) {
    if (!(r.train > 0 && r.val > 0 && r.test > 0)) throw ValidationError("split ratios must be positive");
    if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");

    std::vector<std::string> missing;
    for (const auto& row : rows) {
        if (!item_of(row).timestamp) missing.push_back(item_of(row).id);
    }
    if (!missing.empty()) throw MissingFieldError("temporal split needs timestamps", std::move(missing));

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *item_of(rows[a]).timestamp < *item_of(rows[b]).timestamp;
    });

    const auto n = static_cast<long long>(rows.size());
    long long n_train = std::llround(static_cast<double>(n) * r.train);
    long long n_val = std::llround(static_cast<double>(n) * r.val);
    n_train = std::clamp(n_train, 0LL, n);
    n_val = std::clamp(n_val, 0LL, n - n_train);

    BasicSplit<T> out;
    for (long long i = 0; i < n; ++i) {
        auto& dst = i < n_train ? out.train : (i < n_train + n_val ? out.val : out.test);
        dst.push_back(rows[order[static_cast<std::size_t>(i)]]);
    }
    return out;
}

}  // namespace

std::vector<NewsItem> load_corpus(const std::filesystem::path& path) {
    return load_records<NewsItem>(path, news_item_from_json, [](const NewsItem& n) { return n.id; });
}

std::vector<EnrichedSample> load_enriched(const std::filesystem::path& path) {
    return load_records<EnrichedSample>(path, enriched_from_json,
                                        [](const EnrichedSample& s) { return s.item.id; });
}

void save_corpus(const std::filesystem::path& path, const std::vector<NewsItem>& items) {
    std::vector<util::Json> rows;
    rows.reserve(items.size());
    for (const auto& item : items) rows.push_back(to_json(item));
    util::write_jsonl(path, rows);
}

void save_enriched(const std::filesystem::path& path, const std::vector<EnrichedSample>& samples) {
    std::vector<util::Json> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) rows.push_back(to_json(s));
    util::write_jsonl(path, rows);
}

std::vector<NewsItem> deduplicate(const std::vector<NewsItem>& items) {
    std::vector<NewsItem> out;
    std::unordered_set<std::string> seen;
    for (const auto& item : items) {
        if (seen.insert(normalize_for_dedup(item.text)).second) out.push_back(item);
    }
    return out;
}

BasicSplit<NewsItem> temporal_split(const std::vector<NewsItem>& items, const SplitRatios& ratios) {
    return split_by_time(items, ratios);
}

DatasetSplit temporal_split(const std::vector<EnrichedSample>& samples, const SplitRatios& ratios) {
    return split_by_time(samples, ratios);
}

}  // namespace argnet::data
