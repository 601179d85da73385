#pragma once

#include <filesystem>
#include <vector>

#include "argnet/data/types.hpp"

namespace argnet::data {

/// Loads a corpus JSONL file. Every record is validated; a repeated id is
/// rejected at its second occurrence. An empty file is an error.
std::vector<NewsItem> load_corpus(const std::filesystem::path& path);

/// Loads an enriched JSONL file (corpus schema plus a "rationales" object).
std::vector<EnrichedSample> load_enriched(const std::filesystem::path& path);

void save_corpus(const std::filesystem::path& path, const std::vector<NewsItem>& items);
void save_enriched(const std::filesystem::path& path, const std::vector<EnrichedSample>& samples);

/// Drops items whose normalized text was already seen; keeps first occurrences in order.
std::vector<NewsItem> deduplicate(const std::vector<NewsItem>& items);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

/// Sorts by timestamp (stable: ties keep ingestion order) and cuts contiguous
/// train/val/test blocks. Part sizes are round(n*train), round(n*val), rest.
BasicSplit<NewsItem> temporal_split(const std::vector<NewsItem>& items, const SplitRatios& ratios);
DatasetSplit temporal_split(const std::vector<EnrichedSample>& samples, const SplitRatios& ratios);

}  // namespace argnet::data
