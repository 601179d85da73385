#pragma once

#include <map>
#include <string>
#include <vector>

#include "argnet/train/voting.hpp"
#include "json.hpp"

namespace argnet::routing {

using IdVotes = std::map<std::string, train::Vote>;

/// Samples the model gets right and the baseline gets wrong, split by which
/// LLM perspectives judged them correctly (an abstention counts as wrong).
struct OverlapReport {
    std::vector<std::string> both, td_only, cs_only, neither;

    std::size_t additional_correct() const noexcept {
        return both.size() + td_only.size() + cs_only.size() + neither.size();
    }
    /// Share of additional-correct samples where at least one perspective was right.
    double llm_overlap() const noexcept;
};

/// All maps must cover the same ids; otherwise ValidationError lists the
/// differences.
OverlapReport overlap_analysis(const IdVotes& model, const IdVotes& baseline, const IdVotes& llm_td,
                               const IdVotes& llm_cs, const std::map<std::string, data::Label>& golds);

nlohmann::json to_json(const OverlapReport& r);

}  // namespace argnet::routing
