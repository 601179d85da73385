#pragma once

#include <optional>
#include <span>
#include <vector>

#include "argnet/data/types.hpp"

namespace argnet::train {

/// A voter's output; nullopt is an abstention (e.g. an LLM refusal).
using Vote = std::optional<data::Label>;

enum class TieRule { Error, Real, Fake };

/// Most frequent label after dropping abstentions. All-abstain gives REAL.
/// A tie throws ValidationError under TieRule::Error.
data::Label majority_vote(std::span<const Vote> votes, TieRule tie = TieRule::Error);

/// `gold` if any voter got it right, otherwise the majority of the votes.
data::Label oracle_vote(std::span<const Vote> votes, data::Label gold, TieRule tie = TieRule::Error);

struct EnsembleReport {
    std::vector<double> voter_accuracy;  // an abstention counts as wrong
    double majority_accuracy = 0;
    double oracle_accuracy = 0;
};

/// `voters[v][i]` is voter v's vote on sample i.
EnsembleReport evaluate_ensembles(const std::vector<std::vector<Vote>>& voters, std::span<const data::Label> golds,
                                  TieRule tie = TieRule::Error);

}  // namespace argnet::train
