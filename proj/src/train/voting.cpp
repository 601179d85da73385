#include "argnet/train/voting.hpp"

#include "argnet/util/error.hpp"

namespace argnet::train {

data::Label majority_vote(std::span<const Vote> votes, TieRule tie) {
    int real = 0, fake = 0;
    for (const auto& v : votes) {
        if (!v) continue;
        (*v == data::Label::Real ? real : fake)++;
    }
    if (real == 0 && fake == 0) return data::Label::Real;
    if (real > fake) return data::Label::Real;
    if (fake > real) return data::Label::Fake;
    switch (tie) {
        case TieRule::Real: return data::Label::Real;
        case TieRule::Fake: return data::Label::Fake;
        case TieRule::Error: break;
    }
    throw ValidationError("majority vote tied at " + std::to_string(real) + " to " + std::to_string(fake));
}

data::Label oracle_vote(std::span<const Vote> votes, data::Label gold, TieRule tie) {
    for (const auto& v : votes) {
        if (v && *v == gold) return gold;
    }
    return majority_vote(votes, tie);
}

EnsembleReport evaluate_ensembles(const std::vector<std::vector<Vote>>& voters, std::span<const data::Label> golds,
                                  TieRule tie) {
    if (voters.empty()) throw ValidationError("no voters");
    for (const auto& v : voters) {
        if (v.size() != golds.size()) throw ValidationError("voter and gold lengths differ");
    }
    if (golds.empty()) throw ValidationError("empty evaluation set");
    EnsembleReport r;
    r.voter_accuracy.assign(voters.size(), 0.0);
    std::size_t maj = 0, orc = 0;
    std::vector<Vote> row(voters.size());
    for (std::size_t i = 0; i < golds.size(); ++i) {
        for (std::size_t v = 0; v < voters.size(); ++v) {
            row[v] = voters[v][i];
            if (row[v] && *row[v] == golds[i]) r.voter_accuracy[v] += 1.0;
        }
        if (majority_vote(row, tie) == golds[i]) ++maj;
        if (oracle_vote(row, golds[i], tie) == golds[i]) ++orc;
    }
    const double n = static_cast<double>(golds.size());
    for (auto& a : r.voter_accuracy) a /= n;
    r.majority_accuracy = static_cast<double>(maj) / n;
    r.oracle_accuracy = static_cast<double>(orc) / n;
    return r;
}

}  // namespace argnet::train
