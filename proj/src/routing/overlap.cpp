#include "argnet/routing/overlap.hpp"

#include "argnet/util/error.hpp"

namespace argnet::routing {

namespace {

template <class M>
void same_ids(const M& a, const IdVotes& ref, const char* what) {
    std::vector<std::string> diff;
    for (const auto& [id, v] : a) {
        if (!ref.count(id)) diff.push_back(id);
    }
    for (const auto& [id, v] : ref) {
        if (!a.count(id)) diff.push_back(id);
    }
    if (!diff.empty()) throw ValidationError(std::string(what) + " ids differ: " + join_ids(diff));
}

bool right(const train::Vote& v, data::Label gold) { return v && *v == gold; }

}  // namespace

double OverlapReport::llm_overlap() const noexcept {
    const std::size_t n = additional_correct();
    return n ? static_cast<double>(both.size() + td_only.size() + cs_only.size()) / static_cast<double>(n) : 0.0;
}

OverlapReport overlap_analysis(const IdVotes& model, const IdVotes& baseline, const IdVotes& llm_td,
                               const IdVotes& llm_cs, const std::map<std::string, data::Label>& golds) {
    same_ids(baseline, model, "baseline");
    same_ids(llm_td, model, "td");
    same_ids(llm_cs, model, "cs");
    same_ids(golds, model, "gold");
    OverlapReport r;
    for (const auto& [id, gold] : golds) {
        if (!right(model.at(id), gold) || right(baseline.at(id), gold)) continue;
        const bool td = right(llm_td.at(id), gold);
        const bool cs = right(llm_cs.at(id), gold);
        (td && cs ? r.both : td ? r.td_only : cs ? r.cs_only : r.neither).push_back(id);
    }
    return r;
}

nlohmann::json to_json(const OverlapReport& r) {
    const double n = static_cast<double>(r.additional_correct());
    auto share = [&](std::size_t k) { return n > 0 ? static_cast<double>(k) / n : 0.0; };
    return {{"additional_correct", r.additional_correct()},
            {"both", r.both.size()},
            {"td_only", r.td_only.size()},
            {"cs_only", r.cs_only.size()},
            {"neither", r.neither.size()},
            {"share_both", share(r.both.size())},
            {"share_td_only", share(r.td_only.size())},
            {"share_cs_only", share(r.cs_only.size())},
            {"share_neither", share(r.neither.size())},
            {"llm_overlap", r.llm_overlap()}};
}

}  // namespace argnet::routing
