#include "argnet/data/synthetic.hpp"

#include <cstdio>
#include <random>
#include <string>

#include "argnet/util/error.hpp"

namespace argnet::data {

namespace {

// Portable draws on top of the engine so output is identical across standard libraries.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    int range(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

std::string words(Draw& draw, const char* prefix, int vocab, int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (!out.empty()) out += ' ';
        out += prefix;
        out += std::to_string(draw.range(0, vocab - 1));
    }
    return out;
}

RationaleRecord make_rationale(Draw& draw, const std::string& id, Perspective p, Label gold, double p_correct,
                               const SyntheticOptions& o) {
    RationaleRecord rec;
    rec.news_id = id;
    rec.perspective = p;
    const bool correct = draw.bernoulli(p_correct);
    const Label judgment = correct ? gold : (gold == Label::Real ? Label::Fake : Label::Real);
    std::string text = p == Perspective::TextualDescription ? "from the perspective of textual description "
                                                            : "from the perspective of commonsense ";
    text += words(draw, "rw", o.rationale_vocab, draw.range(o.rationale_min_tokens, o.rationale_max_tokens));
    if (judgment == Label::Fake) {
        text += ' ';
        text += kSyntheticFakeCue;
    }
    rec.rationale_text = text;
    rec.raw_response = text;
    rec.llm_judgment = judgment;
    rec.parse_status = ParseStatus::Ok;
    rec.usefulness = usefulness_for(judgment, gold);
    return rec;
}

}  // namespace

std::vector<EnrichedSample> generate_synthetic_corpus(std::size_t n, double p_td, double p_cs, std::uint64_t seed,
                                                      const SyntheticOptions& o) {
    if (p_td < 0 || p_td > 1 || p_cs < 0 || p_cs > 1) throw ValidationError("p_td and p_cs must lie in [0, 1]");
    Draw draw(seed);
    std::vector<EnrichedSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "syn-%06zu", i);
        EnrichedSample s;
        s.item.id = id;
        s.item.language = Language::En;
        s.item.timestamp = o.base_timestamp + static_cast<std::int64_t>(i) * 60;
        const Label gold = draw.bernoulli(0.5) ? Label::Fake : Label::Real;
        s.item.label = gold;
        s.item.text = words(draw, "nw", o.news_vocab, draw.range(o.news_min_tokens, o.news_max_tokens));
        s.rationale_td = make_rationale(draw, s.item.id, Perspective::TextualDescription, gold, p_td, o);
        s.rationale_cs = make_rationale(draw, s.item.id, Perspective::Commonsense, gold, p_cs, o);
        if (o.reliability_markers) {
            s.item.text += *s.rationale_td->usefulness ? " tdclear" : " tdmurky";
            s.item.text += *s.rationale_cs->usefulness ? " csclear" : " csmurky";
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace argnet::data
