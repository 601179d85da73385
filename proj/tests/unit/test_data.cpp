#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "argnet/data/corpus.hpp"
#include "argnet/data/metrics.hpp"
#include "argnet/data/sample_view.hpp"
#include "argnet/data/synthetic.hpp"
#include "argnet/data/text_normalize.hpp"
#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"

using namespace argnet;
using data::Label;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "argnet_unit";
    fs::create_directories(dir);
    return dir / name;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
    std::ofstream out(p);
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("macro F1 matches brute-force counting on random label vectors") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        std::vector<Label> pred, gold;
        std::vector<int> pi, gi;
        for (int i = 0; i < n; ++i) {
            pi.push_back(static_cast<int>(rng() % 2));
            gi.push_back(static_cast<int>(rng() % 2));
            pred.push_back(data::label_from_int(pi.back()));
            gold.push_back(data::label_from_int(gi.back()));
        }
        double acc = 0;
        const double f1 = oracle::macro_f1(pi, gi, &acc);
        const auto m = data::compute_metrics(pred, gold);
        CHECK(m.macro_f1 == doctest::Approx(f1).epsilon(1e-12));
        CHECK(m.accuracy == doctest::Approx(acc).epsilon(1e-12));
        CHECK(m.confusion.total() == n);
        CHECK(data::metrics_from_confusion(m.confusion) == m);
    }
}

TEST_CASE("metrics of perfect and inverted predictions") {
    std::vector<Label> gold{Label::Real, Label::Fake, Label::Fake, Label::Real};
    CHECK(data::compute_metrics(gold, gold).macro_f1 == 1.0);
    std::vector<Label> inv{Label::Fake, Label::Real, Label::Real, Label::Fake};
    CHECK(data::compute_metrics(inv, gold).macro_f1 == 0.0);
    CHECK_THROWS_AS(data::compute_metrics(std::vector<Label>{Label::Real}, gold), ValidationError);
    const auto j = data::to_json(data::compute_metrics(gold, gold));
    CHECK(data::metrics_from_json(j) == data::compute_metrics(gold, gold));
}

TEST_CASE("temporal split is contiguous, ordered and loses nothing") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng() % 90;
        std::vector<data::NewsItem> items;
        for (std::size_t i = 0; i < n; ++i) {
            data::NewsItem it;
            it.id = "n" + std::to_string(i);
            it.text = "t" + std::to_string(i);
            it.timestamp = static_cast<std::int64_t>(rng() % 20);
            items.push_back(it);
        }
        const auto s = data::temporal_split(items, {});
        CHECK(s.train.size() + s.val.size() + s.test.size() == n);
        std::vector<data::NewsItem> all = s.train;
        all.insert(all.end(), s.val.begin(), s.val.end());
        all.insert(all.end(), s.test.begin(), s.test.end());
        for (std::size_t i = 1; i < all.size(); ++i) {
            CHECK(*all[i - 1].timestamp <= *all[i].timestamp);
            if (*all[i - 1].timestamp == *all[i].timestamp) {
                // ties keep ingestion order
                CHECK(std::stoi(all[i - 1].id.substr(1)) < std::stoi(all[i].id.substr(1)));
            }
        }
        std::set<std::string> ids;
        for (const auto& it : all) ids.insert(it.id);
        CHECK(ids.size() == n);
    }
}

TEST_CASE("corpus ingestion validates and names the offending line") {
    const auto p = scratch("bad.jsonl");
    write_lines(p, {R"({"id":"a","text":"x","label":"real","timestamp":1,"language":"en"})",
                    R"({"id":"a","text":"y","label":"fake","timestamp":2,"language":"en"})"});
    try {
        data::load_corpus(p);
        FAIL("duplicate id accepted");
    } catch (const IngestionError& e) {
        CHECK(e.line() == 2);
    }
    write_lines(p, {R"({"id":"a","text":"x","label":"maybe","timestamp":1,"language":"en"})"});
    CHECK_THROWS_AS(data::load_corpus(p), IngestionError);
    write_lines(p, {});
    CHECK_THROWS_AS(data::load_corpus(p), IngestionError);
}

TEST_CASE("enriched round trip preserves every field") {
    const auto samples = data::generate_synthetic_corpus(30, 0.7, 0.5, 3);
    const auto p = scratch("enriched.jsonl");
    data::save_enriched(p, samples);
    const auto back = data::load_enriched(p);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(data::to_json(back[i]) == data::to_json(samples[i]));
    }
}

TEST_CASE("dedup folds case, whitespace and unicode composition") {
    CHECK(data::normalize_for_dedup("  Hello   World ") == data::normalize_for_dedup("hello world"));
    CHECK(data::normalize_for_dedup("Cafe\xCC\x81") == data::normalize_for_dedup("Caf\xC3\xA9"));
    std::vector<data::NewsItem> items(3);
    items[0] = {"a", "Breaking News", Label::Real, 1, data::Language::En};
    items[1] = {"b", "breaking   news", Label::Fake, 2, data::Language::En};
    items[2] = {"c", "other", Label::Fake, 3, data::Language::En};
    const auto d = data::deduplicate(items);
    REQUIRE(d.size() == 2);
    CHECK(d[0].id == "a");
    CHECK(d[1].id == "c");
}

TEST_CASE("usefulness is 1 exactly when the judgment matches gold") {
    CHECK(*data::usefulness_for(Label::Fake, Label::Fake) == 1);
    CHECK(*data::usefulness_for(Label::Real, Label::Fake) == 0);
    CHECK(*data::usefulness_for(std::nullopt, Label::Fake) == 0);
    CHECK_FALSE(data::usefulness_for(Label::Fake, std::nullopt).has_value());
}

TEST_CASE("synthetic corpus is deterministic and plants the requested accuracies") {
    const auto a = data::generate_synthetic_corpus(2000, 1.0, 0.5, 9);
    const auto b = data::generate_synthetic_corpus(2000, 1.0, 0.5, 9);
    CHECK(data::to_json(a[1234]) == data::to_json(b[1234]));
    int td_ok = 0, cs_ok = 0, fake = 0;
    for (const auto& s : a) {
        td_ok += *s.rationale_td->usefulness;
        cs_ok += *s.rationale_cs->usefulness;
        fake += *s.item.label == Label::Fake;
        const bool cue = s.rationale_td->rationale_text.find(data::kSyntheticFakeCue) != std::string::npos;
        CHECK(cue == (*s.rationale_td->llm_judgment == Label::Fake));
    }
    CHECK(td_ok == 2000);
    CHECK(std::abs(cs_ok - 1000) < 100);
    CHECK(std::abs(fake - 1000) < 100);
}

TEST_CASE("sample view audits rationale reads and reports missing fields") {
    auto s = data::generate_synthetic_corpus(1, 1.0, 1.0, 1)[0];
    s.rationale_cs.reset();
    data::AccessAudit audit;
    data::SampleView v(s, &audit);
    (void)v.news();
    (void)v.rationale(data::Perspective::TextualDescription);
    CHECK(audit.news_reads == 1);
    CHECK(audit.rationale_reads == 1);
    try {
        (void)v.rationale(data::Perspective::Commonsense);
        FAIL("missing rationale not reported");
    } catch (const MissingFieldError& e) {
        REQUIRE(e.ids().size() == 1);
        CHECK(e.ids()[0] == s.item.id);
    }
}

TEST_CASE("sha256 of a known string") {
    CHECK(util::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
