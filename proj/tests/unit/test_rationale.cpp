#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "argnet/rationale/cache.hpp"
#include "argnet/rationale/collector.hpp"
#include "argnet/rationale/http_endpoint.hpp"
#include "argnet/rationale/mock_endpoint.hpp"
#include "argnet/rationale/parse.hpp"
#include "argnet/rationale/prompt.hpp"
#include "argnet/util/error.hpp"

using namespace argnet;
using namespace argnet::rationale;
using data::Label;
using data::Perspective;
namespace fs = std::filesystem;

namespace {

ClientConfig unthrottled() {
    ClientConfig c;
    c.requests_per_minute = 1e9;
    return c;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "argnet_unit";
    fs::create_directories(dir);
    return dir / name;
}

/// Fake clock: sleeping advances time and is recorded.
struct FakeClock {
    double now = 0;
    std::vector<double> sleeps;
    Timing timing() {
        return {[this] { return now; }, [this](double s) {
                    sleeps.push_back(s);
                    now += s;
                }};
    }
};

data::NewsItem news(const std::string& id, const std::string& text, Label label) {
    return {id, text, label, 0, data::Language::En};
}

std::vector<data::NewsItem> items(int n) {
    std::vector<data::NewsItem> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(news("n" + std::to_string(i), "message number " + std::to_string(i) + " about things",
                           i % 3 ? Label::Real : Label::Fake));
    }
    return out;
}

const std::string kQuestion =
    "Q: Given the following message, predict its veracity. If it is more likely to be a real message, return 1; "
    "otherwise, return 0. Please refrain from providing ambiguous assessments such as undetermined: ";

}  // namespace

TEST_CASE("prompt rendering for every strategy") {
    const auto item = news("x", "The moon is cheese.", Label::Fake);
    CHECK(render_prompt(PromptStrategy::zero_shot(), item) == kQuestion + "The moon is cheese.\nA:");
    CHECK(render_prompt(PromptStrategy::zero_shot_cot(), item) ==
          kQuestion + "The moon is cheese.\nA: Let's think step by step.");
    CHECK(render_prompt(PromptStrategy::perspective_cot(Perspective::TextualDescription), item) ==
          kQuestion + "The moon is cheese.\nA: Let's think from the perspective of textual description.");
    CHECK(render_prompt(PromptStrategy::perspective_cot(Perspective::Commonsense), item) ==
          kQuestion + "The moon is cheese.\nA: Let's think from the perspective of commonsense.");

    const std::vector<Demo> demos{{news("d1", "Water is wet.", Label::Real), "Plain fact. So 1."},
                                  {news("d2", "Cats can fly.", Label::Fake), "Absurd claim. So 0."}};
    CHECK(render_prompt(PromptStrategy::few_shot(2), item, demos) ==
          kQuestion + "Water is wet.\nA: 1\n" + kQuestion + "Cats can fly.\nA: 0\n" + kQuestion +
              "The moon is cheese.\nA:");
    const auto cot = render_prompt(PromptStrategy::few_shot_cot(2), item, demos);
    CHECK(cot.find("Water is wet.\nA: Plain fact. So 1.\n") != std::string::npos);
    CHECK(cot.substr(cot.size() - 25) == "Let's think step by step.");

    const auto rp = render_prompt(PromptStrategy::zero_shot(true), item);
    CHECK(rp.find("\n\n" + kQuestion) != std::string::npos);
    CHECK(rp.rfind(builtin_language_pack("en").role_play_preamble, 0) == 0);

    // Braces inside the news survive single-pass substitution.
    CHECK(render_prompt(PromptStrategy::zero_shot(), news("y", "a {news} b", Label::Real)).find("a {news} b") !=
          std::string::npos);
}

TEST_CASE("prompt strategies reject inconsistent demos") {
    const auto item = news("x", "text", Label::Fake);
    const std::vector<Demo> one{{news("d1", "a", Label::Real), std::nullopt}};
    CHECK_THROWS_AS(render_prompt(PromptStrategy::zero_shot(), item, one), ValidationError);
    CHECK_THROWS_AS(render_prompt(PromptStrategy::few_shot(2), item, one), ValidationError);
    const std::vector<Demo> no_rationale{{news("d1", "a", Label::Real), std::nullopt},
                                         {news("d2", "b", Label::Fake), std::nullopt}};
    CHECK_THROWS_AS(render_prompt(PromptStrategy::few_shot_cot(2), item, no_rationale), ValidationError);
    CHECK_NOTHROW(render_prompt(PromptStrategy::few_shot(2), item, no_rationale));
    PromptTemplate broken{"t", "Q: {news}\nA:", "en"};
    CHECK_THROWS_AS(render_prompt(PromptStrategy::zero_shot_cot(), item, {}, broken, builtin_language_pack("en")),
                    ValidationError);
}

TEST_CASE("template files match the built-in templates") {
    const fs::path dir = fs::path(ARGNET_SOURCE_DIR) / "templates";
    for (const char* lang : {"en", "zh"}) {
        const auto t = load_template(dir, lang, "veracity");
        CHECK(t.body == builtin_template(lang).body);
    }
    CHECK_THROWS_AS(load_template(dir, "en", "nope"), ValidationError);
}

TEST_CASE("Chinese perspective prompts use the Chinese eliciting sentences") {
    const auto& pack = builtin_language_pack("zh");
    const auto s = eliciting_sentence(PromptStrategy::perspective_cot(Perspective::Commonsense), pack);
    CHECK(s == "让我们从常识的角度思考。");
    CHECK(eliciting_sentence(PromptStrategy::zero_shot_cot(), pack) == "让我们一步一步地思考。");
}

TEST_CASE("fingerprints change with anything that shapes the prompt") {
    const auto& t = builtin_template("en");
    const auto& p = builtin_language_pack("en");
    const auto a = strategy_fingerprint(PromptStrategy::perspective_cot(Perspective::Commonsense), t, p, {}, "m1");
    CHECK(a == strategy_fingerprint(PromptStrategy::perspective_cot(Perspective::Commonsense), t, p, {}, "m1"));
    CHECK(a != strategy_fingerprint(PromptStrategy::perspective_cot(Perspective::TextualDescription), t, p, {}, "m1"));
    CHECK(a != strategy_fingerprint(PromptStrategy::perspective_cot(Perspective::Commonsense, true), t, p, {}, "m1"));
    CHECK(a != strategy_fingerprint(PromptStrategy::perspective_cot(Perspective::Commonsense), t, p, {}, "m2"));
}

TEST_CASE("the last standalone verdict wins") {
    CHECK(*parse_judgment("I think 0 at first, but on reflection 1").judgment == Label::Real);
    CHECK(*parse_judgment("Therefore, the answer (arabic numerals) is 0.").judgment == Label::Fake);
    CHECK(*parse_judgment("Return 1.").judgment == Label::Real);
    CHECK(parse_judgment("Return 1.").status == data::ParseStatus::Ok);
    // Digits inside numbers or words do not count.
    const auto amb = parse_judgment("In 2010 there were 10 reports about COVID-19.");
    CHECK_FALSE(amb.judgment.has_value());
    CHECK(amb.status == data::ParseStatus::Ambiguous);
    CHECK(amb.rationale_text == "In 2010 there were 10 reports about COVID-19.");
    const auto ref = parse_judgment("I'm sorry, but I cannot verify this message.");
    CHECK(ref.status == data::ParseStatus::Refusal);
    CHECK_FALSE(ref.judgment.has_value());
    CHECK(parse_judgment("").status == data::ParseStatus::Refusal);
    CHECK(last_verdict_position("a 1 b 0 c") == 6);
}

TEST_CASE("records carry usefulness from gold and placeholder text for refusals") {
    const auto item = news("a", "t", Label::Fake);
    const auto ok = make_record(item, Perspective::TextualDescription, "Looks invented. Return 0.");
    CHECK(*ok.llm_judgment == Label::Fake);
    CHECK(*ok.usefulness == 1);
    CHECK(ok.raw_response == "Looks invented. Return 0.");
    const auto wrong = make_record(item, Perspective::Commonsense, "Return 1.");
    CHECK(*wrong.usefulness == 0);
    const auto ref = make_record(item, Perspective::Commonsense, "I cannot help with that.");
    CHECK(ref.parse_status == data::ParseStatus::Refusal);
    CHECK(ref.rationale_text == kRefusalPlaceholder);
    CHECK_FALSE(ref.llm_judgment.has_value());
    CHECK(*ref.usefulness == 0);
}

TEST_CASE("retries back off exponentially and give up after five attempts") {
    auto ep = MockEndpoint::echo("Return 1.");
    FakeClock clock;
    LLMClient client(*ep, unthrottled(), clock.timing());
    ep->fail_next(2, 503);
    const auto r = client.query("hello");
    CHECK(r.attempt == 3);
    CHECK(client.endpoint_calls() == 3);
    REQUIRE(clock.sleeps.size() == 2);
    CHECK(clock.sleeps[0] == 1.0);
    CHECK(clock.sleeps[1] == 2.0);

    clock.sleeps.clear();
    ep->fail_next(10, 429);
    try {
        (void)client.query("again");
        FAIL("exhausted retries did not throw");
    } catch (const TransportError& e) {
        CHECK(e.status() == 429);
        CHECK(std::string(e.what()).find("5 attempts") != std::string::npos);
    }
    CHECK(client.endpoint_calls() == 3 + 5);
    CHECK(clock.sleeps == std::vector<double>{1.0, 2.0, 4.0, 8.0});
}

TEST_CASE("auth failures and other client errors are not retried") {
    auto ep = MockEndpoint::echo("Return 1.");
    FakeClock clock;
    LLMClient client(*ep, unthrottled(), clock.timing());
    ep->fail_next(1, 401);
    CHECK_THROWS_AS(client.query("x"), AuthError);
    CHECK(client.endpoint_calls() == 1);
    ep->fail_next(1, 400);
    CHECK_THROWS_AS(client.query("x"), TransportError);
    CHECK(client.endpoint_calls() == 2);
    CHECK(clock.sleeps.empty());
}

TEST_CASE("the token bucket admits a burst then paces at the configured rate") {
    FakeClock clock;
    TokenBucket bucket(60, clock.timing());
    bucket.acquire();
    CHECK(clock.now == 0.0);
    for (int i = 0; i < 60; ++i) bucket.acquire();
    CHECK(clock.now == doctest::Approx(60.0).epsilon(1e-9));
    TokenBucket fast(600, clock.timing());
    const double t0 = clock.now;
    for (int i = 0; i < 10; ++i) fast.acquire();
    CHECK(clock.now == t0);
}

TEST_CASE("request ids are unique and tied to the prompt hash") {
    auto ep = MockEndpoint::echo("Return 0.");
    FakeClock clock;
    LLMClient client(*ep, unthrottled(), clock.timing());
    const auto a = client.query("p");
    const auto b = client.query("p");
    CHECK(a.request_id != b.request_id);
    CHECK(a.prompt_hash == b.prompt_hash);
    CHECK(a.request_id.find(a.prompt_hash.substr(0, 12)) != std::string::npos);
}

TEST_CASE("mock endpoint is deterministic and follows the answer key") {
    std::unordered_map<std::string, Label> key;
    const auto all = items(200);
    for (const auto& it : all) key.emplace(it.text, *it.label);
    MockConfig cfg;
    cfg.accuracy_td = 1.0;
    cfg.accuracy_cs = 0.0;
    MockEndpoint ep(cfg, key);
    for (const auto& it : all) {
        const auto td = ep.complete(render_prompt(PromptStrategy::perspective_cot(Perspective::TextualDescription), it));
        const auto cs = ep.complete(render_prompt(PromptStrategy::perspective_cot(Perspective::Commonsense), it));
        CHECK(*parse_judgment(td).judgment == *it.label);
        CHECK(*parse_judgment(cs).judgment != *it.label);
        CHECK(td == ep.complete(render_prompt(PromptStrategy::perspective_cot(Perspective::TextualDescription), it)));
    }
}

TEST_CASE("cache survives a torn final line and never stores a key twice") {
    const auto path = scratch("cache.jsonl");
    fs::remove(path);
    {
        RationaleCache cache(path);
        const auto rec = make_record(news("a", "t", Label::Real), Perspective::TextualDescription, "Return 1.");
        CHECK(cache.insert("a", "fp", rec));
        CHECK_FALSE(cache.insert("a", "fp", rec));
        CHECK(cache.insert("a", "fp2", rec));
    }
    {
        std::ofstream out(path, std::ios::app);
        out << R"({"news_id":"b","finger)";
    }
    RationaleCache again(path);
    CHECK(again.size() == 2);
    CHECK(again.find("a", "fp").has_value());
    CHECK_FALSE(again.find("b", "fp").has_value());
}

TEST_CASE("collection is cached, resumable and counts refusals") {
    const auto all = items(20);
    std::unordered_map<std::string, Label> key;
    for (const auto& it : all) key.emplace(it.text, *it.label);
    MockConfig mcfg;
    mcfg.refusal_rate = 0.3;
    MockEndpoint ep(mcfg, key);
    FakeClock clock;
    ClientConfig ccfg;
    ccfg.requests_per_minute = 1e9;
    LLMClient client(ep, ccfg, clock.timing());
    const auto path = scratch("collect_cache.jsonl");
    fs::remove(path);
    const std::vector<Perspective> both{Perspective::TextualDescription, Perspective::Commonsense};
    CollectorConfig cfg;

    // Interrupt: the endpoint starts failing hard after a few calls.
    {
        RationaleCache cache(path);
        std::vector<data::NewsItem> first(all.begin(), all.begin() + 7);
        CollectStats st;
        (void)collect_rationales(first, both, client, cache, cfg, &st);
        CHECK(st.llm_queries == 14);
        ep.fail_next(1, 401);
        CHECK_THROWS_AS(collect_rationales(all, both, client, cache, cfg), AuthError);
    }
    const std::size_t cached = RationaleCache(path).size();
    CHECK(cached >= 14);

    RationaleCache cache(path);
    const std::size_t before = client.queries();
    CollectStats st;
    const auto out = collect_rationales(all, both, client, cache, cfg, &st);
    CHECK(client.queries() - before == 40 - cached);
    CHECK(st.llm_queries == 40 - cached);
    CHECK(st.cache_hits == cached);
    CHECK(st.records == 40);
    REQUIRE(out.size() == 20);
    std::size_t refusals = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].item.id == all[i].id);
        REQUIRE(out[i].has_both_rationales());
        for (auto p : both) refusals += out[i].rationale(p)->parse_status == data::ParseStatus::Refusal;
    }
    CHECK(st.refusals == refusals);
    CHECK(refusals > 0);
    CHECK(st.refusal_ratio() == doctest::Approx(static_cast<double>(refusals) / 40.0));

    // A complete rerun makes no calls at all.
    const std::size_t calls = ep.calls();
    CollectStats again;
    (void)collect_rationales(all, both, client, cache, cfg, &again);
    CHECK(ep.calls() == calls);
    CHECK(again.cache_hits == 40);
}

TEST_CASE("dry-run rendering produces one prompt per item and perspective") {
    const auto all = items(3);
    const auto prompts = render_collection_prompts(all, {Perspective::TextualDescription, Perspective::Commonsense}, {});
    REQUIRE(prompts.size() == 6);
    CHECK(prompts[1].perspective == Perspective::Commonsense);
    CHECK(prompts[1].prompt.find("perspective of commonsense") != std::string::npos);
}

TEST_CASE("HTTP endpoint maps statuses and never exposes the key") {
    httplib::Server server;
    std::atomic<int> status{200};
    std::string seen_auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        res.status = status.load();
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"Looks fine. Return 1."}}]})",
                        "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("ARGNET_TEST_KEY", "sk-test-secret", 1);
    HttpEndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.api_key_env = "ARGNET_TEST_KEY";
    cfg.timeout_s = 5;
    HttpEndpoint ep(cfg);
    CHECK(ep.complete("hi") == "Looks fine. Return 1.");
    CHECK(seen_auth == "Bearer sk-test-secret");
    CHECK(ep.identifier().find("sk-test-secret") == std::string::npos);

    auto failure = [&](int code) -> std::pair<std::string, bool> {
        status = code;
        try {
            (void)ep.complete("hi");
        } catch (const AuthError& e) {
            return {std::string("auth:") + e.what(), false};
        } catch (const TransportError& e) {
            return {e.what(), e.retryable()};
        }
        return {"none", false};
    };
    const auto a = failure(401);
    CHECK(a.first.rfind("auth:", 0) == 0);
    CHECK(a.first.find("sk-test-secret") == std::string::npos);
    CHECK(failure(429).second);
    CHECK(failure(503).second);
    CHECK_FALSE(failure(400).second);
    server.stop();
    th.join();

    ::unsetenv("ARGNET_TEST_KEY");
    CHECK_THROWS_AS(HttpEndpoint{cfg}, AuthError);
}
