#include "argnet/cli/commands.hpp"

#include <chrono>
#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "argnet/cli/manifest.hpp"
#include "argnet/data/synthetic.hpp"
#include "argnet/rationale/parse.hpp"
#include "argnet/routing/overlap.hpp"
#include "argnet/routing/plot.hpp"
#include "argnet/train/model_io.hpp"
#include "argnet/train/voting.hpp"
#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kTopLevelKeys{"seed",   "split",  "model",    "train",    "argd",     "collect",
                                             "client", "endpoint", "mock", "routing", "synthetic"};

std::vector<data::Perspective> parse_perspectives(const std::vector<std::string>& names) {
    std::vector<data::Perspective> out;
    for (const auto& n : names) out.push_back(data::parse_perspective(n));
    if (out.empty()) throw ValidationError("at least one perspective is required");
    return out;
}

void check_ratios(const data::SplitRatios& r) {
    if (!(r.train > 0 && r.val > 0 && r.test > 0)) throw ValidationError("split ratios must be positive");
    if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");
}

/// Flags shared by every subcommand.
struct Globals {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool dry_run = false;
};

class Context {
public:
    Context(const std::string& command, const Globals& g, std::vector<std::string> argv, std::ostream& out)
        : out_dir(g.out), dry_run(g.dry_run), log(out) {
        if (g.out.empty()) throw ValidationError("--out is required");
        cfg = g.config.empty() ? AppConfig{} : load_app_config(g.config);
        if (g.seed) {
            cfg.seed = *g.seed;
            cfg.train.seed = *g.seed;
        }
        manifest.emplace(command, std::move(argv), to_json(cfg));
        if (!g.config.empty()) manifest->add_input(g.config);
    }

    void input(const fs::path& p) {
        if (!fs::exists(p)) throw ValidationError("input not found: " + p.string());
        manifest->add_input(p);
    }

    fs::path artifact(const std::string& name) {
        fs::create_directories(out_dir);
        manifest->add_artifact(out_dir / name);
        return out_dir / name;
    }

    void finish() {
        fs::create_directories(out_dir);
        util::write_json(out_dir / "config.json", to_json(cfg));
        manifest->add_artifact(out_dir / "config.json");
        manifest->write(out_dir);
    }

    AppConfig cfg;
    fs::path out_dir;
    bool dry_run;
    std::ostream& log;
    std::optional<Manifest> manifest;
};

data::DatasetSplit load_split(Context& ctx, const fs::path& data_path) {
    ctx.input(data_path);
    return data::temporal_split(data::load_enriched(data_path), ctx.cfg.split);
}

void write_eval(Context& ctx, const std::vector<train::Prediction>& preds, const data::MetricsReport& m,
                const std::string& part) {
    train::write_predictions(ctx.artifact("predictions_" + part + ".jsonl"), preds);
    util::write_json(ctx.artifact("metrics_" + part + ".json"), data::to_json(m));
}

void print_metrics(std::ostream& os, const std::string& label, const data::MetricsReport& m) {
    os << fmt::format("{}: macro_f1={:.4f} accuracy={:.4f} f1_real={:.4f} f1_fake={:.4f}\n", label, m.macro_f1,
                      m.accuracy, m.f1_real, m.f1_fake);
}

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

// ---- subcommands ----------------------------------------------------------

void cmd_synth(Context& ctx, std::optional<std::size_t> n, std::optional<double> p_td, std::optional<double> p_cs) {
    auto& s = ctx.cfg.synthetic;
    if (n) s.n = *n;
    if (p_td) s.p_td = *p_td;
    if (p_cs) s.p_cs = *p_cs;
    if (!(s.p_td >= 0 && s.p_td <= 1 && s.p_cs >= 0 && s.p_cs <= 1)) throw ValidationError("p_td and p_cs must lie in [0,1]");
    ctx.manifest->set("synthetic", {{"n", s.n}, {"p_td", s.p_td}, {"p_cs", s.p_cs}, {"seed", ctx.cfg.seed}});
    if (ctx.dry_run) {
        ctx.log << fmt::format("would generate {} samples (p_td={}, p_cs={})\n", s.n, s.p_td, s.p_cs);
        ctx.finish();
        return;
    }
    data::SyntheticOptions opts;
    opts.reliability_markers = s.reliability_markers;
    auto samples = data::generate_synthetic_corpus(s.n, s.p_td, s.p_cs, ctx.cfg.seed, opts);
    std::vector<data::NewsItem> items;
    for (const auto& e : samples) items.push_back(e.item);
    data::save_corpus(ctx.artifact("corpus.jsonl"), items);
    data::save_enriched(ctx.artifact("enriched.jsonl"), samples);
    ctx.finish();
    ctx.log << fmt::format("wrote {} synthetic samples to {}\n", samples.size(), ctx.out_dir.string());
}

void cmd_collect(Context& ctx, const fs::path& corpus_path, bool real_endpoint, std::optional<std::string> cache_path,
                 const std::vector<std::string>& perspectives) {
    if (!perspectives.empty()) ctx.cfg.perspectives = parse_perspectives(perspectives);
    ctx.input(corpus_path);
    const auto items = data::load_corpus(corpus_path);
    if (ctx.dry_run) {
        const auto prompts = rationale::render_collection_prompts(items, ctx.cfg.perspectives, ctx.cfg.collect);
        for (std::size_t i = 0; i < prompts.size(); ++i) {
            const auto& p = prompts[i];
            const auto name = fmt::format("prompts/{:06d}_{}_{}.txt", i, safe_name(p.news_id), data::to_string(p.perspective));
            util::write_text_atomic(ctx.artifact(name), p.prompt);
        }
        ctx.manifest->set("dry_run", {{"prompts", prompts.size()}, {"llm_calls", 0}});
        ctx.finish();
        ctx.log << fmt::format("rendered {} prompts, no requests sent\n", prompts.size());
        return;
    }

    std::unique_ptr<rationale::LLMEndpoint> endpoint;
    if (real_endpoint) {
        endpoint = std::make_unique<rationale::HttpEndpoint>(ctx.cfg.endpoint);
    } else {
        std::unordered_map<std::string, data::Label> key;
        for (const auto& it : items) {
            if (it.label) key.emplace(it.text, *it.label);
        }
        endpoint = std::make_unique<rationale::MockEndpoint>(ctx.cfg.mock, std::move(key));
    }
    ctx.manifest->set("endpoint", endpoint->identifier());
    rationale::LLMClient client(*endpoint, ctx.cfg.client);
    const fs::path cache_file = cache_path ? fs::path(*cache_path) : ctx.out_dir / "rationale_cache.jsonl";
    rationale::RationaleCache cache(cache_file);
    ctx.manifest->add_artifact(cache_file);
    rationale::CollectStats stats;
    std::vector<data::EnrichedSample> enriched;
    try {
        enriched = rationale::collect_rationales(items, ctx.cfg.perspectives, client, cache, ctx.cfg.collect, &stats);
    } catch (...) {
        ctx.manifest->set("collect", {{"status", "interrupted"}, {"stats", rationale::to_json(stats)}});
        ctx.finish();
        throw;
    }
    data::save_enriched(ctx.artifact("enriched.jsonl"), enriched);
    util::write_json(ctx.artifact("collect_summary.json"), rationale::to_json(stats));
    ctx.manifest->set("collect", {{"status", "complete"}, {"stats", rationale::to_json(stats)}});
    ctx.finish();
    ctx.log << fmt::format("records={} llm_queries={} cache_hits={} refusals={} refusal_ratio={:.4f}\n",
                           stats.records, stats.llm_queries, stats.cache_hits, stats.refusals, stats.refusal_ratio());
}

void cmd_train(Context& ctx, const fs::path& data_path, const std::string& kind_name) {
    const auto kind = model::parse_model_kind(kind_name);
    if (kind == model::ModelKind::ArgD) throw ValidationError("use the distill subcommand for argd");
    auto split = load_split(ctx, data_path);
    ctx.manifest->set("model_kind", kind_name);
    if (ctx.dry_run) {
        ctx.log << fmt::format("would train {} on {}/{}/{} samples over {} grid cells\n", kind_name,
                               split.train.size(), split.val.size(), split.test.size(),
                               ctx.cfg.train.grid(kind).size());
        ctx.finish();
        return;
    }
    auto result = train::train(kind, ctx.cfg.model, split, ctx.cfg.train);
    train::save_model(ctx.artifact("model.ckpt"), *result.model);
    train::save_run_record(ctx.artifact("run_record.json"), result.record);
    const auto preds = train::predict_all(*result.model, split.test);
    write_eval(ctx, preds, result.record.test, "test");
    ctx.finish();
    print_metrics(ctx.log, kind_name + " test", result.record.test);
}

void cmd_distill(Context& ctx, const fs::path& data_path, const fs::path& teacher) {
    auto split = load_split(ctx, data_path);
    ctx.input(teacher);
    if (ctx.dry_run) {
        ctx.log << fmt::format("would distill {} over {} grid cells\n", teacher.string(),
                               ctx.cfg.train.grid(model::ModelKind::ArgD).size());
        ctx.finish();
        return;
    }
    train::DistillOptions opts{ctx.cfg.argd, ctx.artifact("teacher_features.bin")};
    auto res = train::distill(teacher, split, ctx.cfg.train, opts);
    train::save_model(ctx.artifact("model.ckpt"), *res.result.model);
    train::save_run_record(ctx.artifact("run_record.json"), res.result.record);
    data::AccessAudit audit;
    const auto preds = train::predict_all(*res.result.model, split.test, &audit);
    write_eval(ctx, preds, res.result.record.test, "test");
    ctx.manifest->set("teacher_forwards", res.teacher_forwards);
    ctx.manifest->set("inference_rationale_reads", audit.rationale_reads.load());
    ctx.finish();
    print_metrics(ctx.log, "argd test", res.result.record.test);
}

void cmd_eval(Context& ctx, const fs::path& data_path, const fs::path& checkpoint, const std::string& part_name) {
    const auto part = data::parse_split_part(part_name);
    auto split = load_split(ctx, data_path);
    ctx.input(checkpoint);
    auto m = train::load_model(checkpoint);
    if (ctx.dry_run) {
        ctx.log << fmt::format("would evaluate {} on {}\n", model::to_string(m->kind()), part_name);
        ctx.finish();
        return;
    }
    data::AccessAudit audit;
    const auto preds = train::predict_all(*m, data::part_of(split, part), &audit);
    const auto metrics = train::metrics_of(preds);
    write_eval(ctx, preds, metrics, part_name);
    ctx.manifest->set("rationale_reads", audit.rationale_reads.load());
    ctx.finish();
    print_metrics(ctx.log, std::string(model::to_string(m->kind())) + " " + part_name, metrics);
}

void cmd_route(Context& ctx, const fs::path& data_path, const fs::path& argd_path, const fs::path& arg_path,
               const std::string& part_name, std::optional<double> threshold) {
    const auto part = data::parse_split_part(part_name);
    auto split = load_split(ctx, data_path);
    ctx.input(argd_path);
    ctx.input(arg_path);
    auto argd = train::load_model(argd_path);
    auto arg = train::load_model(arg_path);
    if (argd->kind() != model::ModelKind::ArgD) throw ValidationError(argd_path.string() + " is not an argd checkpoint");
    if (arg->kind() != model::ModelKind::Arg) throw ValidationError(arg_path.string() + " is not an arg checkpoint");
    if (ctx.dry_run) {
        ctx.log << fmt::format("would sweep {} thresholds on {}\n", ctx.cfg.threshold_grid.size(), part_name);
        ctx.finish();
        return;
    }
    const auto& samples = data::part_of(split, part);
    auto curve = routing::sweep_thresholds(samples, *argd, *arg, ctx.cfg.threshold_grid, ctx.cfg.confidence);
    routing::write_csv(ctx.artifact("routing_curve.csv"), curve);
    routing::write_curve_svg(ctx.artifact("routing_curve.svg"), curve, "ARG-D to ARG routing (" + part_name + ")");
    ctx.manifest->set("threshold_selection", part_name == "test" ? "test-swept" : part_name + "-swept");
    if (threshold) {
        auto r = routing::route(samples, *argd, *arg, *threshold, ctx.cfg.confidence);
        std::vector<json> rows;
        for (const auto& d : r.decisions) {
            rows.push_back({{"id", d.news_id},
                            {"confidence", d.confidence},
                            {"routed_to", model::to_string(d.routed_to)},
                            {"final_pred", data::to_string(d.final_pred)}});
        }
        util::write_jsonl(ctx.artifact("routing_decisions.jsonl"), rows);
        json summary = data::to_json(r.metrics);
        summary["threshold"] = r.threshold;
        summary["fraction_routed"] = r.fraction_routed;
        util::write_json(ctx.artifact("routing_metrics.json"), summary);
        print_metrics(ctx.log, fmt::format("routed at {} ({:.1f}% to arg)", r.threshold, 100 * r.fraction_routed),
                      r.metrics);
    }
    ctx.finish();
    const auto& lo = curve.points.front();
    const auto& hi = curve.points.back();
    ctx.log << fmt::format("sweep: {} thresholds, macro_f1 {:.4f} at {:.0f}% routed -> {:.4f} at {:.0f}% routed\n",
                           curve.points.size(), lo.metrics.macro_f1, 100 * lo.fraction_routed, hi.metrics.macro_f1,
                           100 * hi.fraction_routed);
}

void cmd_report(Context& ctx, const fs::path& data_path, const std::vector<std::string>& named_checkpoints,
                const std::string& part_name) {
    const auto part = data::parse_split_part(part_name);
    auto split = load_split(ctx, data_path);
    std::vector<std::pair<std::string, fs::path>> ckpts;
    for (const auto& nc : named_checkpoints) {
        const auto eq = nc.find('=');
        if (eq == std::string::npos) throw ValidationError("--checkpoint expects name=path, got " + nc);
        ckpts.emplace_back(nc.substr(0, eq), nc.substr(eq + 1));
        ctx.input(ckpts.back().second);
    }
    if (ctx.dry_run) {
        ctx.log << fmt::format("would report {} models on {}\n", ckpts.size(), part_name);
        ctx.finish();
        return;
    }
    const auto& samples = data::part_of(split, part);
    std::vector<data::Label> golds;
    std::map<std::string, data::Label> gold_map;
    routing::IdVotes llm_td, llm_cs;
    std::vector<std::vector<train::Vote>> voters(2);
    std::vector<std::string> voter_names{"llm_td", "llm_cs"};
    for (const auto& s : samples) {
        if (!s.item.label) throw MissingFieldError("report needs gold labels", {s.item.id});
        golds.push_back(*s.item.label);
        gold_map[s.item.id] = *s.item.label;
        const train::Vote td = s.rationale_td ? s.rationale_td->llm_judgment : std::nullopt;
        const train::Vote cs = s.rationale_cs ? s.rationale_cs->llm_judgment : std::nullopt;
        voters[0].push_back(td);
        voters[1].push_back(cs);
        llm_td[s.item.id] = td;
        llm_cs[s.item.id] = cs;
    }

    json report{{"part", part_name}, {"n", samples.size()}, {"models", json::object()}};
    std::map<std::string, routing::IdVotes> model_votes;
    for (const auto& [name, path] : ckpts) {
        auto m = train::load_model(path);
        const auto preds = train::predict_all(*m, samples);
        const auto metrics = train::metrics_of(preds);
        report["models"][name] = data::to_json(metrics);
        report["models"][name]["kind"] = model::to_string(m->kind());
        std::vector<train::Vote> votes;
        for (const auto& p : preds) {
            votes.push_back(p.pred);
            model_votes[name][p.id] = p.pred;
        }
        voters.push_back(std::move(votes));
        voter_names.push_back(name);
        print_metrics(ctx.log, name, metrics);
    }

    const auto ens = train::evaluate_ensembles(voters, golds, train::TieRule::Real);
    json voters_json = json::object();
    for (std::size_t v = 0; v < voters.size(); ++v) voters_json[voter_names[v]] = ens.voter_accuracy[v];
    report["ensembles"] = {{"voter_accuracy", voters_json},
                           {"majority_accuracy", ens.majority_accuracy},
                           {"oracle_accuracy", ens.oracle_accuracy},
                           {"tie_rule", "real"}};

    if (model_votes.count("baseline")) {
        json overlap = json::object();
        for (const auto& [name, votes] : model_votes) {
            if (name == "baseline") continue;
            overlap[name] = routing::to_json(
                routing::overlap_analysis(votes, model_votes["baseline"], llm_td, llm_cs, gold_map));
        }
        report["overlap_vs_baseline"] = overlap;
    }
    util::write_json(ctx.artifact("report.json"), report);
    ctx.finish();
    ctx.log << fmt::format("majority accuracy {:.4f}, oracle accuracy {:.4f}\n", ens.majority_accuracy,
                           ens.oracle_accuracy);
}

}  // namespace

AppConfig app_config_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    AppConfig c;
    std::vector<std::string> errors;
    for (const auto& [key, value] : j.items()) {
        if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), key) == kTopLevelKeys.end()) {
            errors.push_back("unknown key '" + key + "'");
        }
    }
    auto section = [&](const char* key, auto&& fn) {
        if (!j.contains(key)) return;
        try {
            fn(j.at(key));
        } catch (const std::exception& e) {
            errors.push_back(std::string(key) + ": " + e.what());
        }
    };
    section("seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); });
    section("split", [&](const json& v) {
        c.split = {v.value("train", c.split.train), v.value("val", c.split.val), v.value("test", c.split.test)};
        check_ratios(c.split);
    });
    section("model", [&](const json& v) {
        c.model = model::hyperparams_from_json(v);
        c.model.validate();
    });
    section("train", [&](const json& v) { c.train = train::train_config_from_json(v); });
    c.train.seed = c.seed;
    section("argd", [&](const json& v) {
        c.argd = distill::argd_config_from_json(v);
        c.argd.validate(c.model.d);
    });
    section("collect", [&](const json& v) {
        c.collect = rationale::collector_config_from_json(v);
        if (v.contains("perspectives")) c.perspectives = parse_perspectives(v["perspectives"].get<std::vector<std::string>>());
        rationale::builtin_language_pack(c.collect.language);
    });
    section("client", [&](const json& v) {
        c.client.requests_per_minute = v.value("requests_per_minute", c.client.requests_per_minute);
        c.client.retry.max_attempts = v.value("max_attempts", c.client.retry.max_attempts);
        c.client.retry.base_delay_s = v.value("backoff_base_s", c.client.retry.base_delay_s);
        c.client.retry.factor = v.value("backoff_factor", c.client.retry.factor);
        c.client.retry.validate();
        if (!(c.client.requests_per_minute > 0)) throw ValidationError("requests_per_minute must be > 0");
    });
    section("endpoint", [&](const json& v) { c.endpoint = rationale::http_endpoint_config_from_json(v); });
    section("mock", [&](const json& v) { c.mock = rationale::mock_config_from_json(v); });
    section("routing", [&](const json& v) {
        if (v.contains("grid") && !v["grid"].is_null()) c.threshold_grid = v["grid"].get<std::vector<double>>();
        if (v.contains("confidence")) c.confidence = routing::parse_confidence_kind(v["confidence"].get<std::string>());
        if (c.threshold_grid.empty()) throw ValidationError("threshold grid is empty");
        if (!std::is_sorted(c.threshold_grid.begin(), c.threshold_grid.end())) {
            throw ValidationError("threshold grid must be ascending");
        }
    });
    section("synthetic", [&](const json& v) {
        c.synthetic.n = v.value("n", c.synthetic.n);
        c.synthetic.p_td = v.value("p_td", c.synthetic.p_td);
        c.synthetic.p_cs = v.value("p_cs", c.synthetic.p_cs);
        c.synthetic.reliability_markers = v.value("reliability_markers", c.synthetic.reliability_markers);
    });
    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    return c;
}

json to_json(const AppConfig& c) {
    json persp = json::array();
    for (auto p : c.perspectives) persp.push_back(data::to_string(p));
    json collect = rationale::to_json(c.collect);
    collect["perspectives"] = persp;
    return {{"seed", c.seed},
            {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
            {"model", model::to_json(c.model)},
            {"train", train::to_json(c.train)},
            {"argd", distill::to_json(c.argd)},
            {"collect", collect},
            {"client",
             {{"requests_per_minute", c.client.requests_per_minute},
              {"max_attempts", c.client.retry.max_attempts},
              {"backoff_base_s", c.client.retry.base_delay_s},
              {"backoff_factor", c.client.retry.factor}}},
            {"endpoint", rationale::to_json(c.endpoint)},
            {"mock", rationale::to_json(c.mock)},
            {"routing", {{"grid", c.threshold_grid}, {"confidence", routing::to_string(c.confidence)}}},
            {"synthetic",
             {{"n", c.synthetic.n},
              {"p_td", c.synthetic.p_td},
              {"p_cs", c.synthetic.p_cs},
              {"reliability_markers", c.synthetic.reliability_markers}}}};
}

AppConfig load_app_config(const fs::path& path) {
    if (!fs::exists(path)) throw ValidationError("config not found: " + path.string());
    json j;
    try {
        j = util::read_json(path);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return app_config_from_json(j);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rationale-guided fake news detection toolkit", "argnet"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--seed", g.seed, "Override the configured seed");
    app.add_flag("--dry-run", g.dry_run, "Validate and plan without heavy compute or network calls");

    std::optional<std::size_t> syn_n;
    std::optional<double> syn_td, syn_cs;
    auto* synth = app.add_subcommand("synth", "Generate a planted-signal synthetic corpus");
    synth->add_option("--n", syn_n, "Number of samples");
    synth->add_option("--p-td", syn_td, "Accuracy of textual-description judgments");
    synth->add_option("--p-cs", syn_cs, "Accuracy of commonsense judgments");

    std::string corpus, cache;
    bool real_endpoint = false;
    std::vector<std::string> perspectives;
    auto* collect = app.add_subcommand("collect", "Collect LLM rationales for a corpus");
    collect->add_option("--corpus", corpus, "News corpus JSONL")->required();
    collect->add_flag("--real-endpoint", real_endpoint, "Use the configured HTTP endpoint instead of the mock");
    collect->add_option("--cache", cache, "Rationale cache file (default <out>/rationale_cache.jsonl)");
    collect->add_option("--perspectives", perspectives, "td and/or cs")->delimiter(',');

    std::string data_path, kind = "arg", teacher, checkpoint, part = "test", argd_ckpt, arg_ckpt;
    std::optional<double> threshold;
    std::vector<std::string> named;
    auto* trn = app.add_subcommand("train", "Train arg, baseline or baseline_plus_rationale");
    trn->add_option("--data", data_path, "Enriched JSONL")->required();
    trn->add_option("--model", kind, "Model kind");
    auto* dst = app.add_subcommand("distill", "Distill an ARG checkpoint into ARG-D");
    dst->add_option("--data", data_path, "Enriched JSONL")->required();
    dst->add_option("--teacher", teacher, "ARG checkpoint")->required();
    auto* evl = app.add_subcommand("eval", "Evaluate a checkpoint");
    evl->add_option("--data", data_path, "Enriched JSONL")->required();
    evl->add_option("--checkpoint", checkpoint, "Checkpoint")->required();
    evl->add_option("--part", part, "train, val or test");
    auto* rte = app.add_subcommand("route", "Sweep ARG-D -> ARG routing thresholds");
    rte->add_option("--data", data_path, "Enriched JSONL")->required();
    rte->add_option("--argd", argd_ckpt, "ARG-D checkpoint")->required();
    rte->add_option("--arg", arg_ckpt, "ARG checkpoint")->required();
    rte->add_option("--part", part, "train, val or test");
    rte->add_option("--threshold", threshold, "Also write per-sample decisions at this threshold");
    auto* rpt = app.add_subcommand("report", "Metrics, voting ensembles and overlap analysis");
    rpt->add_option("--data", data_path, "Enriched JSONL")->required();
    rpt->add_option("--checkpoint", named, "name=path, repeatable (use name 'baseline' for overlap)")->required();
    rpt->add_option("--part", part, "train, val or test");

    std::vector<std::string> argv_store{"argnet"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Context ctx(command, g, args, out);
        if (command == "synth") cmd_synth(ctx, syn_n, syn_td, syn_cs);
        else if (command == "collect")
            cmd_collect(ctx, corpus, real_endpoint, cache.empty() ? std::nullopt : std::optional<std::string>(cache),
                        perspectives);
        else if (command == "train") cmd_train(ctx, data_path, kind);
        else if (command == "distill") cmd_distill(ctx, data_path, teacher);
        else if (command == "eval") cmd_eval(ctx, data_path, checkpoint, part);
        else if (command == "route") cmd_route(ctx, data_path, argd_ckpt, arg_ckpt, part, threshold);
        else if (command == "report") cmd_report(ctx, data_path, named, part);
        return 0;
    } catch (const ValidationError& e) {
        err << json{{"error", "validation"}, {"command", command}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const IngestionError& e) {
        err << json{{"error", "ingestion"}, {"command", command}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const AuthError& e) {
        err << json{{"error", "auth"}, {"command", command}, {"message", e.what()}, {"status", e.status()}}.dump()
            << '\n';
        return 3;
    } catch (const TransportError& e) {
        err << json{{"error", "transport"}, {"command", command}, {"message", e.what()}, {"status", e.status()}}
                   .dump()
            << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << json{{"error", "runtime"}, {"command", command}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace argnet::cli
