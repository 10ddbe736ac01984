// lmlp: curate datasets, prove queries, evaluate and sweep.
//
// Exit codes: 0 success, 1 validation or input error, 2 backend failure.

#include "lmlp/clutrr.hpp"
#include "lmlp/countries.hpp"
#include "lmlp/data_files.hpp"
#include "lmlp/error.hpp"
#include "lmlp/eval.hpp"
#include "lmlp/kb_io.hpp"
#include "lmlp/log.hpp"
#include "lmlp/remote.hpp"
#include "lmlp/split_io.hpp"
#include "lmlp/trace_json.hpp"
#include "lmlp/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

using namespace lmlp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitBackend = 2;

// "2..10", "5", or "2,3,4".
std::vector<std::size_t> parse_lengths(const std::string& text) {
    std::vector<std::size_t> out;
    try {
        if (auto dots = text.find(".."); dots != std::string::npos) {
            const std::size_t lo = std::stoul(text.substr(0, dots)), hi = std::stoul(text.substr(dots + 2));
            if (lo > hi) throw Error(ErrorKind::InvalidArgument, "empty length range " + text);
            for (std::size_t l = lo; l <= hi; ++l) out.push_back(l);
            return out;
        }
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t comma = text.find(',', start);
            out.push_back(std::stoul(text.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidArgument, "cannot parse lengths '" + text + "'");
    }
    return out;
}

VerbalizationSchema schema_named(const std::string& name) {
    if (name == "kinship") return VerbalizationSchema::kinship();
    if (name == "countries") return VerbalizationSchema::countries();
    return VerbalizationSchema::load(name);
}

CompositionTable table_named(const std::string& name) {
    if (name == "kinship") return CompositionTable::kinship();
    if (name == "countries") return CompositionTable::countries();
    return CompositionTable::load(name);
}

// Tab-separated, a schema sentence, or three whitespace-separated tokens.
Triple parse_query(const std::string& text, const VerbalizationSchema& schema) {
    if (text.find('\t') != std::string::npos) return parse_fact_line(text);
    try {
        return schema.parse(text);
    } catch (const Error&) {
    }
    std::istringstream in(text);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    if (tokens.size() != 3) {
        throw Error(ErrorKind::UnparsableText, "query must be 'subject relation object' or a schema sentence");
    }
    return Triple::make(tokens[0], tokens[1], tokens[2]);
}

void emit(const std::string& path, const std::string& text, bool force) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text, force);
    }
}

void refuse_existing(const std::vector<std::string>& paths, bool force) {
    if (force) return;
    for (const std::string& p : paths) {
        if (!p.empty() && p != "-" && fs::exists(p)) throw Error(ErrorKind::Io, p + " exists (use --force to overwrite)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LMLP reasoning engine: curate, prove, evaluate"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Log progress to standard error");

    // curate
    auto* curate = app.add_subcommand("curate", "Generate a benchmark split");
    curate->require_subcommand(1);
    auto* clutrr = curate->add_subcommand("clutrr", "CLUTRR-style kinship split");
    std::string lengths_text = "2..10", out_dir, setting_text = "test-facts";
    std::size_t per_length = 50;
    std::uint64_t seed = 7;
    double noise_rate = 0.0;
    std::size_t noise_base = 5000;
    std::uint64_t noise_seed = 0;
    bool no_stories = false, force = false;
    clutrr->add_option("--lengths", lengths_text, "Proof lengths, e.g. 2..10 or 2,5,7")->capture_default_str();
    clutrr->add_option("--per-length", per_length, "Instances per length")->capture_default_str();
    clutrr->add_option("--seed", seed, "Generation seed")->capture_default_str();
    clutrr->add_option("--out", out_dir, "Output directory")->required();
    clutrr->add_option("--setting", setting_text, "test-facts or all-facts")->capture_default_str();
    clutrr->add_option("--noise-rate", noise_rate, "Default evaluation noise rate")->capture_default_str();
    clutrr->add_option("--noise-base", noise_base, "Noise base count")->capture_default_str();
    clutrr->add_option("--noise-seed", noise_seed, "Noise seed")->capture_default_str();
    clutrr->add_flag("--no-stories", no_stories, "Skip story export");
    clutrr->add_flag("--force", force, "Overwrite existing outputs");

    auto* countries = curate->add_subcommand("countries", "Countries S1/S2/S3 task");
    std::string raw_kb = data_path("countries_mini.tsv"), task_text = "S1";
    double test_fraction = 0.2;
    countries->add_option("--kb", raw_kb, "Raw countries KB")->capture_default_str();
    countries->add_option("--task", task_text, "S1, S2 or S3")->capture_default_str();
    countries->add_option("--test-fraction", test_fraction, "Fraction of countries held out")->capture_default_str();
    countries->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    countries->add_option("--out", out_dir, "Output directory")->required();
    countries->add_flag("--force", force, "Overwrite existing outputs");

    // prove
    auto* prove_cmd = app.add_subcommand("prove", "Prove one query and print its trace as JSON");
    std::string kb_path, rules_path, query_text, schema_name = "kinship", table_name, strategy = "relation-match",
                variant = "lmlp", planner_fixtures, translator_fixtures;
    std::vector<std::string> backend_flags;
    std::size_t n_examples = 1, k = 1, max_steps = 20;
    std::uint64_t prove_seed = 0;
    prove_cmd->add_option("--kb", kb_path, "Fact file")->required();
    prove_cmd->add_option("--rules", rules_path, "Rule library JSON")->required();
    prove_cmd->add_option("--query", query_text, "Query triple or sentence")->required();
    prove_cmd->add_option("--schema", schema_name, "kinship, countries or a schema JSON path")->capture_default_str();
    prove_cmd->add_option("--composition", table_name, "kinship, countries or a table JSON path (default: schema)");
    prove_cmd->add_option("--strategy", strategy, "Example retrieval strategy")->capture_default_str();
    prove_cmd->add_option("--variant", variant, "lmlp, lmlp-reverse, only-rule, no-prompt")->capture_default_str();
    prove_cmd->add_option("--n", n_examples, "Examples per prompt")->capture_default_str();
    prove_cmd->add_option("--k", k, "Prompt ensemble size")->capture_default_str();
    prove_cmd->add_option("--max-steps", max_steps, "Step budget")->capture_default_str();
    prove_cmd->add_option("--seed", prove_seed, "Sampling seed")->capture_default_str();
    prove_cmd->add_option("--backend", backend_flags, "planner=template|replay|remote translator=exact|hash|remote");
    prove_cmd->add_option("--planner-fixtures", planner_fixtures, "Fixture file for the replay planner");
    prove_cmd->add_option("--translator-fixtures", translator_fixtures, "Fixture file for the replay translator");

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run one evaluation config");
    std::string config_path, csv_out, json_out;
    std::optional<std::size_t> workers;
    evaluate_cmd->add_option("--config", config_path, "Run config JSON")->required();
    evaluate_cmd->add_option("--csv", csv_out, "CSV report path (overrides config)");
    evaluate_cmd->add_option("--json", json_out, "JSON report path (overrides config)");
    evaluate_cmd->add_option("--workers", workers, "Worker threads (default: logical cores)");
    evaluate_cmd->add_option("--backend", backend_flags, "planner=... translator=...");
    evaluate_cmd->add_flag("--timing", "Record wall-clock per step");
    evaluate_cmd->add_flag("--force", force, "Overwrite existing outputs");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of evaluation configs");
    sweep_cmd->add_option("--config", config_path, "Sweep config JSON")->required();
    sweep_cmd->add_option("--csv", csv_out, "Summary CSV path");
    sweep_cmd->add_option("--json", json_out, "Summary JSON path");
    sweep_cmd->add_option("--workers", workers, "Worker threads per cell");
    sweep_cmd->add_option("--backend", backend_flags, "planner=... translator=...");
    sweep_cmd->add_flag("--force", force, "Overwrite existing outputs");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Check a proof trace against a KB");
    std::string trace_path;
    verify_cmd->add_option("--kb", kb_path, "Fact file")->required();
    verify_cmd->add_option("--trace", trace_path, "Trace JSON from prove, or a fact file whose query record is the task")
        ->required();
    verify_cmd->add_option("--query", query_text, "Query (overrides the trace's)");
    verify_cmd->add_option("--schema", schema_name, "kinship, countries or a schema JSON path")->capture_default_str();
    verify_cmd->add_option("--composition", table_name, "Composition table (default: schema)");

    // record-fixtures
    auto* record_cmd = app.add_subcommand("record-fixtures", "Record planner responses for later replay");
    std::string source = "oracle", fixtures_out;
    record_cmd->add_option("--config", config_path, "Run config JSON")->required();
    record_cmd->add_option("--source", source, "Planner to record: oracle, template or remote")->capture_default_str();
    record_cmd->add_option("--out", fixtures_out, "Fixture file to write")->required();
    record_cmd->add_option("--workers", workers, "Worker threads");
    record_cmd->add_flag("--force", force, "Overwrite existing outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }
    set_log_level(verbose ? LogLevel::Info : LogLevel::Warn);

    try {
        if (*clutrr) {
            NoiseConfig noise{noise_rate, noise_base, noise_seed};
            (void)noise.count();
            const FactSetting setting = parse_fact_setting(setting_text);
            refuse_existing({(fs::path(out_dir) / "manifest.json").string()}, force);
            const CompositionTable table = CompositionTable::kinship();
            const ClutrrSplit split = build_clutrr_split(parse_lengths(lengths_text), per_length, seed, table);
            const RuleLibrary rules = clutrr_rule_library(split, table);
            write_clutrr_split(out_dir, split, rules, VerbalizationSchema::kinship(),
                               {setting, noise, !no_stories, force});
            std::cerr << "wrote " << (fs::path(out_dir) / "manifest.json").string() << " (" << rules.size()
                      << " rule examples)\n";
        } else if (*countries) {
            const CountriesTask task = parse_countries_task(task_text);
            refuse_existing({(fs::path(out_dir) / "manifest.json").string()}, force);
            const CountriesSplit split = build_countries_tasks(load_kb(raw_kb), task, test_fraction, seed);
            const RuleLibrary rules = countries_rule_library(split);
            write_countries_split(out_dir, split, rules, {seed, test_fraction, force});
            std::cerr << "wrote " << (fs::path(out_dir) / "manifest.json").string() << " ("
                      << split.test_queries.size() << " test queries)\n";
        } else if (*prove_cmd) {
            const VerbalizationSchema schema = schema_named(schema_name);
            const CompositionTable table = table_named(table_name.empty() ? schema_name : table_name);
            const KnowledgeBase kb = load_kb(kb_path);
            const RuleLibrary lib = RuleLibrary::load(rules_path);
            const Triple query = parse_query(query_text, schema);
            PromptSpec spec;
            spec.strategy = parse_strategy(strategy);
            spec.variant = parse_variant(variant);
            spec.n_examples = n_examples;
            spec.ensemble = k;
            spec.max_steps = max_steps;
            spec.seed = prove_seed;
            validate(spec);
            BackendSelection sel;
            for (const std::string& f : backend_flags) apply_backend_flag(sel, f);
            sel.planner_fixtures = planner_fixtures;
            sel.translator_fixtures = translator_fixtures;
            if (sel.planner == "oracle") throw Error(ErrorKind::InvalidArgument, "prove has no oracle planner");
            EvalData data;
            data.schema = schema;
            data.table = table;
            const Backends backends = make_backends(sel, data);
            const Prover prover(kb, lib, schema, *backends.planner, *backends.translator, &table);
            const EnsembleResult result = prover.ensemble_prove(query, spec);
            json traces = json::array();
            for (const ProofTrace& t : result.per_prompt) traces.push_back(trace_to_json(t));
            json out = {{"query", triple_json(query)}, {"success", result.success_any}, {"traces", traces}};
            out["first_success"] = result.first_success_index ? json(*result.first_success_index) : json(nullptr);
            std::cout << out.dump(2) << "\n";
        } else if (*evaluate_cmd) {
            RunConfig cfg = RunConfig::load(config_path);
            for (const std::string& f : backend_flags) apply_backend_flag(cfg.backend, f);
            if (workers) cfg.workers = *workers;
            if (evaluate_cmd->count("--timing") > 0) cfg.timing = true;
            if (!csv_out.empty()) cfg.csv_out = csv_out;
            if (!json_out.empty()) cfg.json_out = json_out;
            cfg.validate();
            refuse_existing({cfg.csv_out, cfg.json_out}, force);
            const MetricsReport report = evaluate(cfg);
            if (cfg.csv_out.empty() && cfg.json_out.empty()) {
                std::cout << report.to_csv();
            } else {
                if (!cfg.csv_out.empty()) emit(cfg.csv_out, report.to_csv(), force);
                if (!cfg.json_out.empty()) emit(cfg.json_out, report.to_json().dump(2) + "\n", force);
            }
        } else if (*sweep_cmd) {
            json j;
            try {
                j = json::parse(read_text_file(config_path));
            } catch (const json::exception& e) {
                throw Error(ErrorKind::UnparsableText, config_path + ": " + e.what());
            }
            std::vector<SweepCell> cells = expand_sweep(j, fs::path(config_path).parent_path().string());
            for (SweepCell& c : cells) {
                for (const std::string& f : backend_flags) apply_backend_flag(c.config.backend, f);
                if (workers) c.config.workers = *workers;
                c.config.validate();
            }
            if (csv_out.empty() && j.contains("output")) csv_out = j["output"].value("csv", std::string());
            if (json_out.empty() && j.contains("output")) json_out = j["output"].value("json", std::string());
            refuse_existing({csv_out, json_out}, force);
            const SweepResult result = sweep(cells);
            if (csv_out.empty() && json_out.empty()) {
                std::cout << result.to_csv();
            } else {
                if (!csv_out.empty()) emit(csv_out, result.to_csv(), force);
                if (!json_out.empty()) emit(json_out, result.to_json().dump(2) + "\n", force);
            }
            for (const std::string& e : result.errors) {
                if (!e.empty()) std::cerr << "cell failed: " << e << "\n";
            }
        } else if (*verify_cmd) {
            const VerbalizationSchema schema = schema_named(schema_name);
            const CompositionTable table = table_named(table_name.empty() ? schema_name : table_name);
            const KnowledgeBase kb = load_kb(kb_path);
            std::optional<Triple> query;
            std::vector<Triple> steps;
            const std::string text = read_text_file(trace_path);
            const json parsed = json::parse(text, nullptr, false);
            if (!parsed.is_discarded() && parsed.is_object() && parsed.contains("steps")) {
                const json& q = parsed.at("query");
                query = Triple::make(q.at("s").get<std::string>(), q.at("p").get<std::string>(),
                                     q.at("o").get<std::string>());
                for (const json& s : parsed.at("steps")) {
                    steps.push_back(Triple::make(s.at("s").get<std::string>(), s.at("p").get<std::string>(),
                                                 s.at("o").get<std::string>()));
                }
            } else {
                std::istringstream in(text);
                FactFile ff = read_fact_stream(in);
                query = ff.query;
                steps = std::move(ff.facts);
            }
            if (!query_text.empty()) query = parse_query(query_text, schema);
            if (!query) throw Error(ErrorKind::InvalidArgument, "no query given and none in the trace file");
            const Verdict v = verify_steps(steps, *query, &table, kb);
            std::cout << json{{"query", triple_json(*query)},
                              {"reach", v.reach},
                              {"verified", v.verified},
                              {"reason", v.reason}}
                             .dump(2)
                      << "\n";
        } else if (*record_cmd) {
            RunConfig cfg = RunConfig::load(config_path);
            if (workers) cfg.workers = *workers;
            if (source == "replay") throw Error(ErrorKind::InvalidArgument, "cannot record from the replay planner");
            apply_backend_flag(cfg.backend, "planner=" + source);
            cfg.backend.planner_fixtures.clear();
            const BackendSelection source_sel = cfg.backend;
            cfg.validate();
            refuse_existing({fixtures_out}, force);
            const EvalData data = load_eval_data(cfg);
            Backends inner = make_backends(source_sel, data);
            FixtureStore store;
            Backends recording;
            recording.translator = std::move(inner.translator);
            recording.planner = std::make_unique<RecordingPlanner>(*inner.planner, store);
            recording.owned.push_back(std::move(inner.planner));
            const MetricsReport report = evaluate(cfg, data, recording);
            store.save(fixtures_out, force);
            std::cerr << "recorded " << store.size() << " planner responses to " << fixtures_out << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_backend_failure() ? kExitBackend : kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
