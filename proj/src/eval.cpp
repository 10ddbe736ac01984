#include "lmlp/eval.hpp"

#include "lmlp/countries.hpp"
#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/kb_io.hpp"
#include "lmlp/log.hpp"
#include "lmlp/paths.hpp"
#include "lmlp/remote.hpp"
#include "lmlp/split_io.hpp"
#include "lmlp/trace_json.hpp"
#include "lmlp/translators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace lmlp {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kCsvHeader =
    "bucket,K,N,strategy,variant,noise_rate,attempts,reach_rate,verified_rate,mean_steps,mean_ms_per_step";

namespace {

std::string resolve_path(const std::string& p, const std::string& base_dir) {
    if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).string();
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

json prompt_to_json(const PromptSpec& p) {
    json j = {{"strategy", to_string(p.strategy)},
              {"variant", to_string(p.variant)},
              {"n_examples", p.n_examples},
              {"max_steps", p.max_steps},
              {"seed", p.seed},
              {"exclude_used_facts", p.exclude_used_facts},
              {"candidates", p.candidates},
              {"temperature", p.temperature}};
    j["min_score"] = p.min_score ? json(*p.min_score) : json(nullptr);
    return j;
}

PromptSpec prompt_from_json(const json& j) {
    PromptSpec p;
    if (!j.is_object()) return p;
    if (j.contains("strategy")) p.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("variant")) p.variant = parse_variant(j.at("variant").get<std::string>());
    p.n_examples = j.value("n_examples", p.n_examples);
    p.max_steps = j.value("max_steps", p.max_steps);
    p.seed = j.value("seed", p.seed);
    p.exclude_used_facts = j.value("exclude_used_facts", p.exclude_used_facts);
    p.candidates = j.value("candidates", p.candidates);
    p.temperature = j.value("temperature", p.temperature);
    if (j.contains("min_score") && !j.at("min_score").is_null()) p.min_score = j.at("min_score").get<double>();
    return p;
}

const ProofTrace* selected_trace(const QueryRecord& q, std::size_t k, SuccessCriterion c) {
    const std::size_t upto = std::min(k, q.traces.size());
    for (std::size_t i = 0; i < upto; ++i) {
        if (q.traces[i].success(c)) return &q.traces[i];
    }
    return upto == 0 ? nullptr : &q.traces[upto - 1];
}

struct RowTotals {
    std::size_t attempts = 0, reach = 0, verified = 0, steps = 0, timed_steps = 0;
    double ms = 0.0;
};

RowTotals tally(const std::vector<QueryRecord>& queries, std::size_t k, SuccessCriterion c) {
    RowTotals t;
    for (const QueryRecord& q : queries) {
        ++t.attempts;
        if (success_within(q, k, SuccessCriterion::Reach)) ++t.reach;
        if (success_within(q, k, SuccessCriterion::Verified)) ++t.verified;
        if (const ProofTrace* sel = selected_trace(q, k, c)) t.steps += sel->steps.size();
        for (std::size_t i = 0; i < std::min(k, q.traces.size()); ++i) {
            t.ms += q.traces[i].elapsed_ms;
            t.timed_steps += q.traces[i].steps.size();
        }
    }
    return t;
}

ReportRow make_row(const std::string& bucket, std::size_t k, const RunConfig& cfg, double noise_rate,
                   const RowTotals& t) {
    ReportRow r;
    r.bucket = bucket;
    r.k = k;
    r.n = cfg.prompt.n_examples;
    r.strategy = to_string(cfg.prompt.strategy);
    r.variant = to_string(cfg.prompt.variant);
    r.noise_rate = noise_rate;
    r.attempts = t.attempts;
    r.reach = t.reach;
    r.verified = t.verified;
    if (t.attempts > 0) {
        r.reach_rate = static_cast<double>(t.reach) / static_cast<double>(t.attempts);
        r.verified_rate = static_cast<double>(t.verified) / static_cast<double>(t.attempts);
        r.mean_steps = static_cast<double>(t.steps) / static_cast<double>(t.attempts);
    }
    if (cfg.timing && t.timed_steps > 0) r.mean_ms_per_step = t.ms / static_cast<double>(t.timed_steps);
    return r;
}

std::string row_csv(const ReportRow& r) {
    std::string out = csv_field(r.bucket);
    out += "," + std::to_string(r.k) + "," + std::to_string(r.n) + "," + csv_field(r.strategy) + "," +
           csv_field(r.variant) + "," + fixed(r.noise_rate, 2) + "," + std::to_string(r.attempts) + "," +
           fixed(r.reach_rate, 4) + "," + fixed(r.verified_rate, 4) + "," + fixed(r.mean_steps, 3) + "," +
           fixed(r.mean_ms_per_step, 4);
    return out;
}

json row_json(const ReportRow& r) {
    return {{"bucket", r.bucket},
            {"K", r.k},
            {"N", r.n},
            {"strategy", r.strategy},
            {"variant", r.variant},
            {"noise_rate", r.noise_rate},
            {"attempts", r.attempts},
            {"reach", r.reach},
            {"verified", r.verified},
            {"reach_rate", r.reach_rate},
            {"verified_rate", r.verified_rate},
            {"mean_steps", r.mean_steps},
            {"mean_ms_per_step", r.mean_ms_per_step}};
}

void set_dotted(json& j, const std::string& dotted, const json& value) {
    json* at = &j;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) {
            (*at)[part] = value;
            return;
        }
        if (!at->contains(part) || !(*at)[part].is_object()) (*at)[part] = json::object();
        at = &(*at)[part];
        start = dot + 1;
    }
}

}  // namespace

void apply_backend_flag(BackendSelection& sel, std::string_view flag) {
    const std::size_t eq = flag.find('=');
    if (eq == std::string_view::npos) {
        throw Error(ErrorKind::InvalidArgument, "backend flag must look like planner=NAME or translator=NAME");
    }
    const std::string key(flag.substr(0, eq)), value(flag.substr(eq + 1));
    if (key == "planner") {
        if (value != "template" && value != "replay" && value != "remote" && value != "oracle") {
            throw Error(ErrorKind::InvalidArgument, "unknown planner backend '" + value + "'");
        }
        sel.planner = value;
    } else if (key == "translator") {
        if (value != "exact" && value != "hash" && value != "replay" && value != "remote") {
            throw Error(ErrorKind::InvalidArgument, "unknown translator backend '" + value + "'");
        }
        sel.translator = value;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown backend role '" + key + "'");
    }
}

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "run config must be a JSON object");
    RunConfig c;
    try {
        c.split = resolve_path(j.value("split", std::string()), base_dir);
        if (j.contains("buckets")) c.buckets = j.at("buckets").get<std::vector<std::size_t>>();
        if (j.contains("setting") && !j.at("setting").is_null()) c.setting = parse_fact_setting(j.at("setting").get<std::string>());
        c.prompt = prompt_from_json(j.value("prompt", json::object()));
        if (j.contains("ks")) c.ks = j.at("ks").get<std::vector<std::size_t>>();
        if (j.contains("success")) c.prompt.success = parse_success(j.at("success").get<std::string>());
        if (j.contains("backend")) {
            const json& b = j.at("backend");
            if (b.contains("planner")) apply_backend_flag(c.backend, "planner=" + b.at("planner").get<std::string>());
            if (b.contains("translator")) {
                apply_backend_flag(c.backend, "translator=" + b.at("translator").get<std::string>());
            }
            c.backend.planner_fixtures = resolve_path(b.value("planner_fixtures", std::string()), base_dir);
            c.backend.translator_fixtures = resolve_path(b.value("translator_fixtures", std::string()), base_dir);
            c.backend.hash_dim = b.value("hash_dim", c.backend.hash_dim);
        }
        if (j.contains("noise") && !j.at("noise").is_null()) {
            const json& n = j.at("noise");
            NoiseConfig nc;
            nc.rate = n.value("rate", 0.0);
            nc.base = n.value("base", nc.base);
            nc.seed = n.value("seed", nc.seed);
            c.noise = nc;
        }
        c.workers = j.value("workers", c.workers);
        c.timing = j.value("timing", c.timing);
        if (j.contains("output")) {
            c.csv_out = resolve_path(j.at("output").value("csv", std::string()), base_dir);
            c.json_out = resolve_path(j.at("output").value("json", std::string()), base_dir);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("run config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::UnparsableText, path + ": " + e.what());
    }
    return from_json(j, fs::path(path).parent_path().string());
}

json RunConfig::to_json() const {
    json j = {{"split", split},
              {"buckets", buckets},
              {"prompt", prompt_to_json(prompt)},
              {"ks", ks},
              {"success", to_string(prompt.success)},
              {"backend",
               {{"planner", backend.planner},
                {"translator", backend.translator},
                {"planner_fixtures", backend.planner_fixtures},
                {"translator_fixtures", backend.translator_fixtures},
                {"hash_dim", backend.hash_dim}}},
              {"timing", timing}};
    j["setting"] = setting ? json(to_string(*setting)) : json(nullptr);
    j["noise"] = noise ? json{{"rate", noise->rate}, {"base", noise->base}, {"seed", noise->seed}} : json(nullptr);
    return j;
}

void RunConfig::validate() const {
    if (split.empty()) throw Error(ErrorKind::InvalidArgument, "run config needs a split manifest");
    if (ks.empty()) throw Error(ErrorKind::InvalidArgument, "ks must be non-empty");
    for (std::size_t k : ks) {
        if (k == 0) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
    }
    lmlp::validate(prompt);
    if (noise) (void)noise->count();
    if (backend.planner == "replay" && backend.planner_fixtures.empty()) {
        throw Error(ErrorKind::InvalidArgument, "replay planner needs backend.planner_fixtures");
    }
    if (backend.translator == "replay" && backend.translator_fixtures.empty()) {
        throw Error(ErrorKind::InvalidArgument, "replay translator needs backend.translator_fixtures");
    }
    if (!fs::exists(split)) throw Error(ErrorKind::Io, "split manifest not found: " + split);
    for (const std::string& f : {backend.planner_fixtures, backend.translator_fixtures}) {
        if (!f.empty() && !fs::exists(f)) throw Error(ErrorKind::Io, "fixture file not found: " + f);
    }
}

EvalData load_eval_data(const RunConfig& cfg) {
    EvalData data;
    const std::string kind = manifest_kind(cfg.split);
    NoiseConfig noise;
    auto add_bucket = [&](std::string name, KnowledgeBase kb, std::vector<Triple> queries, std::uint64_t salt) {
        EvalBucket b;
        b.name = std::move(name);
        if (noise.count() > 0) {
            NoiseConfig nc = noise;
            nc.seed = derive_seed(noise.seed, salt);
            const TripleSet protect(queries.begin(), queries.end());
            const std::size_t before = kb.size();
            kb = inject_noise(kb, nc, protect);
            b.injected = kb.size() - before;
        }
        b.kb = std::make_shared<const KnowledgeBase>(std::move(kb));
        b.queries = std::move(queries);
        data.buckets.push_back(std::move(b));
    };
    if (kind == "countries") {
        LoadedCountries loaded = read_countries_split(cfg.split);
        data.schema = VerbalizationSchema::countries();
        data.table = CompositionTable::countries();
        data.lib = std::make_shared<const RuleLibrary>(RuleLibrary::load(loaded.rules_path));
        if (cfg.noise) noise = *cfg.noise;
        add_bucket(to_string(loaded.split.task), loaded.split.train_kb, loaded.split.test_queries, 0);
    } else {
        LoadedClutrr loaded = read_clutrr_split(cfg.split);
        data.schema = VerbalizationSchema::kinship();
        data.table = CompositionTable::kinship();
        data.lib = std::make_shared<const RuleLibrary>(RuleLibrary::load(loaded.rules_path));
        noise = cfg.noise ? *cfg.noise : loaded.noise;
        const FactSetting setting = cfg.setting.value_or(loaded.setting);
        std::vector<std::size_t> lengths = cfg.buckets;
        if (lengths.empty()) {
            for (const auto& [len, _] : loaded.split.by_length) lengths.push_back(len);
        }
        std::sort(lengths.begin(), lengths.end());
        lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
        for (std::size_t len : lengths) {
            if (!loaded.split.by_length.count(len)) {
                throw Error(ErrorKind::InvalidArgument, "split has no length-" + std::to_string(len) + " bucket");
            }
            add_bucket(std::to_string(len), loaded.split.bucket_kb(len, setting), loaded.split.bucket_queries(len),
                       len);
        }
    }
    return data;
}

std::optional<std::vector<Triple>> oracle_path(const Triple& query, const KnowledgeBase& kb,
                                               const CompositionTable& table, std::size_t max_len) {
    const std::vector<Triple> drop{query};
    const KnowledgeBase search = kb.contains(query) ? kb.without(drop) : kb;
    std::optional<std::vector<Triple>> best;
    std::string best_key;
    for (auto& p : find_ground_paths(search, query.subject, query.object, max_len)) {
        const auto composed = compose_path(p, table);
        if (!composed || *composed != query.relation) continue;
        std::string key;
        for (const Triple& t : p) key += to_tsv(t) + "\n";
        if (best && (p.size() > best->size() || (p.size() == best->size() && key >= best_key))) continue;
        best = std::move(p);
        best_key = std::move(key);
    }
    return best;
}

Backends make_backends(const BackendSelection& sel, const EvalData& data) {
    Backends b;
    if (sel.planner == "template") {
        b.planner = std::make_unique<TemplatePlanner>(data.schema);
    } else if (sel.planner == "replay") {
        b.planner = std::make_unique<ReplayPlanner>(
            std::make_shared<const FixtureStore>(FixtureStore::load(sel.planner_fixtures)));
    } else if (sel.planner == "remote") {
        b.planner = std::make_unique<RemotePlanner>(RemoteConfig::from_env("LMLP_PLANNER"));
    } else if (sel.planner == "oracle") {
        auto scripted = std::make_unique<ScriptedPlanner>(data.schema);
        for (const EvalBucket& bucket : data.buckets) {
            for (const Triple& q : bucket.queries) {
                if (auto path = oracle_path(q, *bucket.kb, data.table, 10)) scripted->set_script(q, *path);
            }
        }
        b.planner = std::move(scripted);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown planner backend '" + sel.planner + "'");
    }
    if (sel.translator == "exact") {
        b.translator = std::make_unique<ExactStringTranslator>();
    } else if (sel.translator == "hash") {
        b.translator = std::make_unique<HashTranslator>(sel.hash_dim);
    } else if (sel.translator == "replay") {
        b.translator = std::make_unique<ReplayTranslator>(
            std::make_shared<const FixtureStore>(FixtureStore::load(sel.translator_fixtures)));
    } else if (sel.translator == "remote") {
        b.translator = std::make_unique<RemoteTranslator>(RemoteConfig::from_env("LMLP_EMBED"));
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown translator backend '" + sel.translator + "'");
    }
    return b;
}

bool success_within(const QueryRecord& q, std::size_t k, SuccessCriterion c) {
    const std::size_t upto = std::min(k, q.traces.size());
    for (std::size_t i = 0; i < upto; ++i) {
        if (q.traces[i].success(c)) return true;
    }
    return false;
}

MetricsReport evaluate(const RunConfig& cfg) {
    cfg.validate();
    const EvalData data = load_eval_data(cfg);
    const Backends backends = make_backends(cfg.backend, data);
    return evaluate(cfg, data, backends);
}

MetricsReport evaluate(const RunConfig& cfg, const EvalData& data, const Backends& backends) {
    if (cfg.ks.empty()) throw Error(ErrorKind::InvalidArgument, "ks must be non-empty");
    const auto started = std::chrono::steady_clock::now();
    MetricsReport report;
    report.config = cfg;
    std::vector<std::size_t> ks = cfg.ks;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    report.config.ks = ks;

    PromptSpec spec = cfg.prompt;
    spec.ensemble = ks.back();
    spec.short_circuit = false;
    validate(spec);

    const double noise_rate = cfg.noise ? cfg.noise->rate : 0.0;
    for (const EvalBucket& bucket : data.buckets) {
        BucketReport br;
        br.name = bucket.name;
        br.kb_facts = bucket.kb->size();
        br.injected = bucket.injected;
        br.queries.resize(bucket.queries.size());
        const Prover prover(*bucket.kb, *data.lib, data.schema, *backends.planner, *backends.translator, &data.table);
        parallel_for(bucket.queries.size(), cfg.workers, [&](std::size_t i) {
            QueryRecord& rec = br.queries[i];
            rec.query = bucket.queries[i];
            for (std::size_t slot = 0; slot < spec.ensemble; ++slot) {
                try {
                    rec.traces.push_back(prover.prove(rec.query, spec, slot));
                } catch (const Error& e) {
                    if (!e.is_backend_failure()) throw;
                    rec.error = e.what();
                    log_warn("query " + to_tsv(rec.query) + " failed: " + e.what());
                    break;
                }
            }
        });
        report.buckets.push_back(std::move(br));
    }

    // Rows: bucket-major, then an "avg" row per K pooling every query.
    std::vector<QueryRecord> pooled;
    for (const BucketReport& br : report.buckets) {
        for (std::size_t k : ks) {
            report.rows.push_back(make_row(br.name, k, cfg, noise_rate, tally(br.queries, k, spec.success)));
        }
        pooled.insert(pooled.end(), br.queries.begin(), br.queries.end());
    }
    for (std::size_t k : ks) report.rows.push_back(make_row("avg", k, cfg, noise_rate, tally(pooled, k, spec.success)));
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::string MetricsReport::to_csv() const {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const ReportRow& r : rows) out += row_csv(r) + "\n";
    return out;
}

json MetricsReport::to_json() const {
    json rows_j = json::array();
    for (const ReportRow& r : rows) rows_j.push_back(row_json(r));
    json buckets_j = json::array();
    for (const BucketReport& b : buckets) {
        json qs = json::array();
        for (const QueryRecord& q : b.queries) {
            json traces = json::array();
            for (std::size_t slot = 0; slot < q.traces.size(); ++slot) {
                json t = trace_to_json(q.traces[slot]);
                t.erase("prompt");
                t["slot"] = slot;
                t["examples"] = q.traces[slot].examples;
                t["reason"] = q.traces[slot].reason;
                if (config.timing) t["elapsed_ms"] = q.traces[slot].elapsed_ms;
                traces.push_back(std::move(t));
            }
            json by_k = json::object();
            for (std::size_t k : config.ks) {
                by_k[std::to_string(k)] = {{"reach", success_within(q, k, SuccessCriterion::Reach)},
                                           {"verified", success_within(q, k, SuccessCriterion::Verified)}};
            }
            json qj = {{"query", triple_json(q.query)}, {"success", by_k}, {"traces", traces}};
            if (!q.error.empty()) qj["error"] = q.error;
            qs.push_back(std::move(qj));
        }
        buckets_j.push_back({{"name", b.name}, {"kb_facts", b.kb_facts}, {"injected", b.injected}, {"queries", qs}});
    }
    json j = {{"config", config.to_json()}, {"rows", rows_j}, {"buckets", buckets_j}};
    if (config.timing) j["wall_ms"] = wall_ms;
    return j;
}

std::vector<SweepCell> expand_sweep(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "sweep config must be a JSON object");
    const json base = j.value("base", json::object());
    std::vector<SweepCell> cells;
    try {
        if (j.contains("cells")) {
            for (const json& override_j : j.at("cells")) {
                json merged = base;
                merged.merge_patch(override_j);
                cells.push_back({override_j, RunConfig::from_json(merged, base_dir)});
            }
        } else if (j.contains("grid")) {
            std::vector<std::pair<std::string, std::vector<json>>> axes;
            for (const auto& [key, values] : j.at("grid").items()) {
                if (!values.is_array() || values.empty()) {
                    throw Error(ErrorKind::InvalidArgument, "grid axis '" + key + "' needs a non-empty list");
                }
                axes.emplace_back(key, values.get<std::vector<json>>());
            }
            std::vector<std::size_t> idx(axes.size(), 0);
            for (;;) {
                json merged = base, key = json::object();
                for (std::size_t a = 0; a < axes.size(); ++a) {
                    set_dotted(merged, axes[a].first, axes[a].second[idx[a]]);
                    key[axes[a].first] = axes[a].second[idx[a]];
                }
                cells.push_back({key, RunConfig::from_json(merged, base_dir)});
                std::size_t a = axes.size();
                while (a > 0) {
                    --a;
                    if (++idx[a] < axes[a].second.size()) break;
                    idx[a] = 0;
                    if (a == 0) return cells;
                }
                if (axes.empty()) return cells;
            }
        } else {
            cells.push_back({json::object(), RunConfig::from_json(base, base_dir)});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("sweep config: ") + e.what());
    }
    if (cells.empty()) throw Error(ErrorKind::InvalidArgument, "sweep grid is empty");
    return cells;
}

SweepResult sweep(const std::vector<SweepCell>& grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "sweep grid is empty");
    SweepResult out;
    out.cells = grid;
    for (const SweepCell& cell : grid) {
        try {
            out.reports.push_back(evaluate(cell.config));
            out.errors.emplace_back();
        } catch (const std::exception& e) {
            log_warn(std::string("sweep cell failed: ") + e.what());
            out.reports.emplace_back(std::nullopt);
            out.errors.emplace_back(e.what());
        }
    }
    return out;
}

std::string SweepResult::to_csv() const {
    std::vector<std::string> axes;
    for (const SweepCell& c : cells) {
        for (const auto& [k, _] : c.key.items()) {
            if (std::find(axes.begin(), axes.end(), k) == axes.end()) axes.push_back(k);
        }
    }
    std::string out = "cell";
    for (const std::string& a : axes) out += "," + csv_field(a);
    out += ",status,injected," + std::string(kCsvHeader) + "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string prefix = std::to_string(i);
        for (const std::string& a : axes) {
            const json& v = cells[i].key.contains(a) ? cells[i].key.at(a) : json(nullptr);
            prefix += "," + csv_field(v.is_string() ? v.get<std::string>() : v.dump());
        }
        if (!reports[i]) {
            out += prefix + ",error" + std::string(12, ',') + "\n";
            continue;
        }
        std::size_t all_injected = 0;
        for (const BucketReport& b : reports[i]->buckets) all_injected += b.injected;
        for (const ReportRow& r : reports[i]->rows) {
            std::size_t injected = all_injected;
            for (const BucketReport& b : reports[i]->buckets) {
                if (b.name == r.bucket) injected = b.injected;
            }
            out += prefix + ",ok," + std::to_string(injected) + "," + row_csv(r) + "\n";
        }
    }
    return out;
}

json SweepResult::to_json() const {
    json cells_j = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        json c = {{"key", cells[i].key}};
        if (reports[i]) {
            c["report"] = reports[i]->to_json();
        } else {
            c["error"] = errors[i];
        }
        cells_j.push_back(std::move(c));
    }
    return {{"cells", cells_j}};
}

}  // namespace lmlp
