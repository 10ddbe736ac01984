#pragma once
// Evaluation harness: run ensembles over bucketed query sets and report
// per-bucket, per-K success rates.

#include "lmlp/clutrr.hpp"
#include "lmlp/composition.hpp"
#include "lmlp/fixtures.hpp"
#include "lmlp/noise.hpp"
#include "lmlp/prover.hpp"
#include "lmlp/rule_library.hpp"
#include "lmlp/schema.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lmlp {

struct BackendSelection {
    std::string planner = "template";   // template | replay | remote | oracle
    std::string translator = "hash";    // exact | hash | replay | remote
    std::string planner_fixtures;       // replay planner input
    std::string translator_fixtures;    // replay translator input
    std::uint64_t hash_dim = kDefaultHashDim;
};

// Parses "planner=template" / "translator=hash" into sel. Throws
// InvalidArgument on anything else.
void apply_backend_flag(BackendSelection& sel, std::string_view flag);

struct RunConfig {
    std::string split;                 // manifest path
    std::vector<std::size_t> buckets;  // CLUTRR lengths; empty means all
    std::optional<FactSetting> setting;
    PromptSpec prompt;                 // prompt.ensemble is max(ks)
    std::vector<std::size_t> ks{1};
    BackendSelection backend;
    std::optional<NoiseConfig> noise;  // unset: the manifest's
    std::size_t workers = 0;           // 0: hardware concurrency
    bool timing = false;               // off keeps reports byte-stable
    std::string csv_out, json_out;

    // Relative paths resolve against base_dir. Throws InvalidArgument /
    // UnparsableText.
    static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
    static RunConfig load(const std::string& path);
    nlohmann::json to_json() const;
    // Throws InvalidArgument on inconsistent settings.
    void validate() const;
};

struct EvalBucket {
    std::string name;
    std::shared_ptr<const KnowledgeBase> kb;
    std::vector<Triple> queries;
    std::size_t injected = 0;
};

struct EvalData {
    std::vector<EvalBucket> buckets;
    std::shared_ptr<const RuleLibrary> lib;
    VerbalizationSchema schema;
    CompositionTable table;
};

// Reads the split named by cfg, selects buckets and injects noise
// (protecting every bucket query).
EvalData load_eval_data(const RunConfig& cfg);

struct Backends {
    std::unique_ptr<PlannerBackend> planner;
    std::unique_ptr<TranslatorBackend> translator;
    std::vector<std::unique_ptr<PlannerBackend>> owned;  // wrapped inner planners
};

// "oracle" scripts each query's shortest composing proof; used to record
// replay fixtures.
Backends make_backends(const BackendSelection& sel, const EvalData& data);

// Shortest simple path from query.subject to query.object whose
// composition is query.relation (ties on tab rendering), if any.
std::optional<std::vector<Triple>> oracle_path(const Triple& query, const KnowledgeBase& kb,
                                               const CompositionTable& table, std::size_t max_len);

struct QueryRecord {
    Triple query;
    std::vector<ProofTrace> traces;  // one per slot, up to max K
    std::string error;               // backend failure, counted as failure
};

struct ReportRow {
    std::string bucket;
    std::size_t k = 1;
    std::size_t n = 1;
    std::string strategy, variant;
    double noise_rate = 0.0;
    std::size_t attempts = 0;
    std::size_t reach = 0, verified = 0;
    double reach_rate = 0.0, verified_rate = 0.0;
    double mean_steps = 0.0;
    double mean_ms_per_step = 0.0;
};

struct BucketReport {
    std::string name;
    std::size_t kb_facts = 0;
    std::size_t injected = 0;
    std::vector<QueryRecord> queries;
};

struct MetricsReport {
    RunConfig config;
    std::vector<BucketReport> buckets;
    std::vector<ReportRow> rows;  // bucket-major, K ascending; then "avg" rows
    double wall_ms = 0.0;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

extern const char* const kCsvHeader;

// Success of one query within its first k traces.
bool success_within(const QueryRecord& q, std::size_t k, SuccessCriterion c);

MetricsReport evaluate(const RunConfig& cfg);
MetricsReport evaluate(const RunConfig& cfg, const EvalData& data, const Backends& backends);

// Sweep configs: {"base": RunConfig, "grid": {"prompt.n_examples": [1,2,3], ...}}
// expands to the cartesian product in key order; or {"cells": [RunConfig...]}.
struct SweepCell {
    nlohmann::json key;  // varied dimension -> value
    RunConfig config;
};
std::vector<SweepCell> expand_sweep(const nlohmann::json& j, const std::string& base_dir = "");

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<std::optional<MetricsReport>> reports;
    std::vector<std::string> errors;  // per cell; empty when it ran

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

// Failures are isolated per cell.
SweepResult sweep(const std::vector<SweepCell>& grid);

}  // namespace lmlp
