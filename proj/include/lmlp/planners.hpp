#pragma once
// Planner backends (the generative side of the proof loop).

#include "lmlp/logic.hpp"
#include "lmlp/schema.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lmlp {

class FixtureStore;

// Structured view of the prompt, for backends that do not read text.
struct PromptState {
    Triple query;
    std::optional<HornRule> rule;  // abstraction of the first retrieved example
    EntityId current;              // frontier entity
    std::size_t step_index = 1;    // 1-based index of the step being proposed
};

struct PlannerRequest {
    std::string prompt;
    std::size_t n = 10;
    double temperature = 0.8;
    std::uint64_t seed = 0;
    std::size_t max_tokens = 32;
    std::string stop = "\n";
    PromptState state;
};

// Wire-level body used for remote calls and fixture keys. The structured
// state is deliberately not part of it.
nlohmann::json canonical_request(const PlannerRequest& r);

class PlannerBackend {
public:
    virtual ~PlannerBackend() = default;
    // Exactly r.n candidate sentences; padding with repeats is allowed.
    virtual std::vector<std::string> propose(const PlannerRequest& r) const = 0;
    virtual std::string name() const = 0;
};

// Deterministic stand-in for a sampled LM. Candidate 1 renders body atom
// `step_index` of the rule with the frontier entity as subject and a
// placeholder object; the rest cycle through the schema's other relations
// in a seeded order. Past the end of the rule only relation-vocabulary
// candidates are produced.
class TemplatePlanner final : public PlannerBackend {
public:
    explicit TemplatePlanner(VerbalizationSchema schema, std::string placeholder = "?ENT")
        : schema_(std::move(schema)), placeholder_(std::move(placeholder)) {}

    std::vector<std::string> propose(const PlannerRequest& r) const override;
    std::string name() const override { return "template"; }

    // True when the rule has no atom left for this step.
    static bool rule_exhausted(const PromptState& s);

private:
    VerbalizationSchema schema_;
    std::string placeholder_;
};

// Emits a fixed sentence per (query, step): used to replay ground-truth
// proofs. Unknown queries or steps beyond the script yield the query's own
// task sentence.
class ScriptedPlanner final : public PlannerBackend {
public:
    explicit ScriptedPlanner(VerbalizationSchema schema) : schema_(std::move(schema)) {}

    void set_script(const Triple& query, std::vector<Triple> steps);
    std::vector<std::string> propose(const PlannerRequest& r) const override;
    std::string name() const override { return "scripted"; }

private:
    VerbalizationSchema schema_;
    std::map<std::string, std::vector<Triple>> scripts_;
};

class RecordingPlanner final : public PlannerBackend {
public:
    RecordingPlanner(const PlannerBackend& inner, FixtureStore& store) : inner_(inner), store_(store) {}
    std::vector<std::string> propose(const PlannerRequest& r) const override;
    std::string name() const override { return inner_.name(); }

private:
    const PlannerBackend& inner_;
    FixtureStore& store_;
};

// Serves recorded responses byte-exact; ReplayMiss otherwise.
class ReplayPlanner final : public PlannerBackend {
public:
    explicit ReplayPlanner(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}
    std::vector<std::string> propose(const PlannerRequest& r) const override;
    std::string name() const override { return "replay"; }

private:
    std::shared_ptr<const FixtureStore> store_;
};

}  // namespace lmlp
