#include "lmlp/prover.hpp"

#include "lmlp/hashing.hpp"
#include "lmlp/verify.hpp"

#include <chrono>
#include <unordered_set>

namespace lmlp {

std::string to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::Reached: return "reached";
        case TraceStatus::MaxSteps: return "max_steps";
        case TraceStatus::EmptySlice: return "empty_slice";
    }
    return "?";
}

std::vector<Triple> ProofTrace::facts() const {
    std::vector<Triple> out;
    out.reserve(steps.size());
    for (const ProofStep& s : steps) out.push_back(s.fact);
    return out;
}

Prover::Prover(const KnowledgeBase& kb, const RuleLibrary& lib, const VerbalizationSchema& schema,
               const PlannerBackend& planner, const TranslatorBackend& translator,
               const CompositionTable* table)
    : kb_(kb),
      lib_(lib),
      schema_(schema),
      planner_(planner),
      table_(table),
      cache_(kb, schema, translator),
      retriever_(lib, schema_, &translator) {}

ProofTrace Prover::prove(const Triple& query, const PromptSpec& spec, std::size_t slot) const {
    validate(spec);
    const auto started = std::chrono::steady_clock::now();

    ProofTrace trace;
    trace.query = query;
    trace.examples = retriever_.retrieve(query, spec, slot);
    trace.prompt = build_prompt(lib_, trace.examples, query, spec.variant, schema_);

    PlannerRequest request;
    request.prompt = trace.prompt;
    request.n = spec.candidates;
    request.temperature = spec.temperature;
    request.state.query = query;
    if (!trace.examples.empty()) request.state.rule = lib_.at(trace.examples.front()).abstract;

    std::unordered_set<Triple, TripleHash> used;
    EntityId current = query.subject;
    std::vector<std::size_t> slice;
    trace.status = TraceStatus::MaxSteps;
    for (std::size_t step = 1; step <= spec.max_steps; ++step) {
        slice.clear();
        for (std::size_t i : kb_.indices_with_subject(current)) {
            const Triple& f = kb_.fact(i);
            if (f == query) continue;
            if (spec.exclude_used_facts && used.count(f) != 0) continue;
            slice.push_back(i);
        }
        if (slice.empty()) {
            trace.status = TraceStatus::EmptySlice;
            break;
        }
        request.state.current = current;
        request.state.step_index = step;
        request.seed = derive_seed(spec.seed, slot, step);
        const std::vector<std::string> candidates = planner_.propose(request);
        if (candidates.empty()) {
            trace.status = TraceStatus::EmptySlice;
            break;
        }
        const auto chosen = project(candidates, slice, cache_, spec.min_score);
        if (!chosen) {
            trace.status = TraceStatus::EmptySlice;
            break;
        }
        trace.steps.push_back({chosen->fact, chosen->score});
        used.insert(chosen->fact);
        request.prompt += step_line(step, chosen->fact, schema_);
        current = chosen->fact.object;
        if (current == query.object) {
            trace.status = TraceStatus::Reached;
            break;
        }
    }

    const Verdict v = verify_steps(trace.facts(), query, table_, kb_);
    trace.reach = v.reach;
    trace.verified = v.verified;
    trace.reason = v.reason;
    trace.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

EnsembleResult Prover::ensemble_prove(const Triple& query, const PromptSpec& spec) const {
    validate(spec);
    EnsembleResult out;
    for (std::size_t k = 0; k < spec.ensemble; ++k) {
        out.per_prompt.push_back(prove(query, spec, k));
        if (!out.first_success_index && out.per_prompt.back().success(spec.success)) {
            out.first_success_index = k;
            out.success_any = true;
            if (spec.short_circuit) break;
        }
    }
    return out;
}

ProofTrace prove(const Triple& query, const KnowledgeBase& kb, const RuleLibrary& lib,
                 const PromptSpec& spec, const PlannerBackend& planner,
                 const TranslatorBackend& translator, const VerbalizationSchema& schema,
                 const CompositionTable* table) {
    return Prover(kb, lib, schema, planner, translator, table).prove(query, spec);
}

EnsembleResult ensemble_prove(const Triple& query, const KnowledgeBase& kb, const RuleLibrary& lib,
                              const PromptSpec& spec, const PlannerBackend& planner,
                              const TranslatorBackend& translator, const VerbalizationSchema& schema,
                              const CompositionTable* table) {
    return Prover(kb, lib, schema, planner, translator, table).ensemble_prove(query, spec);
}

}  // namespace lmlp
