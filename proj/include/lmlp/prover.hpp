#pragma once
// The iterative generate / project / append proof loop.

#include "lmlp/composition.hpp"
#include "lmlp/planners.hpp"
#include "lmlp/projection.hpp"
#include "lmlp/prompt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lmlp {

enum class TraceStatus { Reached, MaxSteps, EmptySlice };
std::string to_string(TraceStatus s);

struct ProofStep {
    Triple fact;
    double score = 0.0;
};

struct ProofTrace {
    Triple query;
    std::string prompt;  // the initial prompt; accepted steps are appended per step
    std::vector<std::size_t> examples;
    std::vector<ProofStep> steps;
    TraceStatus status = TraceStatus::MaxSteps;
    bool reach = false;
    bool verified = false;
    std::string reason;
    double elapsed_ms = 0.0;

    std::vector<Triple> facts() const;
    bool success(SuccessCriterion c) const { return c == SuccessCriterion::Reach ? reach : verified; }
};

struct EnsembleResult {
    std::vector<ProofTrace> per_prompt;
    bool success_any = false;
    std::optional<std::size_t> first_success_index;
};

// Binds a KB, rule library and backends. Construction precomputes fact and
// task embeddings; afterwards the prover is read-only and prove() may be
// called from several threads, provided the planner is thread-safe.
class Prover {
public:
    Prover(const KnowledgeBase& kb, const RuleLibrary& lib, const VerbalizationSchema& schema,
           const PlannerBackend& planner, const TranslatorBackend& translator,
           const CompositionTable* table = nullptr);

    // One proof attempt using the examples of prompt slot `slot`.
    ProofTrace prove(const Triple& query, const PromptSpec& spec, std::size_t slot = 0) const;

    // Up to spec.ensemble prompts; stops at the first success when
    // spec.short_circuit is set.
    EnsembleResult ensemble_prove(const Triple& query, const PromptSpec& spec) const;

    const FactEmbeddingCache& fact_cache() const { return cache_; }

private:
    const KnowledgeBase& kb_;
    const RuleLibrary& lib_;
    VerbalizationSchema schema_;
    const PlannerBackend& planner_;
    const CompositionTable* table_;
    FactEmbeddingCache cache_;
    ExampleRetriever retriever_;
};

ProofTrace prove(const Triple& query, const KnowledgeBase& kb, const RuleLibrary& lib,
                 const PromptSpec& spec, const PlannerBackend& planner,
                 const TranslatorBackend& translator, const VerbalizationSchema& schema,
                 const CompositionTable* table = nullptr);

EnsembleResult ensemble_prove(const Triple& query, const KnowledgeBase& kb, const RuleLibrary& lib,
                              const PromptSpec& spec, const PlannerBackend& planner,
                              const TranslatorBackend& translator, const VerbalizationSchema& schema,
                              const CompositionTable* table = nullptr);

}  // namespace lmlp
