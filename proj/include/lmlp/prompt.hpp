#pragma once
// In-context example retrieval and prompt construction.

#include "lmlp/rule_library.hpp"
#include "lmlp/schema.hpp"
#include "lmlp/translators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmlp {

enum class Strategy { RelationMatch, TaskSimilarity, EntityMatch, Random, None, RuleOnly };
enum class Variant { Lmlp, LmlpReverse, OnlyRule, NoPrompt };
enum class SuccessCriterion { Reach, Verified };

std::string to_string(Strategy s);
std::string to_string(Variant v);
std::string to_string(SuccessCriterion c);
Strategy parse_strategy(std::string_view s);
Variant parse_variant(std::string_view s);
SuccessCriterion parse_success(std::string_view s);

struct PromptSpec {
    Strategy strategy = Strategy::RelationMatch;
    Variant variant = Variant::Lmlp;
    std::size_t n_examples = 1;   // N
    std::size_t ensemble = 1;     // K
    std::size_t max_steps = 20;
    std::uint64_t seed = 0;
    bool exclude_used_facts = true;
    std::optional<double> min_score;
    std::size_t candidates = 10;  // sentences sampled per step
    double temperature = 0.8;
    bool short_circuit = true;
    SuccessCriterion success = SuccessCriterion::Reach;
};

// Throws InvalidArgument on N, K or candidates == 0.
void validate(const PromptSpec& spec);

// Example selection for one prompt slot. The examples for slots
// 0, 1, ..., K-1 are consecutive windows of one seeded ordering of the
// candidate pool, so the first K slots are always a prefix of the first
// K' > K slots.
class ExampleRetriever {
public:
    // `translator` is only needed for task-similarity retrieval.
    ExampleRetriever(const RuleLibrary& lib, const VerbalizationSchema& schema,
                     const TranslatorBackend* translator);

    std::vector<std::size_t> retrieve(const Triple& query, const PromptSpec& spec, std::size_t slot) const;

    // Full ordering of the candidate pool for this query.
    std::vector<std::size_t> ordering(const Triple& query, const PromptSpec& spec) const;

private:
    const RuleLibrary& lib_;
    const VerbalizationSchema& schema_;
    const TranslatorBackend* translator_;
    std::vector<EmbeddingVector> task_embeddings_;
};

std::vector<std::size_t> retrieve_examples(const Triple& query, const RuleLibrary& lib,
                                           const PromptSpec& spec, const VerbalizationSchema& schema,
                                           const TranslatorBackend* translator, std::size_t slot = 0);

// "Task: ..." followed by "Step i: ..." lines, each newline-terminated.
std::string render_block(const Triple& task, const std::vector<Triple>& steps,
                         const VerbalizationSchema& schema);
// Same block for an abstract rule, variables printed by name (A, B, ...).
std::string render_block(const HornRule& rule, const VerbalizationSchema& schema);

// lmlp: abstract block then grounded block per example; lmlp-reverse swaps
// them; only-rule keeps the abstract block; no-prompt ignores examples.
// Examples are separated by a blank line, and a blank line precedes the
// final "Task: <query>" line.
std::string build_prompt(const RuleLibrary& lib, const std::vector<std::size_t>& examples,
                         const Triple& query, Variant variant, const VerbalizationSchema& schema);

std::string step_line(std::size_t index, const Triple& fact, const VerbalizationSchema& schema);

}  // namespace lmlp
