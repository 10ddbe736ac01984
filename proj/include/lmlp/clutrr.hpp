#pragma once
// CLUTRR-style kinship splits with controlled proof length.
//
// Each instance is drawn from its own family tree with its own surname, so
// instances never share entities. Instance facts are the L-step chain plus
// the inverse of every chain edge, like a story that mentions both sides of
// each relationship.

#include "lmlp/composition.hpp"
#include "lmlp/family.hpp"
#include "lmlp/rule_library.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lmlp {

struct ClutrrInstance {
    Triple query;
    std::size_t length = 0;
    std::vector<Triple> chain;  // the L-step path from query subject to object
    std::vector<Triple> facts;  // chain plus inverse edges
    std::map<EntityId, Gender> genders;
};

enum class FactSetting { TestFacts, AllFacts };

const char* to_string(FactSetting s);
FactSetting parse_fact_setting(std::string_view text);

struct ClutrrOptions {
    std::size_t graph_size = 0;  // 0: sized from L
    std::size_t max_retries = 200;
};

struct ClutrrSplit {
    std::uint64_t seed = 0;
    std::map<std::size_t, std::vector<ClutrrInstance>> by_length;

    static constexpr std::size_t kMaxRuleLength = 4;

    // (query, instance KB) pairs of lengths 2..4, for rule extraction.
    std::vector<TrainingQuery> rule_training() const;
    // Pooled instance facts of one length; AllFacts adds every fact of the
    // rule-corpus lengths as distractors.
    KnowledgeBase bucket_kb(std::size_t length, FactSetting setting) const;
    std::vector<Triple> bucket_queries(std::size_t length) const;
};

// Throws InvalidArgument for lengths outside [2, 10] and
// CompositionUndefined if retries run out.
ClutrrSplit build_clutrr_split(const std::vector<std::size_t>& lengths, std::size_t per_length,
                               std::uint64_t seed, const CompositionTable& table,
                               const ClutrrOptions& options = {});

}  // namespace lmlp
