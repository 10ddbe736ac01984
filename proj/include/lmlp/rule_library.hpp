#pragma once

#include "lmlp/composition.hpp"
#include "lmlp/knowledge_base.hpp"
#include "lmlp/logic.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lmlp {

// The rule set R: grounded examples and their abstractions, bucketed by the
// task relation.
class RuleLibrary {
public:
    struct Entry {
        RuleExample example;
        HornRule abstract;
    };

    RuleLibrary() = default;

    // Throws ChainBroken for malformed examples.
    void add(const RuleExample& ex);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& at(std::size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Indices of examples whose task relation is r (insertion order).
    const std::vector<std::size_t>& with_relation(RelationId r) const;
    const std::map<RelationId, std::vector<std::size_t>>& by_relation() const { return by_relation_; }

    // JSON list of {task, steps[], abstract:{head, body[]}} with tab-encoded
    // atoms and ?A-style variables.
    std::string to_json_text() const;
    static RuleLibrary from_json_text(std::string_view text);
    static RuleLibrary load(const std::string& path);

private:
    std::vector<Entry> entries_;
    std::map<RelationId, std::vector<std::size_t>> by_relation_;
};

using TrainingQuery = std::pair<Triple, KnowledgeBase>;

// One example per provable training query: the shortest ground path from
// the task subject to its object (the task fact itself excluded), ties
// broken on the tab-rendered steps. With a table, a path only counts if it
// composes to the task relation. Unprovable queries are skipped with a
// warning.
RuleLibrary extract_rule_library(const std::vector<TrainingQuery>& train, std::size_t max_len,
                                 const CompositionTable* table = nullptr);

}  // namespace lmlp
