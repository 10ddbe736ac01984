#pragma once
// Goal-directed proof search over chain rules.
//
// A proof is flattened to the ordered fact chain it grounds out in. Depth is
// the number of facts in that chain, except a goal that is itself a KB fact,
// which is a depth-0 proof. Only simple chains (no repeated entity) count.

#include "lmlp/knowledge_base.hpp"
#include "lmlp/logic.hpp"

#include <vector>

namespace lmlp {

struct Proof {
    Triple goal;
    std::vector<Triple> steps;
    std::size_t depth = 0;

    friend bool operator==(const Proof&, const Proof&) = default;
};

// All proofs of `goal` with depth <= max_depth, deduplicated by step chain.
// Order: rule order, then fact order (rules are tried before facts at each
// node). Subgoals are tabled on (relation, subject, budget), so the search is
// polynomial in KB size for a fixed rule set. Rules whose body is not a
// chain are ignored.
std::vector<Proof> backward_chain(const Triple& goal, const KnowledgeBase& kb,
                                  const std::vector<HornRule>& rules, std::size_t max_depth);

bool is_provable(const Triple& goal, const KnowledgeBase& kb, const std::vector<HornRule>& rules,
                 std::size_t max_depth);

}  // namespace lmlp
