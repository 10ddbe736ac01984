#pragma once

#include "lmlp/composition.hpp"
#include "lmlp/knowledge_base.hpp"

#include <string>
#include <vector>

namespace lmlp {

struct Verdict {
    bool reach = false;
    bool verified = false;
    std::string reason;
};

// reach: non-empty chain starting at query.subject, every step in kb, last
// object == query.object. verified: reach and the composed relation equals
// query.relation. `table` may be null, in which case verified is false.
Verdict verify_steps(const std::vector<Triple>& steps, const Triple& query,
                     const CompositionTable* table, const KnowledgeBase& kb);

}  // namespace lmlp
