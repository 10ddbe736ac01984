#include "lmlp/verify.hpp"

namespace lmlp {

Verdict verify_steps(const std::vector<Triple>& steps, const Triple& query,
                     const CompositionTable* table, const KnowledgeBase& kb) {
    Verdict v;
    if (steps.empty()) {
        v.reason = "empty trace";
        return v;
    }
    if (steps.front().subject != query.subject) {
        v.reason = "first step does not start at the query subject";
        return v;
    }
    if (!is_chain(steps)) {
        v.reason = "chain constraint violated";
        return v;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!kb.contains(steps[i])) {
            v.reason = "step " + std::to_string(i + 1) + " is not a KB fact";
            return v;
        }
    }
    if (steps.back().object != query.object) {
        v.reason = "path ends at " + steps.back().object.text() + ", not " + query.object.text();
        return v;
    }
    v.reach = true;
    if (table == nullptr) {
        v.reason = "reached; no composition table";
        return v;
    }
    const auto composed = compose_path(steps, *table);
    if (!composed) {
        v.reason = "reached; composition undefined";
    } else if (*composed != query.relation) {
        v.reason = "reached; path composes to " + composed->text();
    } else {
        v.verified = true;
        v.reason = "verified";
    }
    return v;
}

}  // namespace lmlp
