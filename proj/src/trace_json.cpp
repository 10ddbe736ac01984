#include "lmlp/trace_json.hpp"

namespace lmlp {

nlohmann::json triple_json(const Triple& t) {
    return {{"s", t.subject.text()}, {"p", t.relation.text()}, {"o", t.object.text()}};
}

nlohmann::json trace_to_json(const ProofTrace& trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const ProofStep& s : trace.steps) {
        nlohmann::json j = triple_json(s.fact);
        j["score"] = s.score;
        steps.push_back(std::move(j));
    }
    return {{"query", triple_json(trace.query)},
            {"prompt", trace.prompt},
            {"steps", steps},
            {"status", to_string(trace.status)},
            {"reach", trace.reach},
            {"verified", trace.verified}};
}

}  // namespace lmlp
