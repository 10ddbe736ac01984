#include "lmlp/planners.hpp"

#include "lmlp/error.hpp"
#include "lmlp/fixtures.hpp"
#include "lmlp/hashing.hpp"

#include <algorithm>

namespace lmlp {

nlohmann::json canonical_request(const PlannerRequest& r) {
    return {{"prompt", r.prompt},   {"n", r.n},       {"temperature", r.temperature},
            {"max_tokens", r.max_tokens}, {"stop", r.stop}, {"seed", r.seed}};
}

namespace {

std::vector<std::string> pad_to(std::vector<std::string> out, std::size_t n) {
    if (out.empty()) return out;
    const std::size_t distinct = out.size();
    for (std::size_t i = 0; out.size() < n; ++i) out.push_back(out[i % distinct]);
    out.resize(n);
    return out;
}

}  // namespace

bool TemplatePlanner::rule_exhausted(const PromptState& s) {
    return !s.rule || s.step_index == 0 || s.step_index > s.rule->body.size();
}

std::vector<std::string> TemplatePlanner::propose(const PlannerRequest& r) const {
    if (r.n == 0) return {};
    const PromptState& st = r.state;
    const std::string current = st.current.valid() ? st.current.text() : std::string("?");
    std::vector<std::string> out;
    std::optional<RelationId> rule_relation;
    if (!rule_exhausted(st)) {
        rule_relation = st.rule->body[st.step_index - 1].relation;
        if (schema_.has(*rule_relation)) out.push_back(schema_.render(current, *rule_relation, placeholder_));
    }
    const auto& vocab = schema_.relations();
    for (std::size_t i : permutation(vocab.size(), r.seed)) {
        if (out.size() >= r.n) break;
        if (rule_relation && vocab[i] == *rule_relation) continue;
        out.push_back(schema_.render(current, vocab[i], placeholder_));
    }
    return pad_to(std::move(out), r.n);
}

void ScriptedPlanner::set_script(const Triple& query, std::vector<Triple> steps) {
    scripts_[to_tsv(query)] = std::move(steps);
}

std::vector<std::string> ScriptedPlanner::propose(const PlannerRequest& r) const {
    const PromptState& st = r.state;
    std::string line = schema_.verbalize(st.query);
    if (auto it = scripts_.find(to_tsv(st.query)); it != scripts_.end()) {
        if (st.step_index >= 1 && st.step_index <= it->second.size()) {
            line = schema_.verbalize(it->second[st.step_index - 1]);
        }
    }
    return std::vector<std::string>(r.n, line);
}

std::vector<std::string> RecordingPlanner::propose(const PlannerRequest& r) const {
    std::vector<std::string> out = inner_.propose(r);
    store_.put(request_hash(canonical_request(r)), out);
    return out;
}

std::vector<std::string> ReplayPlanner::propose(const PlannerRequest& r) const {
    const std::string key = request_hash(canonical_request(r));
    auto hit = store_->lookup(key);
    if (!hit) throw Error(ErrorKind::ReplayMiss, "no recorded completion for request " + key);
    if (!hit->is_array()) throw Error(ErrorKind::Protocol, "recorded completion is not a list");
    std::vector<std::string> out;
    for (const auto& s : *hit) {
        if (!s.is_string()) throw Error(ErrorKind::Protocol, "recorded completion holds a non-string");
        out.push_back(s.get<std::string>());
    }
    return out;
}

}  // namespace lmlp
