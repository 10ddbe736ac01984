#include "lmlp/knowledge_base.hpp"

#include <ostream>

namespace lmlp {

std::string to_tsv(const Triple& t) {
    return t.subject.text() + "\t" + t.relation.text() + "\t" + t.object.text();
}

std::ostream& operator<<(std::ostream& os, const Triple& t) {
    return os << "(" << t.subject.text() << ", " << t.relation.text() << ", " << t.object.text()
              << ")";
}

bool text_less(const Triple& a, const Triple& b) {
    if (a.subject != b.subject) return a.subject.text() < b.subject.text();
    if (a.relation != b.relation) return a.relation.text() < b.relation.text();
    if (a.object != b.object) return a.object.text() < b.object.text();
    return false;
}

bool is_chain(const std::vector<Triple>& steps) {
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i - 1].object != steps[i].subject) return false;
    }
    return true;
}

KnowledgeBase::KnowledgeBase(std::span<const Triple> facts) { add_all(facts); }

bool KnowledgeBase::add(const Triple& t) {
    if (members_.count(t) != 0) return false;
    const std::size_t pos = facts_.size();
    facts_.push_back(t);
    members_.emplace(t, pos);
    subject_index_[t.subject].push_back(pos);
    for (EntityId e : {t.subject, t.object}) {
        if (entity_set_.insert(e).second) entity_vocab_.push_back(e);
    }
    if (relation_set_.insert(t.relation).second) relation_vocab_.push_back(t.relation);
    return true;
}

void KnowledgeBase::add_all(std::span<const Triple> facts) {
    facts_.reserve(facts_.size() + facts.size());
    for (const Triple& t : facts) add(t);
}

std::size_t KnowledgeBase::index_of(const Triple& t) const {
    auto it = members_.find(t);
    return it == members_.end() ? npos : it->second;
}

std::vector<Triple> KnowledgeBase::facts_with_subject(EntityId s) const {
    std::vector<Triple> out;
    for (std::size_t i : indices_with_subject(s)) out.push_back(facts_[i]);
    return out;
}

std::span<const std::size_t> KnowledgeBase::indices_with_subject(EntityId s) const {
    auto it = subject_index_.find(s);
    if (it == subject_index_.end()) return {};
    return it->second;
}

KnowledgeBase KnowledgeBase::without(std::span<const Triple> removed) const {
    std::unordered_set<Triple, TripleHash> drop(removed.begin(), removed.end());
    KnowledgeBase out;
    for (const Triple& t : facts_) {
        if (drop.count(t) == 0) out.add(t);
    }
    return out;
}

}  // namespace lmlp
