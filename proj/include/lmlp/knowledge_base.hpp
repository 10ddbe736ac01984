#pragma once

#include "lmlp/triple.hpp"

#include <cstddef>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lmlp {

// The fact set F with a subject index.
//
// Facts keep insertion order; duplicates are dropped on insert. The subject
// index lists fact positions in the same order, so facts_with_subject() is
// deterministic for a given load order. Built single-threaded, then shared
// read-only.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    explicit KnowledgeBase(std::span<const Triple> facts);

    // Returns false if the fact was already present.
    bool add(const Triple& t);
    void add_all(std::span<const Triple> facts);

    bool contains(const Triple& t) const { return members_.count(t) != 0; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    const std::vector<Triple>& facts() const { return facts_; }
    const Triple& fact(std::size_t index) const { return facts_[index]; }

    // Position of t in facts(), or npos.
    std::size_t index_of(const Triple& t) const;

    // The F' slice: facts whose subject is s, in KB order.
    std::vector<Triple> facts_with_subject(EntityId s) const;
    // Same slice as fact positions (for embedding caches).
    std::span<const std::size_t> indices_with_subject(EntityId s) const;

    // First-seen order over subjects and objects.
    const std::vector<EntityId>& entities() const { return entity_vocab_; }
    const std::vector<RelationId>& relations() const { return relation_vocab_; }
    bool has_entity(EntityId e) const { return entity_set_.count(e) != 0; }

    // A copy without the listed facts.
    KnowledgeBase without(std::span<const Triple> removed) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<Triple> facts_;
    std::unordered_map<Triple, std::size_t, TripleHash> members_;
    std::unordered_map<EntityId, std::vector<std::size_t>> subject_index_;
    std::vector<EntityId> entity_vocab_;
    std::unordered_set<EntityId> entity_set_;
    std::vector<RelationId> relation_vocab_;
    std::unordered_set<RelationId> relation_set_;
};

}  // namespace lmlp
