#pragma once

#include "lmlp/symbols.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lmlp {

// (subject, relation, object) - the atom of facts, queries and proof steps.
struct Triple {
    EntityId subject;
    RelationId relation;
    EntityId object;

    static Triple make(std::string_view s, std::string_view p, std::string_view o) {
        return {EntityId::intern(s), RelationId::intern(p), EntityId::intern(o)};
    }

    friend bool operator==(const Triple&, const Triple&) = default;
};

// Tab-separated encoding "s\tp\to".
std::string to_tsv(const Triple& t);
std::ostream& operator<<(std::ostream& os, const Triple& t);

// Lexicographic by (subject, relation, object) text.
bool text_less(const Triple& a, const Triple& b);

// step[i].object == step[i+1].subject for every adjacent pair.
bool is_chain(const std::vector<Triple>& steps);

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::size_t h = t.subject.raw();
        h = h * 0x9e3779b97f4a7c15ULL + t.relation.raw();
        h = h * 0x9e3779b97f4a7c15ULL + t.object.raw();
        return h;
    }
};

}  // namespace lmlp
