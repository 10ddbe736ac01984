#pragma once

#include "lmlp/logic.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lmlp {

// Partial map (r1, r2) -> r3: "X's r1 is Y" and "Y's r2 is Z" imply
// "X's r3 is Z". Composition is not assumed associative; paths are folded
// left to right.
class CompositionTable {
public:
    CompositionTable() = default;

    // Throws InvalidArgument on a conflicting entry.
    void add(RelationId r1, RelationId r2, RelationId result);
    std::optional<RelationId> compose(RelationId r1, RelationId r2) const;

    std::size_t size() const { return table_.size(); }
    std::vector<RelationId> relations() const;

    // File format: JSON list of [r1, r2, r3].
    static CompositionTable from_json_text(std::string_view text);
    static CompositionTable load(const std::string& path);
    std::string to_json_text() const;

    static CompositionTable kinship();
    static CompositionTable countries();

    // r3(A,C) <- r1(A,B) & r2(B,C) for every entry, in table order.
    std::vector<HornRule> to_rules() const;

private:
    struct Key {
        RelationId a, b;
        bool operator<(const Key& o) const {
            if (a != o.a) return a < o.a;
            return b < o.b;
        }
    };
    std::map<Key, RelationId> table_;
};

// Left fold of the table over step relations. nullopt if any pair is
// unmapped or steps is empty; throws ChainBroken if steps are not a chain.
std::optional<RelationId> compose_path(const std::vector<Triple>& steps, const CompositionTable& table);

}  // namespace lmlp
