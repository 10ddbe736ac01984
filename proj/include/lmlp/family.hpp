#pragma once
// Synthetic family trees for kinship benchmarks.
//
// Trees grow from one founding couple: couples have children, and blood
// members marry outsiders who bring no relatives. There is no remarriage,
// so siblings are always full siblings; this is what keeps every composition
// in the kinship table sound on simple paths.

#include "lmlp/knowledge_base.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmlp {

enum class Gender { Male, Female };

struct Person {
    EntityId id;
    Gender gender = Gender::Male;
    std::optional<std::size_t> father, mother, spouse;
    std::vector<std::size_t> children;
};

struct FamilyGraph {
    std::vector<Person> people;
    std::vector<Triple> facts;  // father/mother/son/daughter/brother/sister/husband/wife
    std::uint64_t seed = 0;

    std::optional<std::size_t> index_of(EntityId e) const;
    std::optional<Gender> gender_of(EntityId e) const;
    KnowledgeBase kb() const { return KnowledgeBase(facts); }
};

// Deterministic per (n, seed, surname). Names are unique within the graph;
// a non-empty surname is appended to every name. Throws InfeasibleSize when
// n < 4.
FamilyGraph generate_family_graph(std::size_t n_entities, std::uint64_t seed,
                                  const std::string& surname = "");

// Core kinship facts of a finished tree, in person order.
std::vector<Triple> kinship_facts(const std::vector<Person>& people);

}  // namespace lmlp
