#pragma once
// Terms, atoms and chain-shaped Horn rules, plus exact unification.

#include "lmlp/triple.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lmlp {

struct Variable {
    std::string name;
    friend bool operator==(const Variable&, const Variable&) = default;
};

using Term = std::variant<Variable, EntityId>;

// Variables print as "?A"; constants print as their text.
std::string term_text(const Term& t);
Term parse_term(std::string_view text);

struct Atom {
    RelationId relation;
    std::array<Term, 2> args;

    friend bool operator==(const Atom&, const Atom&) = default;
};

Atom make_atom(std::string_view relation, std::string_view arg1, std::string_view arg2);
std::string to_tsv(const Atom& a);
Atom parse_atom_tsv(std::string_view line);

using Bindings = std::map<std::string, EntityId>;

// Minimal extension of `b` that grounds `a` to `t`; nullopt on failure.
// `b` itself is never modified.
std::optional<Bindings> unify(const Atom& a, const Triple& t, const Bindings& b);

// Substitutes bound variables; returns nullopt if any argument stays free.
std::optional<Triple> ground(const Atom& a, const Bindings& b);

struct HornRule {
    Atom head;
    std::vector<Atom> body;

    friend bool operator==(const HornRule&, const HornRule&) = default;
};

// Chain shape: body[i].arg2 == body[i+1].arg1, head.arg1 == body[0].arg1,
// head.arg2 == body.back().arg2.
bool is_chain_rule(const HornRule& r);

// "Sister(A,C) <- Brother(A,B) & Sister(B,C)" style rendering.
std::string to_string(const HornRule& r);

// A grounded proof demonstration: task triple plus its proof steps.
struct RuleExample {
    Triple task;
    std::vector<Triple> steps;

    friend bool operator==(const RuleExample&, const RuleExample&) = default;
};

// Replaces entities with A, B, C, ... in order of first appearance along the
// step chain. Throws ChainBroken if the steps are not a chain from
// task.subject to task.object.
HornRule abstract_example(const RuleExample& ex);

// Variable name for the i-th distinct entity: A..Z, then A1..Z1, ...
std::string variable_name(std::size_t i);

}  // namespace lmlp
