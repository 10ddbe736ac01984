#include "lmlp/logic.hpp"

#include "lmlp/error.hpp"

#include <cctype>
#include <unordered_map>

namespace lmlp {

std::string term_text(const Term& t) {
    if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
    return std::get<EntityId>(t).text();
}

Term parse_term(std::string_view text) {
    text = trim(text);
    if (text.size() > 1 && text.front() == '?') return Variable{std::string(text.substr(1))};
    return EntityId::intern(text);
}

Atom make_atom(std::string_view relation, std::string_view arg1, std::string_view arg2) {
    return {RelationId::intern(relation), {parse_term(arg1), parse_term(arg2)}};
}

std::string to_tsv(const Atom& a) {
    return term_text(a.args[0]) + "\t" + a.relation.text() + "\t" + term_text(a.args[1]);
}

Atom parse_atom_tsv(std::string_view line) {
    const auto a = line.find('\t');
    const auto b = a == std::string_view::npos ? a : line.find('\t', a + 1);
    if (b == std::string_view::npos) throw Error(ErrorKind::UnparsableText, std::string(line));
    return make_atom(line.substr(a + 1, b - a - 1), line.substr(0, a), line.substr(b + 1));
}

std::optional<Bindings> unify(const Atom& a, const Triple& t, const Bindings& b) {
    if (a.relation != t.relation) return std::nullopt;
    Bindings out = b;
    const EntityId values[2] = {t.subject, t.object};
    for (int i = 0; i < 2; ++i) {
        if (const auto* c = std::get_if<EntityId>(&a.args[i])) {
            if (*c != values[i]) return std::nullopt;
            continue;
        }
        const std::string& name = std::get<Variable>(a.args[i]).name;
        auto [it, fresh] = out.emplace(name, values[i]);
        if (!fresh && it->second != values[i]) return std::nullopt;
    }
    return out;
}

std::optional<Triple> ground(const Atom& a, const Bindings& b) {
    EntityId values[2];
    for (int i = 0; i < 2; ++i) {
        if (const auto* c = std::get_if<EntityId>(&a.args[i])) {
            values[i] = *c;
            continue;
        }
        auto it = b.find(std::get<Variable>(a.args[i]).name);
        if (it == b.end()) return std::nullopt;
        values[i] = it->second;
    }
    return Triple{values[0], a.relation, values[1]};
}

bool is_chain_rule(const HornRule& r) {
    if (r.body.empty()) return false;
    if (r.head.args[0] != r.body.front().args[0]) return false;
    if (r.head.args[1] != r.body.back().args[1]) return false;
    for (std::size_t i = 1; i < r.body.size(); ++i) {
        if (r.body[i - 1].args[1] != r.body[i].args[0]) return false;
    }
    return true;
}

namespace {

std::string display_atom(const Atom& a) {
    std::string rel = a.relation.text();
    if (!rel.empty()) rel[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(rel[0])));
    auto arg = [](const Term& t) {
        if (const auto* v = std::get_if<Variable>(&t)) return v->name;
        return std::get<EntityId>(t).text();
    };
    return rel + "(" + arg(a.args[0]) + "," + arg(a.args[1]) + ")";
}

}  // namespace

std::string to_string(const HornRule& r) {
    std::string out = display_atom(r.head) + " <- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i > 0) out += " & ";
        out += display_atom(r.body[i]);
    }
    return out;
}

std::string variable_name(std::size_t i) {
    std::string name(1, static_cast<char>('A' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    return name;
}

HornRule abstract_example(const RuleExample& ex) {
    if (ex.steps.empty() || !is_chain(ex.steps) || ex.steps.front().subject != ex.task.subject ||
        ex.steps.back().object != ex.task.object) {
        throw Error(ErrorKind::ChainBroken, "example steps do not chain from task subject to object");
    }
    std::unordered_map<EntityId, std::string> names;
    auto var = [&](EntityId e) -> Term {
        auto [it, fresh] = names.emplace(e, std::string());
        if (fresh) it->second = variable_name(names.size() - 1);
        return Variable{it->second};
    };
    HornRule rule;
    for (const Triple& s : ex.steps) {
        Term a = var(s.subject);
        Term b = var(s.object);
        rule.body.push_back({s.relation, {a, b}});
    }
    rule.head = {ex.task.relation, {var(ex.task.subject), var(ex.task.object)}};
    return rule;
}

}  // namespace lmlp
