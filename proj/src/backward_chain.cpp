#include "lmlp/backward_chain.hpp"

#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

namespace lmlp {

namespace {

using Chain = std::vector<Triple>;


// Tabled solver: solve(r, s, budget) returns every simple chain of at most
// `budget` facts starting at s that derives relation r.
class Solver {
public:
    Solver(const KnowledgeBase& kb, const std::vector<HornRule>& rules) : kb_(kb) {
        for (const HornRule& r : rules) {
            if (is_chain_rule(r)) by_head_[r.head.relation].push_back(&r);
        }
    }

    const std::vector<Chain>& solve(RelationId rel, EntityId s, std::size_t budget) {
        static const std::vector<Chain> kEmpty;
        if (budget == 0) return kEmpty;
        const Key key{rel.raw(), s.raw(), budget};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        // A key already on the stack means a cycle of single-atom rules;
        // cut it there.
        if (!active_.insert(key).second) return kEmpty;

        std::vector<Chain> out;
        std::set<std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>> seen;
        auto emit = [&](Chain&& c) {
            std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> sig;
            sig.reserve(c.size());
            for (const Triple& t : c) sig.emplace_back(t.subject.raw(), t.relation.raw(), t.object.raw());
            if (seen.insert(std::move(sig)).second) out.push_back(std::move(c));
        };

        if (auto it = by_head_.find(rel); it != by_head_.end()) {
            for (const HornRule* rule : it->second) expand(*rule, s, budget, emit);
        }
        for (std::size_t i : kb_.indices_with_subject(s)) {
            const Triple& f = kb_.fact(i);
            if (f.relation == rel && f.object != s) emit(Chain{f});
        }

        active_.erase(key);
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    using Key = std::tuple<std::uint32_t, std::uint32_t, std::size_t>;

    template <class Emit>
    void expand(const HornRule& rule, EntityId s, std::size_t budget, Emit& emit) {
        const std::size_t n = rule.body.size();
        if (n > budget) return;
        // Bind the head subject; the head object is checked at the end.
        Bindings start;
        if (const auto* c = std::get_if<EntityId>(&rule.head.args[0])) {
            if (*c != s) return;
        } else {
            start.emplace(std::get<Variable>(rule.head.args[0]).name, s);
        }

        struct Partial {
            Bindings bindings;
            Chain chain;
        };
        std::vector<Partial> frontier{{std::move(start), {}}};
        for (std::size_t i = 0; i < n && !frontier.empty(); ++i) {
            const Atom& atom = rule.body[i];
            std::vector<Partial> next;
            for (const Partial& p : frontier) {
                EntityId subject;
                if (const auto* c = std::get_if<EntityId>(&atom.args[0])) {
                    subject = *c;
                } else {
                    auto it = p.bindings.find(std::get<Variable>(atom.args[0]).name);
                    if (it == p.bindings.end()) continue;
                    subject = it->second;
                }
                const std::size_t sub_budget = budget - p.chain.size() - (n - i - 1);
                // Copy: the memo may rehash while we recurse.
                const std::vector<Chain> subs = solve(atom.relation, subject, sub_budget);
                for (const Chain& sub : subs) {
                    auto b = unify(atom, Triple{subject, atom.relation, sub.back().object}, p.bindings);
                    if (!b || !disjoint(p.chain, s, sub)) continue;
                    Partial q{std::move(*b), p.chain};
                    q.chain.insert(q.chain.end(), sub.begin(), sub.end());
                    next.push_back(std::move(q));
                }
            }
            frontier = std::move(next);
        }
        for (Partial& p : frontier) {
            if (p.chain.empty()) continue;
            const Triple derived{s, rule.head.relation, p.chain.back().object};
            if (!unify(rule.head, derived, p.bindings)) continue;
            emit(std::move(p.chain));
        }
    }

    // Appending `sub` to `prefix` keeps the path simple.
    static bool disjoint(const Chain& prefix, EntityId start, const Chain& sub) {
        std::unordered_set<EntityId> used{start};
        for (const Triple& t : prefix) used.insert(t.object);
        for (const Triple& t : sub) {
            if (used.count(t.object) != 0) return false;
        }
        return true;
    }

    const KnowledgeBase& kb_;
    std::map<RelationId, std::vector<const HornRule*>> by_head_;
    std::map<Key, std::vector<Chain>> memo_;
    std::set<Key> active_;
};

}  // namespace

std::vector<Proof> backward_chain(const Triple& goal, const KnowledgeBase& kb,
                                  const std::vector<HornRule>& rules, std::size_t max_depth) {
    std::vector<Proof> proofs;
    if (max_depth == 0) return proofs;
    Solver solver(kb, rules);
    for (const Chain& c : solver.solve(goal.relation, goal.subject, max_depth)) {
        if (c.back().object != goal.object) continue;
        const bool direct = c.size() == 1 && c.front() == goal;
        proofs.push_back({goal, c, direct ? 0 : c.size()});
    }
    return proofs;
}

bool is_provable(const Triple& goal, const KnowledgeBase& kb, const std::vector<HornRule>& rules,
                 std::size_t max_depth) {
    return !backward_chain(goal, kb, rules, max_depth).empty();
}

}  // namespace lmlp
