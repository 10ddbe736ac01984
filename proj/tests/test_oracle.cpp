#include <doctest.h>

#include "support.hpp"

#include "lmlp/backward_chain.hpp"
#include "lmlp/composition.hpp"
#include "lmlp/error.hpp"
#include "lmlp/family.hpp"
#include "lmlp/clutrr.hpp"
#include "lmlp/paths.hpp"
#include "lmlp/rule_library.hpp"
#include "lmlp/verify.hpp"

using namespace lmlp;

namespace {

std::vector<Triple> palau_kb() {
    return {Triple::make("palau", "locatedIn", "micronesia"), Triple::make("micronesia", "locatedIn", "oceania")};
}

std::vector<Triple> ashley_kb() {
    return {Triple::make("Ashley", "daughter", "Lillian"), Triple::make("Lillian", "brother", "Nicholas")};
}

test::PathSet proof_set(const std::vector<Proof>& proofs) {
    test::PathSet out;
    for (const Proof& p : proofs) out.insert(test::render(p.steps));
    return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("composition on the worked pairs") {
    const auto table = CompositionTable::kinship();
    auto rel = [](const char* r) { return RelationId::intern(r); };
    CHECK(table.compose(rel("daughter"), rel("brother")) == rel("son"));
    CHECK(table.compose(rel("brother"), rel("sister")) == rel("sister"));
    CHECK_FALSE(table.compose(rel("husband"), rel("wife")));

    CHECK(compose_path({Triple::make("a", "sister", "b")}, table) == rel("sister"));
    CHECK(compose_path(ashley_kb(), table) == rel("son"));
    CHECK_FALSE(compose_path({}, table));
    CHECK_THROWS_AS(compose_path({Triple::make("a", "sister", "b"), Triple::make("c", "sister", "d")}, table),
                    Error);
}

TEST_CASE("composition table file round trip and conflicts") {
    const auto table = CompositionTable::kinship();
    const auto back = CompositionTable::from_json_text(table.to_json_text());
    CHECK(back.size() == table.size());
    CHECK(back.to_rules() == table.to_rules());
    CompositionTable t;
    t.add(RelationId::intern("ra"), RelationId::intern("rb"), RelationId::intern("rc"));
    t.add(RelationId::intern("ra"), RelationId::intern("rb"), RelationId::intern("rc"));
    CHECK_THROWS_AS(t.add(RelationId::intern("ra"), RelationId::intern("rb"), RelationId::intern("ra")), Error);
}

TEST_CASE("kinship compositions agree with the family structure") {
    const auto table = CompositionTable::kinship();
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const FamilyGraph g = generate_family_graph(18, seed);
        const KnowledgeBase kb = g.kb();
        for (std::size_t a = 0; a < g.people.size(); ++a) {
            for (std::size_t b = 0; b < g.people.size(); ++b) {
                if (a == b) continue;
                for (const auto& p : find_ground_paths(kb, g.people[a].id, g.people[b].id, 4)) {
                    if (p.size() < 2) continue;
                    const auto r = test::fold_relations(p, table);
                    if (!r) continue;
                    ++checked;
                    const auto truth = test::true_kinship(g, a, b);
                    INFO(g.people[a].id.text(), " -> ", g.people[b].id.text(), " via ", test::render(p).size());
                    CHECK(truth.count(r->text()) == 1);
                }
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("backward_chain on the palau example") {
    const KnowledgeBase kb(palau_kb());
    const auto rules = CompositionTable::countries().to_rules();
    const auto proofs = backward_chain(Triple::make("palau", "locatedIn", "oceania"), kb, rules, 2);
    REQUIRE(proofs.size() == 1);
    CHECK(proofs[0].steps == palau_kb());
    CHECK(proofs[0].depth == 2);
    CHECK(backward_chain(Triple::make("palau", "locatedIn", "oceania"), kb, rules, 1).empty());

    const auto direct = backward_chain(Triple::make("palau", "locatedIn", "micronesia"), kb, rules, 3);
    REQUIRE(direct.size() == 1);
    CHECK(direct[0].depth == 0);
    CHECK(direct[0].steps == std::vector<Triple>{Triple::make("palau", "locatedIn", "micronesia")});
}

TEST_CASE("backward_chain matches exhaustive enumeration on random graphs") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto g = test::random_graph(seed, 12);
        const KnowledgeBase kb(g.facts);
        for (EntityId s : g.entities) {
            for (EntityId o : g.entities) {
                if (s == o) continue;
                for (RelationId r : g.relations) {
                    const Triple goal{s, r, o};
                    const auto got = backward_chain(goal, kb, g.rules, 4);
                    CHECK(proof_set(got) == test::brute_proofs(goal, g.facts, g.rules, 4));
                    for (const Proof& p : got) CHECK(p.depth == (kb.contains(goal) && p.steps.size() == 1 && p.steps[0] == goal ? 0 : p.steps.size()));
                }
            }
        }
    }
}

TEST_CASE("find_ground_paths") {
    const KnowledgeBase kb(ashley_kb());
    const auto paths = find_ground_paths(kb, EntityId::intern("Ashley"), EntityId::intern("Nicholas"), 2);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == ashley_kb());
    CHECK(find_ground_paths(kb, EntityId::intern("Ashley"), EntityId::intern("Ashley"), 3).empty());
    CHECK(find_ground_paths(kb, EntityId::intern("Ashley"), EntityId::intern("Nicholas"), 1).empty());

    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        const auto g = test::random_graph(seed, 20);
        const KnowledgeBase rkb(g.facts);
        for (EntityId s : g.entities) {
            for (EntityId o : g.entities) {
                test::PathSet got;
                for (const auto& p : find_ground_paths(rkb, s, o, 4)) got.insert(test::render(p));
                CHECK(got == test::brute_paths(g.facts, s, o, 4));
            }
        }
    }
}

TEST_CASE("verify") {
    const KnowledgeBase countries(palau_kb());
    const auto ctable = CompositionTable::countries();
    const Verdict ok = verify_steps(palau_kb(), Triple::make("palau", "locatedIn", "oceania"), &ctable, countries);
    CHECK(ok.reach);
    CHECK(ok.verified);
    CHECK_FALSE(verify_steps({}, Triple::make("palau", "locatedIn", "oceania"), &ctable, countries).reach);

    const KnowledgeBase kin(ashley_kb());
    const auto ktable = CompositionTable::kinship();
    const Verdict wrong = verify_steps(ashley_kb(), Triple::make("Ashley", "daughter", "Nicholas"), &ktable, kin);
    CHECK(wrong.reach);
    CHECK_FALSE(wrong.verified);
    const Verdict right = verify_steps(ashley_kb(), Triple::make("Ashley", "son", "Nicholas"), &ktable, kin);
    CHECK(right.verified);
    CHECK_FALSE(verify_steps(ashley_kb(), Triple::make("Ashley", "son", "Nicholas"), nullptr, kin).verified);

    const std::vector<Triple> outside{Triple::make("Ashley", "daughter", "Lillian"),
                                      Triple::make("Lillian", "sister", "Nicholas")};
    CHECK_FALSE(verify_steps(outside, Triple::make("Ashley", "son", "Nicholas"), &ktable, kin).reach);
    const std::vector<Triple> broken{Triple::make("Ashley", "daughter", "Lillian"),
                                     Triple::make("micronesia", "locatedIn", "oceania")};
    CHECK_FALSE(verify_steps(broken, Triple::make("Ashley", "son", "oceania"), &ktable, kin).reach);
}

TEST_CASE("rule extraction") {
    CHECK(extract_rule_library({}, 4).empty());

    std::vector<Triple> facts = ashley_kb();
    facts.push_back(Triple::make("Ashley", "son", "Nicholas"));
    const auto table = CompositionTable::kinship();
    const RuleLibrary lib =
        extract_rule_library({{Triple::make("Ashley", "son", "Nicholas"), KnowledgeBase(facts)}}, 4, &table);
    REQUIRE(lib.size() == 1);
    CHECK(lib.at(0).example.task == Triple::make("Ashley", "son", "Nicholas"));
    CHECK(lib.at(0).example.steps == ashley_kb());
    CHECK(to_string(lib.at(0).abstract) == "Son(A,C) <- Daughter(A,B) & Brother(B,C)");
    CHECK(lib.with_relation(RelationId::intern("son")).size() == 1);
    CHECK(lib.with_relation(RelationId::intern("aunt")).empty());

    const RuleLibrary back = RuleLibrary::from_json_text(lib.to_json_text());
    REQUIRE(back.size() == 1);
    CHECK(back.at(0).example == lib.at(0).example);
    CHECK(back.at(0).abstract == lib.at(0).abstract);
}

TEST_CASE("extracted examples from a generated corpus all verify") {
    const auto table = CompositionTable::kinship();
    const ClutrrSplit split = build_clutrr_split({2, 3, 4}, 8, 21, table);
    const auto training = split.rule_training();
    const RuleLibrary lib = extract_rule_library(training, 4, &table);
    CHECK(lib.size() == training.size());
    for (const auto& e : lib.entries()) {
        KnowledgeBase kb;
        for (const auto& [q, k] : training) {
            if (q == e.example.task) kb = k;
        }
        const Verdict v = verify_steps(e.example.steps, e.example.task, &table, kb);
        CHECK(v.verified);
    }
}

}
