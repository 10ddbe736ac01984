#include <doctest.h>

#include "support.hpp"

#include "lmlp/embedding.hpp"
#include "lmlp/error.hpp"
#include "lmlp/fixtures.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/planners.hpp"
#include "lmlp/projection.hpp"
#include "lmlp/remote.hpp"
#include "lmlp/translators.hpp"

#include <json.hpp>

#include <cmath>

using namespace lmlp;
using nlohmann::json;

namespace {

const VerbalizationSchema& kin() {
    static const VerbalizationSchema s = VerbalizationSchema::kinship();
    return s;
}

PlannerRequest sister_request(const char* current, std::size_t step) {
    PlannerRequest r;
    r.n = 10;
    r.seed = 3;
    r.state.query = test::sister_query();
    r.state.rule = abstract_example(test::sister_example());
    r.state.current = EntityId::intern(current);
    r.state.step_index = step;
    return r;
}

RemoteConfig fast(const std::string& url) {
    RemoteConfig cfg;
    cfg.url = url;
    cfg.backoff_base = std::chrono::milliseconds(1);
    cfg.backoff_cap = std::chrono::milliseconds(2);
    cfg.timeout = std::chrono::seconds(5);
    return cfg;
}

}  // namespace

TEST_SUITE("neural-backends") {

TEST_CASE("cosine basics") {
    const auto v = EmbeddingVector::from_dense(std::vector<double>{0.3, -1.2, 2.0});
    const auto neg = EmbeddingVector::from_dense(std::vector<double>{-0.3, 1.2, -2.0});
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cosine(v, neg) == doctest::Approx(-1.0).epsilon(1e-9));
    const auto x = EmbeddingVector::from_dense(std::vector<double>{1, 0});
    const auto y = EmbeddingVector::from_dense(std::vector<double>{0, 1});
    CHECK(cosine(x, y) == 0.0);
    CHECK_THROWS_AS(cosine(x, v), Error);
    CHECK_THROWS_AS(cosine(x, EmbeddingVector::from_dense(std::vector<double>{0, 0})), Error);
    CHECK_THROWS_AS(EmbeddingVector::from_dense(std::vector<double>{NAN}), Error);
}

TEST_CASE("hash embedding normalisation") {
    const auto a = hash_embed("Carrie's sister is Natasha", kDefaultHashDim);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(a, hash_embed("Carrie's sister is Natasha", kDefaultHashDim)) == doctest::Approx(1.0));
    CHECK(cosine(a, hash_embed("Carrie's sister is Natasha ", kDefaultHashDim)) == doctest::Approx(1.0));
    CHECK(hash_embed("ab", 64).entries().size() == 1);
    CHECK_THROWS_AS(hash_embed("   ", 64), Error);
    CHECK_THROWS_AS(hash_embed("abc", 32), Error);
}

TEST_CASE("hash embedding matches the committed golden file") {
    const json golden = json::parse(test::slurp(test::test_data("hash_golden.json")));
    const std::uint64_t dim = golden.at("dim").get<std::uint64_t>();
    REQUIRE(golden.at("cases").size() == 20);
    for (const json& c : golden.at("cases")) {
        const auto v = hash_embed(c.at("text").get<std::string>(), dim);
        const auto& head = c.at("head");
        REQUIRE(head.size() == 8);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(v.component(i) == doctest::Approx(head[i].get<double>()).epsilon(1e-12));
        }
        CHECK(v.entries().size() == c.at("nnz").get<std::size_t>());
    }
}

TEST_CASE("same relation beats a different relation under the hash") {
    const std::vector<std::string> names{"Carrie", "Natasha", "Lynn", "Joseph", "Katherine", "Dale", "Nancy",
                                         "George", "Milton", "Glen", "Antonia", "Irene", "Mary", "John",
                                         "Theresa", "Clarence", "Joshua", "Lillian", "Ashley", "Nicholas"};
    Rng rng(42);
    int wins = 0;
    for (int i = 0; i < 100; ++i) {
        const std::string x = rng.pick(names), y = rng.pick(names), z = rng.pick(names);
        const auto ref = hash_embed(x + "'s sister is " + y, kDefaultHashDim);
        const double same = cosine(ref, hash_embed(x + "'s sister is " + z, kDefaultHashDim));
        const double other = cosine(ref, hash_embed(x + "'s uncle is " + z, kDefaultHashDim));
        if (same > other) ++wins;
    }
    CHECK(wins >= 95);
}

TEST_CASE("exact-string translator") {
    const ExactStringTranslator t;
    CHECK(cosine(t.embed("a b c"), t.embed(" a b c ")) == 1.0);
    CHECK(cosine(t.embed("a b c"), t.embed("a b d")) == 0.0);
    const std::vector<std::string> texts{"x", "y"};
    CHECK(t.embed_batch(texts).size() == 2);
}

TEST_CASE("template planner candidates") {
    const TemplatePlanner planner(kin());
    const auto first = planner.propose(sister_request("Joseph", 1));
    REQUIRE(first.size() == 10);
    CHECK(first[0] == "Joseph's brother is ?ENT");
    CHECK(std::set<std::string>(first.begin(), first.end()).size() == 10);
    const auto second = planner.propose(sister_request("Dale", 2));
    CHECK(second[0] == "Dale's sister is ?ENT");
    CHECK(planner.propose(sister_request("Dale", 2)) == second);

    auto past = sister_request("Nancy", 3);
    CHECK(TemplatePlanner::rule_exhausted(past.state));
    const auto tail = planner.propose(past);
    CHECK(tail.size() == 10);

    const TemplatePlanner tiny(VerbalizationSchema::countries());
    auto small = sister_request("palau", 1);
    small.state.rule.reset();
    const auto padded = tiny.propose(small);
    CHECK(padded.size() == 10);
    CHECK(std::set<std::string>(padded.begin(), padded.end()).size() == 2);
}

TEST_CASE("projection picks the best fact") {
    const ExactStringTranslator exact;
    const std::vector<Triple> palau{Triple::make("palau", "locatedIn", "micronesia")};
    const std::vector<std::string> cand{"palau locatedIn micronesia"};
    const auto hit = project(cand, palau, exact, VerbalizationSchema::countries());
    CHECK(hit.fact == palau[0]);
    CHECK(hit.score == doctest::Approx(1.0));

    const HashTranslator hash;
    const std::vector<Triple> slice{Triple::make("Joseph", "brother", "Dale"), Triple::make("Joseph", "uncle", "Sam")};
    const std::vector<std::string> q{"Joseph's brother is ?ENT"};
    CHECK(project(q, slice, hash, kin()).fact == slice[0]);

    const std::vector<Triple> twins{Triple::make("k", "r2", "b"), Triple::make("k", "r1", "a")};
    const auto schema = VerbalizationSchema::from_templates({{"r1", "{s} r1 {o}"}, {"r2", "{s} r2 {o}"}});
    const std::vector<std::string> miss{"nothing alike"};
    const auto tie = project(miss, twins, exact, schema);
    CHECK(tie.fact == twins[1]);
    CHECK(tie.score == 0.0);

    const std::vector<std::string> both{"k r2 b", "k r1 a"};
    CHECK(project(both, twins, exact, schema).candidate_index == 0);

    CHECK_THROWS_AS(project(cand, std::vector<Triple>{}, exact, VerbalizationSchema::countries()), Error);
    CHECK_THROWS_AS(project(std::vector<std::string>{}, palau, exact, VerbalizationSchema::countries()), Error);
}

TEST_CASE("exact-string projection is string search") {
    const auto g = test::random_graph(77, 15);
    std::map<std::string, std::string> templates{{"ra", "{s} ra {o}"}, {"rb", "{s} rb {o}"}, {"rc", "{s} rc {o}"}};
    const auto schema = VerbalizationSchema::from_templates(templates);
    const KnowledgeBase kb(g.facts);
    const ExactStringTranslator exact;
    const FactEmbeddingCache cache(kb, schema, exact);
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const EntityId s = rng.pick(kb.facts()).subject;
        const auto idx = kb.indices_with_subject(s);
        std::vector<std::size_t> slice(idx.begin(), idx.end());
        std::vector<std::string> cands;
        for (int c = 0; c < 4; ++c) {
            const Triple t = rng.pick(kb.facts());
            cands.push_back(rng.bernoulli(0.5) ? schema.verbalize(t) : schema.verbalize(t) + " x");
        }
        bool expected = false;
        for (const auto& c : cands) {
            for (std::size_t i : slice) expected = expected || schema.verbalize(kb.fact(i)) == c;
        }
        const auto got = project(cands, slice, cache, 0.5);
        CHECK(got.has_value() == expected);
        if (got) {
            CHECK(std::find(cands.begin(), cands.end(), schema.verbalize(got->fact)) != cands.end());
            CHECK(got->fact.subject == s);
        }
    }
}

TEST_CASE("fixture store and replay") {
    FixtureStore store;
    const TemplatePlanner inner(kin());
    const RecordingPlanner rec(inner, store);
    const auto req = sister_request("Joseph", 1);
    const auto recorded = rec.propose(req);
    CHECK(store.size() == 1);

    test::TempDir tmp;
    store.save(tmp.file("fx.json"), false);
    CHECK_THROWS_AS(store.save(tmp.file("fx.json"), false), Error);
    const auto loaded = std::make_shared<const FixtureStore>(FixtureStore::load(tmp.file("fx.json")));
    const ReplayPlanner replay(loaded);
    CHECK(replay.propose(req) == recorded);
    CHECK(replay.propose(req).size() == 10);
    try {
        auto other = sister_request("Joseph", 1);
        other.seed = 4;
        replay.propose(other);
        FAIL("expected a replay miss");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ReplayMiss);
        CHECK(e.is_backend_failure());
    }

    FixtureStore tstore;
    const HashTranslator hash;
    const RecordingTranslator trec(hash, tstore);
    const auto v = trec.embed("Joseph's brother is Dale");
    const ReplayTranslator trep(std::make_shared<const FixtureStore>(tstore));
    CHECK(trep.embed("Joseph's brother is Dale") == v);
    CHECK_THROWS_AS(trep.embed("unseen"), Error);
}

TEST_CASE("remote planner and translator against a local service") {
    test::FakeService svc;
    svc.set_vocabulary({"Joseph's brother is Dale", "Dale's sister is Katherine"});
    const RemotePlanner planner(fast(svc.url("/v1/completions")));
    const auto out = planner.propose(sister_request("Joseph", 1));
    REQUIRE(out.size() == 10);
    for (const auto& s : out) CHECK((s == "Joseph's brother is Dale" || s == "Dale's sister is Katherine"));

    const RemoteTranslator translator(fast(svc.url("/v1/embeddings")), 2);
    const std::vector<std::string> texts{"a b c", "d e f", "g h i"};
    const auto vecs = translator.embed_batch(texts);
    REQUIRE(vecs.size() == 3);
    CHECK(cosine(vecs[1], hash_embed("d e f", 64)) == doctest::Approx(1.0));
}

TEST_CASE("remote retries transient failures") {
    test::FakeService svc;
    svc.fail_next({503, 429});
    const RemotePlanner planner(fast(svc.url("/v1/completions")));
    CHECK(planner.propose(sister_request("Joseph", 1)).size() == 10);
    CHECK(svc.requests() == 3);

    svc.fail_next({500, 500, 500});
    try {
        planner.propose(sister_request("Joseph", 1));
        FAIL("expected a transport error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Transport);
    }

    svc.fail_next({400});
    try {
        planner.propose(sister_request("Joseph", 1));
        FAIL("expected a protocol error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Protocol);
    }
    CHECK(svc.requests() == 7);
}

TEST_CASE("remote protocol errors") {
    test::FakeService svc;
    svc.set_raw_reply("not json");
    const RemotePlanner planner(fast(svc.url("/v1/completions")));
    CHECK_THROWS_AS(planner.propose(sister_request("Joseph", 1)), Error);
    svc.set_raw_reply("{\"choices\": []}");
    CHECK_THROWS_AS(planner.propose(sister_request("Joseph", 1)), Error);
    svc.set_raw_reply("{\"data\": [{\"embedding\": [0, 0]}]}");
    const RemoteTranslator translator(fast(svc.url("/v1/embeddings")));
    try {
        translator.embed("x");
        FAIL("expected a protocol error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Protocol);
    }
}

TEST_CASE("unreachable endpoint is a transport failure") {
    RemoteConfig cfg = fast("http://127.0.0.1:1/v1/completions");
    cfg.attempts = 2;
    const RemotePlanner planner(cfg);
    try {
        planner.propose(sister_request("Joseph", 1));
        FAIL("expected a transport error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Transport);
    }
    CHECK_THROWS_AS(RemoteConfig::from_env("LMLP_TEST_UNSET_PREFIX"), Error);
}

}
