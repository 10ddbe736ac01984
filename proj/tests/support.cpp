#include "support.hpp"

#include "lmlp/hashing.hpp"
#include "lmlp/kb_io.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_set>

namespace fs = std::filesystem;

namespace lmlp::test {

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("lmlp-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string test_data(const std::string& name) { return std::string(LMLP_TEST_DATA) + "/" + name; }

std::vector<std::string> render(const std::vector<Triple>& steps) {
    std::vector<std::string> out;
    for (const Triple& t : steps) out.push_back(to_tsv(t));
    return out;
}

namespace {

void extend(const std::vector<Triple>& facts, EntityId dst, std::size_t max_len, std::vector<Triple>& path,
            std::vector<EntityId>& seen, PathSet& out) {
    const EntityId here = path.empty() ? seen.front() : path.back().object;
    for (const Triple& f : facts) {
        if (!(f.subject == here)) continue;
        bool repeat = false;
        for (EntityId e : seen) repeat = repeat || e == f.object;
        if (repeat) continue;
        path.push_back(f);
        seen.push_back(f.object);
        if (f.object == dst) {
            out.insert(render(path));
        } else if (path.size() < max_len) {
            extend(facts, dst, max_len, path, seen, out);
        }
        seen.pop_back();
        path.pop_back();
    }
}

}  // namespace

PathSet brute_paths(const std::vector<Triple>& facts, EntityId src, EntityId dst, std::size_t max_len) {
    PathSet out;
    if (src == dst || max_len == 0) return out;
    std::vector<Triple> path;
    std::vector<EntityId> seen{src};
    extend(facts, dst, max_len, path, seen, out);
    return out;
}

std::set<std::string> derivable(const std::vector<RelationId>& seq, const std::vector<HornRule>& rules) {
    const std::size_t n = seq.size();
    // d[i][j]: relations derivable for the span seq[i..j)
    std::vector<std::vector<std::set<std::string>>> d(n + 1, std::vector<std::set<std::string>>(n + 1));
    for (std::size_t i = 0; i < n; ++i) d[i][i + 1].insert(seq[i].text());

    // Can body[k..] cover span [i, j)?
    std::function<bool(const HornRule&, std::size_t, std::size_t, std::size_t)> covers =
        [&](const HornRule& r, std::size_t k, std::size_t i, std::size_t j) -> bool {
        const std::size_t left = r.body.size() - k;
        if (left == 1) return d[i][j].count(r.body[k].relation.text()) != 0;
        for (std::size_t m = i + 1; m + (left - 1) <= j; ++m) {
            if (d[i][m].count(r.body[k].relation.text()) != 0 && covers(r, k + 1, m, j)) return true;
        }
        return false;
    };

    for (std::size_t len = 1; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len;
            bool changed = true;
            while (changed) {
                changed = false;
                for (const HornRule& r : rules) {
                    if (!is_chain_rule(r) || r.body.empty() || r.body.size() > len) continue;
                    if (d[i][j].count(r.head.relation.text()) != 0) continue;
                    if (covers(r, 0, i, j)) {
                        d[i][j].insert(r.head.relation.text());
                        changed = true;
                    }
                }
            }
        }
    }
    return n == 0 ? std::set<std::string>{} : d[0][n];
}

PathSet brute_proofs(const Triple& goal, const std::vector<Triple>& facts, const std::vector<HornRule>& rules,
                     std::size_t max_depth) {
    PathSet out;
    for (const Triple& f : facts) {
        if (f == goal) out.insert({to_tsv(goal)});
    }
    for (const auto& p : brute_paths(facts, goal.subject, goal.object, max_depth)) {
        std::vector<RelationId> seq;
        for (const std::string& line : p) {
            const auto a = line.find('\t');
            const auto b = line.find('\t', a + 1);
            seq.push_back(RelationId::intern(line.substr(a + 1, b - a - 1)));
        }
        if (derivable(seq, rules).count(goal.relation.text()) != 0) out.insert(p);
    }
    return out;
}

RandomGraph random_graph(std::uint64_t seed, std::size_t max_entities) {
    Rng rng(derive_seed(seed, 0x6772617068ULL));
    RandomGraph g;
    const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform(max_entities - 3));
    for (std::size_t i = 0; i < n; ++i) {
        g.entities.push_back(EntityId::intern("g" + std::to_string(seed) + "_e" + std::to_string(i)));
    }
    for (const char* r : {"ra", "rb", "rc"}) g.relations.push_back(RelationId::intern(r));
    KnowledgeBase kb;
    const std::size_t edges = n + static_cast<std::size_t>(rng.uniform(2 * n));
    for (std::size_t i = 0; i < edges; ++i) {
        const EntityId s = rng.pick(g.entities);
        const EntityId o = rng.pick(g.entities);
        if (s == o) continue;
        kb.add({s, rng.pick(g.relations), o});
    }
    g.facts = kb.facts();

    const std::size_t n_rules = 2 + static_cast<std::size_t>(rng.uniform(4));
    for (std::size_t i = 0; i < n_rules; ++i) {
        const std::size_t len = rng.bernoulli(0.75) ? 2 : 3;
        HornRule r;
        const std::vector<std::string> vars{"A", "B", "C", "D"};
        r.head = make_atom(rng.pick(g.relations).text(), "?A", "?" + vars[len]);
        for (std::size_t k = 0; k < len; ++k) {
            r.body.push_back(make_atom(rng.pick(g.relations).text(), "?" + vars[k], "?" + vars[k + 1]));
        }
        g.rules.push_back(r);
    }
    return g;
}

namespace {

using Index = std::size_t;
using Group = std::set<Index>;

Group parents(const FamilyGraph& g, Index a) {
    Group out;
    if (g.people[a].father) out.insert(*g.people[a].father);
    if (g.people[a].mother) out.insert(*g.people[a].mother);
    return out;
}

Group children(const FamilyGraph& g, Index a) {
    return Group(g.people[a].children.begin(), g.people[a].children.end());
}

Group spouse(const FamilyGraph& g, Index a) {
    Group out;
    if (g.people[a].spouse) out.insert(*g.people[a].spouse);
    return out;
}

Group siblings(const FamilyGraph& g, Index a) {
    Group out;
    if (!g.people[a].father || !g.people[a].mother) return out;
    for (Index i = 0; i < g.people.size(); ++i) {
        if (i != a && g.people[i].father == g.people[a].father && g.people[i].mother == g.people[a].mother) {
            out.insert(i);
        }
    }
    return out;
}

template <class F>
Group over(const FamilyGraph& g, const Group& from, F step) {
    Group out;
    for (Index i : from) {
        for (Index j : step(g, i)) out.insert(j);
    }
    return out;
}

Group join(Group a, const Group& b) {
    a.insert(b.begin(), b.end());
    return a;
}

}  // namespace

std::set<std::string> true_kinship(const FamilyGraph& g, std::size_t a, std::size_t b) {
    const bool male = g.people[b].gender == Gender::Male;
    std::set<std::string> out;
    auto add = [&](const Group& grp, const char* m, const char* f) {
        if (grp.count(b) != 0) out.insert(male ? m : f);
    };
    const Group sib = siblings(g, a);
    const Group par = parents(g, a);
    const Group sp = spouse(g, a);
    add(par, "father", "mother");
    add(children(g, a), "son", "daughter");
    add(sib, "brother", "sister");
    add(sp, "husband", "wife");
    add(over(g, par, parents), "grandfather", "grandmother");
    add(over(g, children(g, a), children), "grandson", "granddaughter");
    const Group par_sib = over(g, par, siblings);
    add(join(par_sib, over(g, par_sib, spouse)), "uncle", "aunt");
    add(join(over(g, sib, children), over(g, over(g, sp, siblings), children)), "nephew", "niece");
    add(over(g, sp, parents), "father-in-law", "mother-in-law");
    add(over(g, children(g, a), spouse), "son-in-law", "daughter-in-law");
    add(join(over(g, sp, siblings), over(g, sib, spouse)), "brother-in-law", "sister-in-law");
    return out;
}

std::optional<RelationId> fold_relations(const std::vector<Triple>& steps, const CompositionTable& table) {
    if (steps.empty()) return std::nullopt;
    std::optional<RelationId> acc = steps.front().relation;
    for (std::size_t i = 1; i < steps.size() && acc; ++i) acc = table.compose(*acc, steps[i].relation);
    return acc;
}

std::string check_trace(const ProofTrace& trace, const Triple& query, const KnowledgeBase& kb,
                        const CompositionTable* table, const PromptSpec& spec) {
    const auto steps = trace.facts();
    if (!(trace.query == query)) return "trace query differs";
    if (!steps.empty() && !(steps.front().subject == query.subject)) return "first step off the query subject";
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        if (!(steps[i].object == steps[i + 1].subject)) return "chain broken at step " + std::to_string(i + 1);
    }
    std::unordered_set<Triple, TripleHash> seen;
    for (const Triple& s : steps) {
        if (!kb.contains(s)) return "step not in KB: " + to_tsv(s);
        if (s == query) return "query fact used as a step";
        if (spec.exclude_used_facts && !seen.insert(s).second) return "fact reused: " + to_tsv(s);
    }
    if (steps.size() > spec.max_steps) return "more steps than the budget";
    const bool ends = !steps.empty() && steps.back().object == query.object;
    if (trace.reach != ends) return "reach flag disagrees with the path";
    switch (trace.status) {
        case TraceStatus::Reached:
            if (!ends) return "status reached without reaching";
            for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
                if (steps[i].object == query.object) return "walk continued past the target";
            }
            break;
        case TraceStatus::MaxSteps:
            if (ends) return "status max_steps but target reached";
            if (steps.size() != spec.max_steps) return "max_steps with unused budget";
            break;
        case TraceStatus::EmptySlice:
            if (ends) return "status empty_slice but target reached";
            break;
    }
    bool verified = false;
    if (ends && table != nullptr) {
        const auto r = fold_relations(steps, *table);
        verified = r && *r == query.relation;
    }
    if (trace.verified != verified) return "verified flag disagrees with the composition";
    return {};
}

int run_cli(const std::string& args, std::string* out, std::string* err) {
    TempDir tmp;
    const std::string out_path = tmp.file("stdout");
    const std::string err_path = tmp.file("stderr");
    const std::string cmd =
        std::string("'") + LMLP_CLI_PATH + "' " + args + " >'" + out_path + "' 2>'" + err_path + "'";
    const int status = std::system(cmd.c_str());
    if (out != nullptr) *out = slurp(out_path);
    if (err != nullptr) *err = slurp(err_path);
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

RuleExample sister_example() {
    return {Triple::make("George", "sister", "Nancy"),
            {Triple::make("George", "brother", "Dale"), Triple::make("Dale", "sister", "Nancy")}};
}

Triple sister_query() { return Triple::make("Joseph", "sister", "Katherine"); }

}  // namespace lmlp::test

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "lmlp/embedding.hpp"

#include <json.hpp>
#include <mutex>
#include <thread>

namespace lmlp::test {

struct FakeService::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    mutable std::mutex mutex;
    std::vector<std::string> vocabulary{"nothing to say"};
    std::vector<int> failures;
    std::string raw;
    std::size_t requests = 0;

    // Returns true when the request was answered with a scripted failure.
    bool scripted(httplib::Response& res) {
        std::lock_guard lock(mutex);
        ++requests;
        if (!raw.empty()) {
            res.set_content(raw, "application/json");
            return true;
        }
        if (failures.empty()) return false;
        res.status = failures.front();
        failures.erase(failures.begin());
        res.set_content("{}", "application/json");
        return true;
    }
};

FakeService::FakeService() : impl_(std::make_unique<Impl>()) {
    Impl* impl = impl_.get();
    impl->server.Post("/v1/completions", [impl](const httplib::Request& req, httplib::Response& res) {
        if (impl->scripted(res)) return;
        const auto body = nlohmann::json::parse(req.body);
        const std::size_t n = body.at("n").get<std::size_t>();
        Rng rng(fnv1a64(req.body));
        nlohmann::json choices = nlohmann::json::array();
        std::lock_guard lock(impl->mutex);
        for (std::size_t i = 0; i < n; ++i) choices.push_back({{"text", " " + rng.pick(impl->vocabulary) + "\nmore"}});
        res.set_content(nlohmann::json{{"choices", choices}}.dump(), "application/json");
    });
    impl->server.Post("/v1/embeddings", [impl](const httplib::Request& req, httplib::Response& res) {
        if (impl->scripted(res)) return;
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json data = nlohmann::json::array();
        for (const auto& t : body.at("input")) {
            data.push_back({{"embedding", hash_embed(t.get<std::string>(), 64).dense()}});
        }
        res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    impl->port = impl->server.bind_to_any_port("127.0.0.1");
    impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

FakeService::~FakeService() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::string FakeService::url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + path;
}

void FakeService::set_vocabulary(std::vector<std::string> sentences) {
    std::lock_guard lock(impl_->mutex);
    impl_->vocabulary = std::move(sentences);
}

void FakeService::fail_next(std::vector<int> statuses) {
    std::lock_guard lock(impl_->mutex);
    impl_->failures = std::move(statuses);
}

void FakeService::set_raw_reply(std::string body) {
    std::lock_guard lock(impl_->mutex);
    impl_->raw = std::move(body);
}

std::size_t FakeService::requests() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->requests;
}

}  // namespace lmlp::test
