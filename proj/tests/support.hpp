#pragma once
// Independent reference implementations used as test oracles, plus small
// fixtures shared by the unit tests and the acceptance binary.

#include "lmlp/composition.hpp"
#include "lmlp/family.hpp"
#include "lmlp/knowledge_base.hpp"
#include "lmlp/logic.hpp"
#include "lmlp/prompt.hpp"
#include "lmlp/prover.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lmlp::test {

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path);
std::string test_data(const std::string& name);

using PathSet = std::set<std::vector<std::string>>;

// Steps as tab-rendered strings, for set comparisons.
std::vector<std::string> render(const std::vector<Triple>& steps);

// Every simple chain src -> dst of 1..max_len facts. Scans the whole fact
// list at each hop instead of using any index.
PathSet brute_paths(const std::vector<Triple>& facts, EntityId src, EntityId dst, std::size_t max_len);

// Relations derivable for a relation sequence under chain rules, with any
// bracketing (CYK over spans).
std::set<std::string> derivable(const std::vector<RelationId>& seq, const std::vector<HornRule>& rules);

// Expected proof set of backward_chain: [goal] when goal is a fact, plus
// every simple path of length <= max_depth whose relations derive the goal
// relation.
PathSet brute_proofs(const Triple& goal, const std::vector<Triple>& facts, const std::vector<HornRule>& rules,
                     std::size_t max_depth);

struct RandomGraph {
    std::vector<Triple> facts;
    std::vector<EntityId> entities;
    std::vector<RelationId> relations;
    std::vector<HornRule> rules;
};

// Up to max_entities entities over 3 relations, with random two-atom and
// three-atom chain rules. Entity names are unique per seed.
RandomGraph random_graph(std::uint64_t seed, std::size_t max_entities = 20);

// Kinship relations that truly hold ("a's R is b") in a family tree,
// computed from parents, spouses and children only.
std::set<std::string> true_kinship(const FamilyGraph& g, std::size_t a, std::size_t b);

// Plain left fold through table lookups.
std::optional<RelationId> fold_relations(const std::vector<Triple>& steps, const CompositionTable& table);

// Empty when the trace satisfies every structural invariant; otherwise a
// description of the first violation.
std::string check_trace(const ProofTrace& trace, const Triple& query, const KnowledgeBase& kb,
                        const CompositionTable* table, const PromptSpec& spec);

// Runs the lmlp binary with the given argument string. stdout/stderr are
// captured when the pointers are set.
int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr);

// Local stand-in for completion and embedding services on 127.0.0.1.
// POST /v1/completions answers with n sentences drawn from the vocabulary
// (seeded by the request); POST /v1/embeddings answers with 64-dim hash
// embeddings.
class FakeService {
public:
    FakeService();
    ~FakeService();
    FakeService(const FakeService&) = delete;
    FakeService& operator=(const FakeService&) = delete;

    std::string url(const std::string& path) const;
    void set_vocabulary(std::vector<std::string> sentences);
    // Statuses to answer with, in order, before serving normally.
    void fail_next(std::vector<int> statuses);
    // Non-empty: served verbatim with status 200.
    void set_raw_reply(std::string body);
    std::size_t requests() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// The George/Dale/Nancy example and the Joseph query.
RuleExample sister_example();
Triple sister_query();

}  // namespace lmlp::test
