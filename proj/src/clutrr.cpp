#include "lmlp/clutrr.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <algorithm>
#include <array>

namespace lmlp {

namespace {

constexpr std::array kSurnames = {
    "Reed", "Hale", "Moss", "Cole", "Webb", "Page", "Ford", "Lane", "West", "Snow", "Park", "Dunn",
    "Hart", "Kemp", "Lowe", "Nash", "Pratt", "Quinn", "Rowe", "Shaw", "Tate", "Vance", "Wade",
    "York", "Bell", "Cross", "Drake", "Ellis", "Frost", "Grant", "Hayes", "Irwin", "Joyce",
    "Knox", "Lyons", "Marsh", "Noble", "Owen", "Pike", "Rhodes", "Stone", "Todd", "Vaughn",
    "Wolfe", "Yates", "Ames", "Blair", "Crane", "Doyle", "Eaton"};

std::string surname_for(std::size_t global_index) {
    std::string s = kSurnames[global_index % kSurnames.size()];
    if (std::size_t round = global_index / kSurnames.size(); round > 0) {
        s += "-" + std::string(kSurnames[round % kSurnames.size()]);
        if (round >= kSurnames.size()) s += std::to_string(round / kSurnames.size());
    }
    return s;
}

// Randomised DFS for a simple path of exactly `length` edges whose left fold
// is defined at every prefix.
struct PathSearch {
    const KnowledgeBase& kb;
    const CompositionTable& table;
    Rng& rng;
    std::size_t length;
    std::size_t budget = 5000;
    std::vector<Triple> path;
    std::vector<EntityId> visited;

    bool extend(EntityId at, std::optional<RelationId> folded) {
        if (path.size() == length) return true;
        if (budget == 0) return false;
        --budget;
        std::vector<Triple> next = kb.facts_with_subject(at);
        rng.shuffle(next);
        for (const Triple& t : next) {
            if (std::find(visited.begin(), visited.end(), t.object) != visited.end()) continue;
            std::optional<RelationId> f = folded ? table.compose(*folded, t.relation) : t.relation;
            if (!f) continue;
            path.push_back(t);
            visited.push_back(t.object);
            if (extend(t.object, f)) return true;
            path.pop_back();
            visited.pop_back();
        }
        return false;
    }
};

}  // namespace

const char* to_string(FactSetting s) {
    return s == FactSetting::TestFacts ? "test-facts" : "all-facts";
}

FactSetting parse_fact_setting(std::string_view text) {
    if (text == "test-facts") return FactSetting::TestFacts;
    if (text == "all-facts") return FactSetting::AllFacts;
    throw Error(ErrorKind::InvalidArgument, "unknown fact setting: " + std::string(text));
}

std::vector<TrainingQuery> ClutrrSplit::rule_training() const {
    std::vector<TrainingQuery> out;
    for (const auto& [len, instances] : by_length) {
        if (len > kMaxRuleLength) continue;
        for (const ClutrrInstance& inst : instances) out.emplace_back(inst.query, KnowledgeBase(inst.facts));
    }
    return out;
}

KnowledgeBase ClutrrSplit::bucket_kb(std::size_t length, FactSetting setting) const {
    KnowledgeBase kb;
    if (auto it = by_length.find(length); it != by_length.end()) {
        for (const ClutrrInstance& inst : it->second) kb.add_all(inst.facts);
    }
    if (setting == FactSetting::AllFacts) {
        for (const auto& [len, instances] : by_length) {
            if (len > kMaxRuleLength || len == length) continue;
            for (const ClutrrInstance& inst : instances) kb.add_all(inst.facts);
        }
    }
    return kb;
}

std::vector<Triple> ClutrrSplit::bucket_queries(std::size_t length) const {
    std::vector<Triple> out;
    if (auto it = by_length.find(length); it != by_length.end()) {
        for (const ClutrrInstance& inst : it->second) out.push_back(inst.query);
    }
    return out;
}

ClutrrSplit build_clutrr_split(const std::vector<std::size_t>& lengths, std::size_t per_length,
                               std::uint64_t seed, const CompositionTable& table,
                               const ClutrrOptions& options) {
    for (std::size_t len : lengths) {
        if (len < 2 || len > 10) {
            throw Error(ErrorKind::InvalidArgument, "lengths must lie in [2, 10], got " + std::to_string(len));
        }
    }
    ClutrrSplit split;
    split.seed = seed;
    std::vector<std::size_t> sorted = lengths;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::size_t global_index = 0;
    for (std::size_t len : sorted) {
        auto& bucket = split.by_length[len];
        for (std::size_t i = 0; i < per_length; ++i, ++global_index) {
            const std::string surname = surname_for(global_index);
            const std::uint64_t inst_seed = derive_seed(seed, len, i);
            const std::size_t size = options.graph_size ? options.graph_size : std::max<std::size_t>(12, 2 * len + 6);
            bool done = false;
            for (std::size_t attempt = 0; attempt < options.max_retries && !done; ++attempt) {
                const FamilyGraph graph = generate_family_graph(size, derive_seed(inst_seed, attempt), surname);
                const KnowledgeBase kb = graph.kb();
                Rng rng(derive_seed(inst_seed, attempt, 1));
                const EntityId start = graph.people[rng.uniform(graph.people.size())].id;
                PathSearch search{kb, table, rng, len};
                search.visited.push_back(start);
                if (!search.extend(start, std::nullopt)) continue;
                const auto target = compose_path(search.path, table);
                if (!target) continue;
                ClutrrInstance inst;
                inst.length = len;
                inst.chain = search.path;
                inst.query = Triple{start, *target, search.path.back().object};
                for (const Triple& t : inst.chain) inst.facts.push_back(t);
                for (const Triple& t : inst.chain) {
                    for (const Triple& back : kb.facts_with_subject(t.object)) {
                        if (back.object == t.subject) inst.facts.push_back(back);
                    }
                }
                for (const Person& p : graph.people) {
                    bool mentioned = std::any_of(inst.facts.begin(), inst.facts.end(), [&](const Triple& f) {
                        return f.subject == p.id || f.object == p.id;
                    });
                    if (mentioned) inst.genders[p.id] = p.gender;
                }
                bucket.push_back(std::move(inst));
                done = true;
            }
            if (!done) {
                throw Error(ErrorKind::CompositionUndefined,
                            "no composable path of length " + std::to_string(len) + " after retries");
            }
        }
    }
    return split;
}

}  // namespace lmlp
