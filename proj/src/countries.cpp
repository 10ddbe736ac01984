#include "lmlp/countries.hpp"

#include "lmlp/backward_chain.hpp"
#include "lmlp/composition.hpp"
#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace lmlp {

const char* to_string(CountriesTask t) {
    switch (t) {
        case CountriesTask::S1: return "S1";
        case CountriesTask::S2: return "S2";
        case CountriesTask::S3: return "S3";
    }
    return "?";
}

CountriesTask parse_countries_task(std::string_view text) {
    if (text == "S1" || text == "s1") return CountriesTask::S1;
    if (text == "S2" || text == "s2") return CountriesTask::S2;
    if (text == "S3" || text == "s3") return CountriesTask::S3;
    throw Error(ErrorKind::InvalidArgument, "unknown countries task: " + std::string(text));
}

std::size_t max_depth(CountriesTask t) {
    switch (t) {
        case CountriesTask::S1: return 2;
        case CountriesTask::S2: return 3;
        case CountriesTask::S3: return 4;
    }
    return 4;
}

std::string removal_scheme(CountriesTask t) {
    switch (t) {
        case CountriesTask::S1: return "remove (c, locatedIn, region) for each test country c";
        case CountriesTask::S2:
            return "remove (c, locatedIn, region) and (c, locatedIn, subregion) for each test country c";
        case CountriesTask::S3:
            return "remove (c, locatedIn, region) and (c, locatedIn, subregion) for each test country c, "
                   "and (n, locatedIn, region) for every neighbor n of c";
    }
    return "";
}

namespace {

struct Geography {
    RelationId located = RelationId::intern("locatedIn");
    RelationId neighbor = RelationId::intern("neighborOf");
    std::map<EntityId, EntityId> subregion_of;  // country -> subregion
    std::map<EntityId, EntityId> region_of;     // country or subregion -> region
    std::map<EntityId, std::vector<EntityId>> neighbors;
    std::vector<EntityId> candidates;           // countries with a direct region fact

    explicit Geography(const KnowledgeBase& kb) {
        std::set<EntityId> has_out, is_target;
        for (const Triple& t : kb.facts()) {
            if (t.relation == located) {
                has_out.insert(t.subject);
                is_target.insert(t.object);
            }
        }
        auto is_region = [&](EntityId e) { return is_target.count(e) && !has_out.count(e); };
        std::set<EntityId> subregions;
        for (const Triple& t : kb.facts()) {
            if (t.relation == located && is_region(t.object) && is_target.count(t.subject)) {
                subregions.insert(t.subject);
                region_of[t.subject] = t.object;
            }
        }
        for (const Triple& t : kb.facts()) {
            if (t.relation == located && subregions.count(t.object) && !subregions.count(t.subject)) {
                subregion_of[t.subject] = t.object;
            }
            if (t.relation == neighbor) neighbors[t.subject].push_back(t.object);
        }
        for (const auto& [country, sub] : subregion_of) {
            auto r = region_of.find(sub);
            if (r == region_of.end()) continue;
            if (kb.contains(Triple{country, located, r->second})) {
                candidates.push_back(country);
            }
        }
        std::sort(candidates.begin(), candidates.end());
    }

    EntityId region(EntityId country) const { return region_of.at(subregion_of.at(country)); }
};

}  // namespace

CountriesSplit build_countries_tasks(const KnowledgeBase& raw, CountriesTask task, double test_fraction,
                                     std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "test_fraction must lie in (0, 1]");
    }
    const Geography geo(raw);
    if (geo.candidates.empty()) {
        throw Error(ErrorKind::InvalidArgument, "KB has no country -> subregion -> region structure");
    }
    const std::vector<HornRule> rules = CompositionTable::countries().to_rules();
    const std::size_t target =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(test_fraction * geo.candidates.size())));

    auto removals_for = [&](const std::vector<EntityId>& tests) {
        std::vector<Triple> removed;
        auto drop = [&](const Triple& t) {
            if (raw.contains(t) && std::find(removed.begin(), removed.end(), t) == removed.end()) {
                removed.push_back(t);
            }
        };
        for (EntityId c : tests) {
            drop({c, geo.located, geo.region(c)});
            if (task != CountriesTask::S1) drop({c, geo.located, geo.subregion_of.at(c)});
            if (task == CountriesTask::S3) {
                if (auto it = geo.neighbors.find(c); it != geo.neighbors.end()) {
                    for (EntityId n : it->second) {
                        if (geo.subregion_of.count(n)) drop({n, geo.located, geo.region(n)});
                    }
                }
            }
        }
        return removed;
    };

    CountriesSplit split;
    split.task = task;
    std::vector<EntityId> tests;
    for (std::size_t idx : permutation(geo.candidates.size(), seed)) {
        if (tests.size() == target) break;
        const EntityId c = geo.candidates[idx];
        std::vector<EntityId> trial = tests;
        trial.push_back(c);
        const KnowledgeBase kb = raw.without(removals_for(trial));
        const bool ok = std::all_of(trial.begin(), trial.end(), [&](EntityId t) {
            return is_provable(Triple{t, geo.located, geo.region(t)}, kb, rules, max_depth(task));
        });
        if (ok) {
            tests = std::move(trial);
        } else {
            split.rejected.push_back(c);
        }
    }
    if (tests.empty()) {
        throw Error(ErrorKind::UnprovableTestQuery, std::string("no provable test country for ") + to_string(task));
    }
    split.removed = removals_for(tests);
    split.train_kb = raw.without(split.removed);
    for (EntityId c : tests) split.test_queries.push_back({c, geo.located, geo.region(c)});
    return split;
}

}  // namespace lmlp
