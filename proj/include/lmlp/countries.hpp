#pragma once
// Countries-style link prediction tasks S1/S2/S3.
//
// Raw KBs hold locatedIn edges country -> subregion -> region, the direct
// country -> region edge, and symmetric neighborOf edges. Test countries
// lose facts so that each task needs a longer proof:
//   S1  drop (c, locatedIn, region)
//   S2  also drop (c, locatedIn, subregion)
//   S3  also drop (n, locatedIn, region) for every neighbor n of c

#include "lmlp/knowledge_base.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lmlp {

enum class CountriesTask { S1, S2, S3 };

const char* to_string(CountriesTask t);
CountriesTask parse_countries_task(std::string_view text);
// Proof depth bound for the task's test queries: 2, 3, 4.
std::size_t max_depth(CountriesTask t);
// Human-readable removal scheme, echoed into manifests.
std::string removal_scheme(CountriesTask t);

struct CountriesSplit {
    CountriesTask task = CountriesTask::S1;
    KnowledgeBase train_kb;
    std::vector<Triple> test_queries;  // (country, locatedIn, region)
    std::vector<Triple> removed;
    std::vector<EntityId> rejected;  // candidates the provability gate refused
};

// Test countries are drawn in seeded order; a candidate whose addition makes
// any test query unprovable within max_depth(task) is rejected and the next
// one is tried. Aims for max(1, round(test_fraction * candidates)) test
// countries. Throws UnprovableTestQuery if none survive, InvalidArgument if
// raw has no country -> subregion -> region structure.
CountriesSplit build_countries_tasks(const KnowledgeBase& raw, CountriesTask task, double test_fraction,
                                     std::uint64_t seed);

}  // namespace lmlp
