#pragma once
// On-disk splits: a manifest.json plus instance files.
//
// CLUTRR-style layout:
//   manifest.json  rules.json  l<L>/<i>.tsv  l<L>/<i>.story.txt
// Countries layout:
//   manifest.json  rules.json  train.tsv  test.tsv
// Instance files use the kb_io encoding with a query record first.

#include "lmlp/clutrr.hpp"
#include "lmlp/countries.hpp"
#include "lmlp/noise.hpp"
#include "lmlp/rule_library.hpp"
#include "lmlp/schema.hpp"

#include <string>

namespace lmlp {

struct ClutrrWriteOptions {
    FactSetting setting = FactSetting::TestFacts;
    NoiseConfig noise;  // recorded for evaluation defaults
    bool stories = true;
    bool overwrite = false;
};

// Every output path is checked before the first write, so a refused
// overwrite leaves the directory untouched.
void write_clutrr_split(const std::string& dir, const ClutrrSplit& split, const RuleLibrary& rules,
                        const VerbalizationSchema& schema, const ClutrrWriteOptions& options);

struct CountriesWriteOptions {
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
    bool overwrite = false;
};

void write_countries_split(const std::string& dir, const CountriesSplit& split, const RuleLibrary& rules,
                           const CountriesWriteOptions& options);

// "clutrr" or "countries".
std::string manifest_kind(const std::string& manifest_path);

struct LoadedClutrr {
    ClutrrSplit split;
    FactSetting setting = FactSetting::TestFacts;
    NoiseConfig noise;
    std::string rules_path;
};
LoadedClutrr read_clutrr_split(const std::string& manifest_path);

struct LoadedCountries {
    CountriesSplit split;
    std::string rules_path;
};
LoadedCountries read_countries_split(const std::string& manifest_path);

// Rule libraries curated for each domain.
RuleLibrary clutrr_rule_library(const ClutrrSplit& split, const CompositionTable& table);
RuleLibrary countries_rule_library(const CountriesSplit& split);

}  // namespace lmlp
