#include "lmlp/split_io.hpp"

#include "lmlp/error.hpp"
#include "lmlp/kb_io.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/story.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

namespace lmlp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string instance_name(std::size_t length, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "l%zu/%03zu", length, index);
    return buf;
}

std::string fact_text(const std::vector<Triple>& facts, const std::optional<Triple>& query) {
    std::ostringstream out;
    write_fact_stream(out, facts, query);
    return out.str();
}

json noise_json(const NoiseConfig& n) {
    return {{"rate", n.rate}, {"base", n.base}, {"seed", n.seed}, {"sampling", "vocab-uniform"}};
}

NoiseConfig noise_from_json(const json& j) {
    NoiseConfig n;
    if (j.is_object()) {
        n.rate = j.value("rate", 0.0);
        n.base = j.value("base", std::size_t{5000});
        n.seed = j.value("seed", std::uint64_t{0});
    }
    return n;
}

// Writes a batch of files after confirming none would be clobbered.
void write_all(const std::vector<std::pair<std::string, std::string>>& files, bool overwrite) {
    if (!overwrite) {
        for (const auto& [path, _] : files) {
            if (fs::exists(path)) throw Error(ErrorKind::Io, path + " exists (use --force to overwrite)");
        }
    }
    for (const auto& [path, text] : files) write_text_file(path, text, true);
}

json read_manifest(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::UnparsableText, path + ": " + e.what());
    }
}

std::string resolve(const std::string& manifest_path, const std::string& rel) {
    return (fs::path(manifest_path).parent_path() / rel).string();
}

}  // namespace

RuleLibrary clutrr_rule_library(const ClutrrSplit& split, const CompositionTable& table) {
    return extract_rule_library(split.rule_training(), ClutrrSplit::kMaxRuleLength, &table);
}

RuleLibrary countries_rule_library(const CountriesSplit& split) {
    const RelationId located = RelationId::intern("locatedIn");
    std::vector<TrainingQuery> train;
    std::vector<EntityId> tests;
    for (const Triple& q : split.test_queries) tests.push_back(q.subject);
    // Every surviving direct country -> region fact is a training task.
    // Regions contain things and sit nowhere; countries contain nothing.
    std::set<EntityId> containers, contained;
    for (const Triple& t : split.train_kb.facts()) {
        if (t.relation != located) continue;
        containers.insert(t.object);
        contained.insert(t.subject);
    }
    for (const Triple& t : split.train_kb.facts()) {
        const bool to_region = containers.count(t.object) && !contained.count(t.object);
        if (t.relation == located && to_region && !containers.count(t.subject) &&
            std::find(tests.begin(), tests.end(), t.subject) == tests.end()) {
            train.emplace_back(t, split.train_kb);
        }
    }
    const CompositionTable table = CompositionTable::countries();
    return extract_rule_library(train, max_depth(split.task), &table);
}

void write_clutrr_split(const std::string& dir, const ClutrrSplit& split, const RuleLibrary& rules,
                        const VerbalizationSchema& schema, const ClutrrWriteOptions& options) {
    std::vector<std::pair<std::string, std::string>> files;
    json lengths = json::array(), counts = json::object(), instances = json::object(), stories = json::object();
    for (const auto& [len, bucket] : split.by_length) {
        lengths.push_back(len);
        counts[std::to_string(len)] = bucket.size();
        json inst = json::array(), st = json::array();
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            const std::string name = instance_name(len, i);
            inst.push_back(name + ".tsv");
            files.emplace_back((fs::path(dir) / (name + ".tsv")).string(), fact_text(bucket[i].facts, bucket[i].query));
            if (options.stories) {
                st.push_back(name + ".story.txt");
                const std::uint64_t story_seed = derive_seed(split.seed, len, i);
                files.emplace_back((fs::path(dir) / (name + ".story.txt")).string(),
                                   render_story(bucket[i].facts, schema, story_seed) + "\n");
            }
        }
        instances[std::to_string(len)] = inst;
        if (options.stories) stories[std::to_string(len)] = st;
    }
    files.emplace_back((fs::path(dir) / "rules.json").string(), rules.to_json_text());

    std::size_t total_facts = 0;
    for (const auto& [len, bucket] : split.by_length) {
        for (const auto& inst : bucket) total_facts += inst.facts.size();
    }
    json manifest = {
        {"kind", "clutrr"},
        {"setting", to_string(options.setting)},
        {"lengths", lengths},
        {"counts", counts},
        {"seed", split.seed},
        {"noise", noise_json(options.noise)},
        {"rule_library_size", rules.size()},
        {"total_facts", total_facts},
        {"files", {{"rules", "rules.json"}, {"instances", instances}, {"stories", stories}}},
    };
    files.emplace_back((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    write_all(files, options.overwrite);
}

void write_countries_split(const std::string& dir, const CountriesSplit& split, const RuleLibrary& rules,
                           const CountriesWriteOptions& options) {
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back((fs::path(dir) / "train.tsv").string(), fact_text(split.train_kb.facts(), std::nullopt));
    files.emplace_back((fs::path(dir) / "test.tsv").string(), fact_text(split.test_queries, std::nullopt));
    files.emplace_back((fs::path(dir) / "rules.json").string(), rules.to_json_text());
    json removed = json::array(), rejected = json::array();
    for (const Triple& t : split.removed) removed.push_back(to_tsv(t));
    for (EntityId e : split.rejected) rejected.push_back(e.text());
    json manifest = {
        {"kind", "countries"},
        {"task", to_string(split.task)},
        {"scheme", removal_scheme(split.task)},
        {"seed", options.seed},
        {"test_fraction", options.test_fraction},
        {"counts", {{"train_facts", split.train_kb.size()}, {"test_queries", split.test_queries.size()}}},
        {"removed", removed},
        {"rejected_test_countries", rejected},
        {"rule_library_size", rules.size()},
        {"noise", noise_json(NoiseConfig{})},
        {"files", {{"train", "train.tsv"}, {"test", "test.tsv"}, {"rules", "rules.json"}}},
    };
    files.emplace_back((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    write_all(files, options.overwrite);
}

std::string manifest_kind(const std::string& manifest_path) {
    const json m = read_manifest(manifest_path);
    return m.value("kind", std::string("clutrr"));
}

LoadedClutrr read_clutrr_split(const std::string& manifest_path) {
    const json m = read_manifest(manifest_path);
    LoadedClutrr out;
    try {
        out.split.seed = m.at("seed").get<std::uint64_t>();
        out.setting = parse_fact_setting(m.value("setting", std::string("test-facts")));
        out.noise = noise_from_json(m.value("noise", json::object()));
        out.rules_path = resolve(manifest_path, m.at("files").at("rules").get<std::string>());
        for (const auto& [len_text, files] : m.at("files").at("instances").items()) {
            const std::size_t len = std::stoul(len_text);
            auto& bucket = out.split.by_length[len];
            for (const auto& f : files) {
                FactFile ff = read_fact_file(resolve(manifest_path, f.get<std::string>()));
                if (!ff.query) throw Error(ErrorKind::UnparsableText, f.get<std::string>() + " has no query record");
                ClutrrInstance inst;
                inst.length = len;
                inst.query = *ff.query;
                inst.facts = std::move(ff.facts);
                for (const auto& [e, g] : infer_genders(inst.facts)) inst.genders[e] = g;
                bucket.push_back(std::move(inst));
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::UnparsableText, manifest_path + ": " + e.what());
    }
    return out;
}

LoadedCountries read_countries_split(const std::string& manifest_path) {
    const json m = read_manifest(manifest_path);
    LoadedCountries out;
    try {
        out.split.task = parse_countries_task(m.at("task").get<std::string>());
        const auto& files = m.at("files");
        out.split.train_kb = load_kb(resolve(manifest_path, files.at("train").get<std::string>()));
        out.split.test_queries = read_fact_file(resolve(manifest_path, files.at("test").get<std::string>())).facts;
        out.rules_path = resolve(manifest_path, files.at("rules").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::UnparsableText, manifest_path + ": " + e.what());
    }
    return out;
}

}  // namespace lmlp
