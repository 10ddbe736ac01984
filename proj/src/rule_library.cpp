#include "lmlp/rule_library.hpp"

#include "lmlp/error.hpp"
#include "lmlp/kb_io.hpp"
#include "lmlp/log.hpp"
#include "lmlp/paths.hpp"

#include <json.hpp>

namespace lmlp {

void RuleLibrary::add(const RuleExample& ex) {
    HornRule abstract = abstract_example(ex);
    by_relation_[ex.task.relation].push_back(entries_.size());
    entries_.push_back({ex, std::move(abstract)});
}

const std::vector<std::size_t>& RuleLibrary::with_relation(RelationId r) const {
    static const std::vector<std::size_t> kNone;
    auto it = by_relation_.find(r);
    return it == by_relation_.end() ? kNone : it->second;
}

std::string RuleLibrary::to_json_text() const {
    nlohmann::json out = nlohmann::json::array();
    for (const Entry& e : entries_) {
        nlohmann::json steps = nlohmann::json::array();
        for (const Triple& t : e.example.steps) steps.push_back(to_tsv(t));
        nlohmann::json body = nlohmann::json::array();
        for (const Atom& a : e.abstract.body) body.push_back(to_tsv(a));
        out.push_back({{"task", to_tsv(e.example.task)},
                       {"steps", steps},
                       {"abstract", {{"head", to_tsv(e.abstract.head)}, {"body", body}}}});
    }
    return out.dump(1);
}

RuleLibrary RuleLibrary::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("rule library JSON: ") + e.what());
    }
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "rule library must be a JSON list");
    RuleLibrary lib;
    for (const auto& rec : j) {
        RuleExample ex;
        ex.task = parse_fact_line(rec.at("task").get<std::string>());
        for (const auto& s : rec.at("steps")) ex.steps.push_back(parse_fact_line(s.get<std::string>()));
        lib.add(ex);
        // A stored abstraction must agree with the one we derive.
        if (rec.contains("abstract")) {
            HornRule stored;
            stored.head = parse_atom_tsv(rec["abstract"].at("head").get<std::string>());
            for (const auto& b : rec["abstract"].at("body")) {
                stored.body.push_back(parse_atom_tsv(b.get<std::string>()));
            }
            if (!(stored == lib.entries_.back().abstract)) {
                throw Error(ErrorKind::InvalidArgument,
                            "abstract rule does not match steps for task " + to_tsv(ex.task));
            }
        }
    }
    return lib;
}

RuleLibrary RuleLibrary::load(const std::string& path) { return from_json_text(read_text_file(path)); }

namespace {

std::string rendered(const std::vector<Triple>& steps) {
    std::string out;
    for (const Triple& t : steps) out += to_tsv(t) + "\n";
    return out;
}

}  // namespace

RuleLibrary extract_rule_library(const std::vector<TrainingQuery>& train, std::size_t max_len,
                                 const CompositionTable* table) {
    if (max_len < 2) throw Error(ErrorKind::InvalidArgument, "max_len must be >= 2");
    RuleLibrary lib;
    std::size_t skipped = 0;
    for (const auto& [task, kb] : train) {
        const std::vector<Triple> drop{task};
        const KnowledgeBase search = kb.contains(task) ? kb.without(drop) : kb;
        const std::vector<Triple>* best = nullptr;
        std::string best_key;
        const auto paths = find_ground_paths(search, task.subject, task.object, max_len);
        for (const auto& p : paths) {
            if (table != nullptr) {
                const auto composed = compose_path(p, *table);
                if (!composed || *composed != task.relation) continue;
            }
            if (best != nullptr && p.size() > best->size()) continue;
            std::string key = rendered(p);
            if (best != nullptr && p.size() == best->size() && key >= best_key) continue;
            best = &p;
            best_key = std::move(key);
        }
        if (best == nullptr) {
            ++skipped;
            log_warn("rule extraction: no proof for training query " + to_tsv(task));
            continue;
        }
        lib.add({task, *best});
    }
    if (skipped > 0) {
        log_info("rule extraction: skipped " + std::to_string(skipped) + " of " +
                 std::to_string(train.size()) + " training queries");
    }
    return lib;
}

}  // namespace lmlp
