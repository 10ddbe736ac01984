#include "lmlp/composition.hpp"

#include "lmlp/data_files.hpp"
#include "lmlp/error.hpp"
#include "lmlp/kb_io.hpp"

#include <json.hpp>

#include <set>

namespace lmlp {

void CompositionTable::add(RelationId r1, RelationId r2, RelationId result) {
    auto [it, fresh] = table_.emplace(Key{r1, r2}, result);
    if (!fresh && it->second != result) {
        throw Error(ErrorKind::InvalidArgument, "conflicting composition for (" + r1.text() + ", " +
                                                    r2.text() + "): " + it->second.text() +
                                                    " vs " + result.text());
    }
}

std::optional<RelationId> CompositionTable::compose(RelationId r1, RelationId r2) const {
    auto it = table_.find(Key{r1, r2});
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

std::vector<RelationId> CompositionTable::relations() const {
    std::set<RelationId> all;
    for (const auto& [k, v] : table_) {
        all.insert(k.a);
        all.insert(k.b);
        all.insert(v);
    }
    return {all.begin(), all.end()};
}

CompositionTable CompositionTable::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("composition JSON: ") + e.what());
    }
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "composition table must be a JSON list");
    CompositionTable table;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 3) {
            throw Error(ErrorKind::InvalidArgument, "composition entry must be [r1, r2, r3]: " + row.dump());
        }
        table.add(RelationId::intern(row[0].get<std::string>()),
                  RelationId::intern(row[1].get<std::string>()),
                  RelationId::intern(row[2].get<std::string>()));
    }
    return table;
}

CompositionTable CompositionTable::load(const std::string& path) {
    return from_json_text(read_text_file(path));
}

std::string CompositionTable::to_json_text() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [k, v] : table_) j.push_back({k.a.text(), k.b.text(), v.text()});
    return j.dump();
}

CompositionTable CompositionTable::kinship() {
    static const CompositionTable table = load(data_path("kinship_composition.json"));
    return table;
}

CompositionTable CompositionTable::countries() {
    static const CompositionTable table = load(data_path("countries_composition.json"));
    return table;
}

std::vector<HornRule> CompositionTable::to_rules() const {
    std::vector<HornRule> rules;
    rules.reserve(table_.size());
    const Term a = Variable{"A"}, b = Variable{"B"}, c = Variable{"C"};
    for (const auto& [k, v] : table_) {
        rules.push_back({{v, {a, c}}, {{k.a, {a, b}}, {k.b, {b, c}}}});
    }
    return rules;
}

std::optional<RelationId> compose_path(const std::vector<Triple>& steps, const CompositionTable& table) {
    if (!is_chain(steps)) throw Error(ErrorKind::ChainBroken, "steps violate the chain constraint");
    if (steps.empty()) return std::nullopt;
    RelationId acc = steps.front().relation;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        auto next = table.compose(acc, steps[i].relation);
        if (!next) return std::nullopt;
        acc = *next;
    }
    return acc;
}

}  // namespace lmlp
