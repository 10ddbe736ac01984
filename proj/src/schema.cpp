#include "lmlp/schema.hpp"

#include "lmlp/data_files.hpp"
#include "lmlp/error.hpp"
#include "lmlp/kb_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>

namespace lmlp {

VerbalizationSchema VerbalizationSchema::from_templates(
    const std::map<std::string, std::string>& templates) {
    VerbalizationSchema schema;
    bool all_infix = !templates.empty();
    std::map<std::string, std::string> seen;
    for (const auto& [name, raw] : templates) {
        const auto s = raw.find("{s}");
        const auto o = raw.find("{o}");
        if (s == std::string::npos || o == std::string::npos || o < s ||
            raw.find("{s}", s + 3) != std::string::npos ||
            raw.find("{o}", o + 3) != std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, "template for '" + name + "' must contain {s} then {o}");
        }
        Template t;
        t.relation = RelationId::intern(name);
        t.prefix = raw.substr(0, s);
        t.middle = raw.substr(s + 3, o - s - 3);
        t.suffix = raw.substr(o + 3);
        t.raw = raw;
        if (t.middle.empty()) {
            throw Error(ErrorKind::InvalidArgument, "template for '" + name + "' has no text between slots");
        }
        if (auto [it, fresh] = seen.emplace(raw, name); !fresh) {
            throw Error(ErrorKind::InvalidArgument,
                        "relations '" + it->second + "' and '" + name + "' share a template");
        }
        if (!(t.prefix.empty() && t.suffix.empty() && t.middle == " " + name + " ")) all_infix = false;
        schema.templates_.push_back(std::move(t));
        schema.relations_.push_back(schema.templates_.back().relation);
    }
    schema.style_ = all_infix ? SchemaStyle::Infix : SchemaStyle::PossessiveKinship;
    return schema;
}

VerbalizationSchema VerbalizationSchema::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("schema JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "schema must be a JSON object");
    std::map<std::string, std::string> templates;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) throw Error(ErrorKind::InvalidArgument, "template for '" + k + "' must be a string");
        templates.emplace(k, v.get<std::string>());
    }
    return from_templates(templates);
}

VerbalizationSchema VerbalizationSchema::load(const std::string& path) {
    return from_json_text(read_text_file(path));
}

VerbalizationSchema VerbalizationSchema::kinship() {
    static const VerbalizationSchema schema = load(data_path("kinship_schema.json"));
    return schema;
}

VerbalizationSchema VerbalizationSchema::countries() {
    static const VerbalizationSchema schema = load(data_path("countries_schema.json"));
    return schema;
}

bool VerbalizationSchema::has(RelationId r) const {
    return std::any_of(templates_.begin(), templates_.end(),
                       [&](const Template& t) { return t.relation == r; });
}

const VerbalizationSchema::Template& VerbalizationSchema::find(RelationId r) const {
    for (const Template& t : templates_) {
        if (t.relation == r) return t;
    }
    throw Error(ErrorKind::UnknownRelation, r.valid() ? r.text() : std::string("<invalid>"));
}

std::string VerbalizationSchema::render(std::string_view subject, RelationId relation,
                                        std::string_view object) const {
    const Template& t = find(relation);
    std::string out;
    out.reserve(t.prefix.size() + subject.size() + t.middle.size() + object.size() + t.suffix.size());
    out.append(t.prefix).append(subject).append(t.middle).append(object).append(t.suffix);
    return out;
}

std::string VerbalizationSchema::verbalize(const Triple& t) const {
    return render(t.subject.text(), t.relation, t.object.text());
}

Triple VerbalizationSchema::parse(std::string_view raw) const {
    const std::string_view text = trim(raw);
    const Template* best = nullptr;
    std::string_view best_s, best_o;
    for (const Template& t : templates_) {
        if (text.size() < t.prefix.size() + t.middle.size() + t.suffix.size() + 2) continue;
        if (!text.starts_with(t.prefix) || !text.ends_with(t.suffix)) continue;
        const std::string_view body =
            text.substr(t.prefix.size(), text.size() - t.prefix.size() - t.suffix.size());
        const auto m = body.find(t.middle);
        if (m == std::string_view::npos || m == 0 || m + t.middle.size() >= body.size()) continue;
        // Longest middle wins, so "son-in-law" is not read as "son".
        if (best != nullptr && best->middle.size() >= t.middle.size()) continue;
        best = &t;
        best_s = trim(body.substr(0, m));
        best_o = trim(body.substr(m + t.middle.size()));
    }
    if (best != nullptr && !best_s.empty() && !best_o.empty()) {
        return {EntityId::intern(best_s), best->relation, EntityId::intern(best_o)};
    }

    // Distinguish "wrong shape" from "right shape, unknown relation".
    static const std::regex possessive(R"(^(.+)'s (\S+) is (.+)$)");
    static const std::regex infix(R"(^(\S+) (\S+) (\S+)$)");
    const std::string owned(text);
    std::smatch m;
    const std::regex& shape = style_ == SchemaStyle::PossessiveKinship ? possessive : infix;
    if (std::regex_match(owned, m, shape)) {
        throw Error(ErrorKind::UnknownRelation, m[2].str());
    }
    throw Error(ErrorKind::UnparsableText, owned);
}

std::string VerbalizationSchema::to_json_text() const {
    nlohmann::json j = nlohmann::json::object();
    for (const Template& t : templates_) j[t.relation.text()] = t.raw;
    return j.dump(2);
}

}  // namespace lmlp
