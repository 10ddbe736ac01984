#pragma once
// Verbalization schema: relation -> sentence template with {s}/{o} slots.
//
// Two styles are recognised. Possessive-kinship templates look like
// "{s}'s daughter is {o}"; infix templates look like "{s} locatedIn {o}".
// The schema is loaded from a JSON map so new domains need no rebuild.

#include "lmlp/triple.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lmlp {

enum class SchemaStyle { PossessiveKinship, Infix };

class VerbalizationSchema {
public:
    VerbalizationSchema() = default;

    // Throws InvalidArgument if a template lacks exactly one {s} and one {o}
    // (in that order) or two relations share a template.
    static VerbalizationSchema from_templates(const std::map<std::string, std::string>& templates);
    static VerbalizationSchema from_json_text(std::string_view text);
    static VerbalizationSchema load(const std::string& path);

    // Built-in templates for the two shipped domains.
    static VerbalizationSchema kinship();
    static VerbalizationSchema countries();

    SchemaStyle style() const { return style_; }
    bool has(RelationId r) const;
    // Relations in name order.
    const std::vector<RelationId>& relations() const { return relations_; }

    // Renders arbitrary subject/object text (entities, variables, or the
    // planner's placeholder). Throws UnknownRelation.
    std::string render(std::string_view subject, RelationId relation, std::string_view object) const;
    std::string verbalize(const Triple& t) const;

    // Throws UnparsableText / UnknownRelation.
    Triple parse(std::string_view text) const;

    std::string to_json_text() const;

private:
    struct Template {
        RelationId relation;
        std::string prefix;  // before {s}
        std::string middle;  // between {s} and {o}
        std::string suffix;  // after {o}
        std::string raw;
    };

    const Template& find(RelationId r) const;

    SchemaStyle style_ = SchemaStyle::Infix;
    std::vector<Template> templates_;  // sorted by relation name
    std::vector<RelationId> relations_;
};

}  // namespace lmlp
