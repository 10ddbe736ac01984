#include "lmlp/story.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <regex>

namespace lmlp {

namespace {

// {s} subject, {o} object, {p} subject's possessive pronoun, {r} relation.
const std::map<std::string, std::vector<std::string>>& template_inventory() {
    static const std::map<std::string, std::vector<std::string>> inv = {
        {"father", {"{s} went fishing with {p} father, {o}.", "{s} visited {p} father {o} last weekend."}},
        {"mother", {"{s} baked cookies with {p} mother {o}.", "{s} called {p} mother {o} on Sunday."}},
        {"son", {"{s} took {p} son {o} to the park.", "{s} bought {p} son {o} a new bike."}},
        {"daughter", {"{s} told {p} daughter {o} to wash up.", "{s} drove {p} daughter {o} to school."}},
        {"brother",
         {"{s} called {p} brother, {o}, to see how he was doing.", "{s} played chess with {p} brother {o}."}},
        {"sister",
         {"{s} went shoe shopping with {p} sister {o}.",
          "{s} and {p} sister {o} have been best friends since childhood."}},
        {"husband", {"{s} and {p} husband {o} went to the movies.", "{s} made dinner for {p} husband {o}."}},
        {"wife", {"{s} and {p} wife {o} went to the movies.", "{s} bought flowers for {p} wife {o}."}},
    };
    return inv;
}

const std::string kGenericTemplate = "{s} spent the afternoon with {p} {r} {o}.";

std::vector<std::string> templates_for(RelationId r) {
    const auto& inv = template_inventory();
    if (auto it = inv.find(r.text()); it != inv.end()) return it->second;
    return {kGenericTemplate};
}

std::string substitute(std::string t, const std::string& key, const std::string& value) {
    for (std::size_t at = t.find(key); at != std::string::npos; at = t.find(key, at + value.size())) {
        t.replace(at, key.size(), value);
    }
    return t;
}

std::string regex_escape(const std::string& s) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(s, special, R"(\$&)");
}

struct SentencePattern {
    RelationId relation;
    std::regex re;
};

std::vector<SentencePattern> sentence_patterns(const VerbalizationSchema& schema) {
    std::vector<SentencePattern> out;
    for (RelationId r : schema.relations()) {
        for (std::string t : templates_for(r)) {
            t = substitute(t, "{r}", r.text());
            std::string re = regex_escape(t);
            re = substitute(re, "\\{s\\}", "(.+?)");
            re = substitute(re, "\\{o\\}", "(.+?)");
            re = substitute(re, "\\{p\\}", "(?:his|her|their)");
            out.push_back({r, std::regex(re)});
        }
    }
    return out;
}

}  // namespace

std::map<EntityId, Gender> infer_genders(const std::vector<Triple>& facts) {
    static const std::map<std::string, Gender> object_gender = {
        {"father", Gender::Male},     {"son", Gender::Male},          {"brother", Gender::Male},
        {"husband", Gender::Male},    {"grandfather", Gender::Male},  {"grandson", Gender::Male},
        {"uncle", Gender::Male},      {"nephew", Gender::Male},       {"father-in-law", Gender::Male},
        {"son-in-law", Gender::Male}, {"brother-in-law", Gender::Male},
        {"mother", Gender::Female},   {"daughter", Gender::Female},   {"sister", Gender::Female},
        {"wife", Gender::Female},     {"grandmother", Gender::Female}, {"granddaughter", Gender::Female},
        {"aunt", Gender::Female},     {"niece", Gender::Female},      {"mother-in-law", Gender::Female},
        {"daughter-in-law", Gender::Female}, {"sister-in-law", Gender::Female},
    };
    std::map<EntityId, Gender> out;
    for (const Triple& t : facts) {
        auto it = object_gender.find(t.relation.text());
        if (it == object_gender.end()) continue;
        out.emplace(t.object, it->second);
        if (t.relation.text() == "husband") out.emplace(t.subject, Gender::Female);
        if (t.relation.text() == "wife") out.emplace(t.subject, Gender::Male);
    }
    return out;
}

std::string render_story(const std::vector<Triple>& facts, const VerbalizationSchema& schema, std::uint64_t seed) {
    if (facts.empty()) return "";
    const auto genders = infer_genders(facts);
    Rng rng(seed);
    std::vector<std::string> sentences;
    for (const Triple& t : facts) {
        if (!schema.has(t.relation)) {
            throw Error(ErrorKind::UnknownRelation, "relation not in schema: " + t.relation.text());
        }
        const auto options = templates_for(t.relation);
        std::string s = options[rng.uniform(options.size())];
        std::string pronoun = "their";
        if (auto g = genders.find(t.subject); g != genders.end()) {
            pronoun = g->second == Gender::Male ? "his" : "her";
        }
        s = substitute(s, "{p}", pronoun);
        s = substitute(s, "{r}", t.relation.text());
        s = substitute(s, "{s}", t.subject.text());
        s = substitute(s, "{o}", t.object.text());
        sentences.push_back(std::move(s));
    }
    rng.shuffle(sentences);
    std::string out;
    for (const std::string& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::vector<Triple> parse_story(std::string_view story, const VerbalizationSchema& schema) {
    const auto patterns = sentence_patterns(schema);
    std::vector<Triple> out;
    std::size_t start = 0;
    while (start < story.size()) {
        std::size_t end = story.find('.', start);
        if (end == std::string_view::npos) end = story.size() - 1;
        const std::string sentence(trim(story.substr(start, end - start + 1)));
        start = end + 1;
        if (sentence.empty()) continue;
        bool matched = false;
        for (const SentencePattern& p : patterns) {
            std::smatch m;
            if (std::regex_match(sentence, m, p.re)) {
                out.push_back(Triple{EntityId::intern(m[1].str()), p.relation, EntityId::intern(m[2].str())});
                matched = true;
                break;
            }
        }
        if (!matched) throw Error(ErrorKind::UnparsableText, "no story template matches: " + sentence);
    }
    return out;
}

}  // namespace lmlp
