#include "lmlp/prompt.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/log.hpp"

#include <algorithm>
#include <numeric>

namespace lmlp {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::RelationMatch: return "relation-match";
        case Strategy::TaskSimilarity: return "task-similarity";
        case Strategy::EntityMatch: return "entity-match";
        case Strategy::Random: return "random";
        case Strategy::None: return "none";
        case Strategy::RuleOnly: return "rule-only";
    }
    return "?";
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Lmlp: return "lmlp";
        case Variant::LmlpReverse: return "lmlp-reverse";
        case Variant::OnlyRule: return "only-rule";
        case Variant::NoPrompt: return "no-prompt";
    }
    return "?";
}

std::string to_string(SuccessCriterion c) { return c == SuccessCriterion::Reach ? "reach" : "verified"; }

Strategy parse_strategy(std::string_view s) {
    for (Strategy v : {Strategy::RelationMatch, Strategy::TaskSimilarity, Strategy::EntityMatch,
                       Strategy::Random, Strategy::None, Strategy::RuleOnly}) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
    for (Variant v : {Variant::Lmlp, Variant::LmlpReverse, Variant::OnlyRule, Variant::NoPrompt}) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown variant '" + std::string(s) + "'");
}

SuccessCriterion parse_success(std::string_view s) {
    if (s == "reach") return SuccessCriterion::Reach;
    if (s == "verified") return SuccessCriterion::Verified;
    throw Error(ErrorKind::InvalidArgument, "unknown success criterion '" + std::string(s) + "'");
}

void validate(const PromptSpec& spec) {
    if (spec.n_examples == 0) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    if (spec.ensemble == 0) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
    if (spec.candidates == 0) throw Error(ErrorKind::InvalidArgument, "candidate count must be >= 1");
}

ExampleRetriever::ExampleRetriever(const RuleLibrary& lib, const VerbalizationSchema& schema,
                                   const TranslatorBackend* translator)
    : lib_(lib), schema_(schema), translator_(translator) {
    if (translator_ != nullptr) {
        std::vector<std::string> tasks;
        tasks.reserve(lib.size());
        for (const auto& e : lib.entries()) tasks.push_back(schema.verbalize(e.example.task));
        task_embeddings_ = translator_->embed_batch(tasks);
    }
}

std::vector<std::size_t> ExampleRetriever::ordering(const Triple& query, const PromptSpec& spec) const {
    if (spec.variant == Variant::NoPrompt || spec.strategy == Strategy::None || lib_.empty()) return {};
    const std::uint64_t seed = derive_seed(spec.seed, fnv1a64(to_tsv(query)));

    std::vector<std::size_t> all(lib_.size());
    std::iota(all.begin(), all.end(), 0);
    auto shuffled = [&](std::vector<std::size_t> pool) {
        Rng rng(seed);
        rng.shuffle(pool);
        return pool;
    };

    switch (spec.strategy) {
        case Strategy::RelationMatch:
        case Strategy::RuleOnly: {
            const auto& bucket = lib_.with_relation(query.relation);
            if (bucket.empty()) {
                log_warn("no example with task relation '" + query.relation.text() +
                         "'; falling back to random retrieval");
                return shuffled(all);
            }
            return shuffled(bucket);
        }
        case Strategy::EntityMatch: {
            std::vector<std::size_t> bucket;
            for (std::size_t i = 0; i < lib_.size(); ++i) {
                if (lib_.at(i).example.task.subject == query.subject) bucket.push_back(i);
            }
            if (bucket.empty()) {
                log_warn("no example with task subject '" + query.subject.text() +
                         "'; falling back to random retrieval");
                return shuffled(all);
            }
            return shuffled(bucket);
        }
        case Strategy::Random:
            return shuffled(all);
        case Strategy::TaskSimilarity: {
            if (translator_ == nullptr) {
                throw Error(ErrorKind::InvalidArgument, "task-similarity retrieval needs a translator");
            }
            const EmbeddingVector q = translator_->embed(schema_.verbalize(query));
            std::vector<double> score(lib_.size());
            for (std::size_t i = 0; i < lib_.size(); ++i) score[i] = cosine(q, task_embeddings_[i]);
            std::stable_sort(all.begin(), all.end(),
                             [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
            return all;
        }
        case Strategy::None:
            break;
    }
    return {};
}

std::vector<std::size_t> ExampleRetriever::retrieve(const Triple& query, const PromptSpec& spec,
                                                    std::size_t slot) const {
    const std::vector<std::size_t> order = ordering(query, spec);
    if (order.empty()) return {};
    const std::size_t n = std::min(spec.n_examples, order.size());
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(order[(slot * n + j) % order.size()]);
    return out;
}

std::vector<std::size_t> retrieve_examples(const Triple& query, const RuleLibrary& lib,
                                           const PromptSpec& spec, const VerbalizationSchema& schema,
                                           const TranslatorBackend* translator, std::size_t slot) {
    return ExampleRetriever(lib, schema, translator).retrieve(query, spec, slot);
}

std::string step_line(std::size_t index, const Triple& fact, const VerbalizationSchema& schema) {
    return "Step " + std::to_string(index) + ": " + schema.verbalize(fact) + "\n";
}

std::string render_block(const Triple& task, const std::vector<Triple>& steps,
                         const VerbalizationSchema& schema) {
    std::string out = "Task: " + schema.verbalize(task) + "\n";
    for (std::size_t i = 0; i < steps.size(); ++i) out += step_line(i + 1, steps[i], schema);
    return out;
}

std::string render_block(const HornRule& rule, const VerbalizationSchema& schema) {
    auto name = [](const Term& t) {
        if (const auto* v = std::get_if<Variable>(&t)) return v->name;
        return std::get<EntityId>(t).text();
    };
    auto line = [&](const Atom& a) { return schema.render(name(a.args[0]), a.relation, name(a.args[1])); };
    std::string out = "Task: " + line(rule.head) + "\n";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        out += "Step " + std::to_string(i + 1) + ": " + line(rule.body[i]) + "\n";
    }
    return out;
}

std::string build_prompt(const RuleLibrary& lib, const std::vector<std::size_t>& examples,
                         const Triple& query, Variant variant, const VerbalizationSchema& schema) {
    std::string out;
    if (variant != Variant::NoPrompt) {
        for (std::size_t i : examples) {
            const auto& e = lib.at(i);
            const std::string abstract = render_block(e.abstract, schema);
            const std::string grounded = render_block(e.example.task, e.example.steps, schema);
            switch (variant) {
                case Variant::Lmlp: out += abstract + grounded; break;
                case Variant::LmlpReverse: out += grounded + abstract; break;
                case Variant::OnlyRule: out += abstract; break;
                case Variant::NoPrompt: break;
            }
            out += "\n";
        }
    }
    out += "Task: " + schema.verbalize(query) + "\n";
    return out;
}

}  // namespace lmlp
