#pragma once
// Projection of free-form candidate sentences onto KB facts.

#include "lmlp/knowledge_base.hpp"
#include "lmlp/schema.hpp"
#include "lmlp/translators.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lmlp {

struct ProjectionResult {
    Triple fact;
    double score = 0.0;
    std::size_t candidate_index = 0;
};

// Verbalized facts and their embeddings, computed once per KB. Read-only
// after construction.
class FactEmbeddingCache {
public:
    FactEmbeddingCache(const KnowledgeBase& kb, const VerbalizationSchema& schema,
                       const TranslatorBackend& translator);

    const KnowledgeBase& kb() const { return kb_; }
    const TranslatorBackend& translator() const { return translator_; }
    const std::string& rendering(std::size_t fact_index) const { return renderings_[fact_index]; }
    const EmbeddingVector& embedding(std::size_t fact_index) const { return embeddings_[fact_index]; }
    double norm(std::size_t fact_index) const { return norms_[fact_index]; }

private:
    const KnowledgeBase& kb_;
    const TranslatorBackend& translator_;
    std::vector<std::string> renderings_;
    std::vector<EmbeddingVector> embeddings_;
    std::vector<double> norms_;
};

// For each candidate, its best fact in the slice; the result is the pair
// with the highest cosine overall. Ties go to the lower candidate index,
// then the lexicographically smaller rendering. Returns nullopt only when
// the best score is below min_score or no candidate is embeddable.
// Throws EmptySlice / InvalidArgument (no candidates).
std::optional<ProjectionResult> project(std::span<const std::string> candidates,
                                        std::span<const std::size_t> slice,
                                        const FactEmbeddingCache& cache,
                                        std::optional<double> min_score = std::nullopt);

// Uncached form over an explicit fact list.
ProjectionResult project(std::span<const std::string> candidates, std::span<const Triple> slice,
                         const TranslatorBackend& translator, const VerbalizationSchema& schema);

}  // namespace lmlp
