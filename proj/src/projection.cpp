#include "lmlp/projection.hpp"

#include "lmlp/error.hpp"

#include <algorithm>
#include <vector>

namespace lmlp {

FactEmbeddingCache::FactEmbeddingCache(const KnowledgeBase& kb, const VerbalizationSchema& schema,
                                       const TranslatorBackend& translator)
    : kb_(kb), translator_(translator) {
    renderings_.reserve(kb.size());
    for (const Triple& t : kb.facts()) renderings_.push_back(schema.verbalize(t));
    embeddings_ = translator.embed_batch(renderings_);
    norms_.reserve(embeddings_.size());
    for (const EmbeddingVector& e : embeddings_) norms_.push_back(e.norm());
}

namespace {

struct Scored {
    std::size_t slot;  // position in the slice
    double score;
};

constexpr std::uint64_t kDenseLimit = 1u << 20;

// cosine(x, y) given both norms. Small dimensions scatter x into a dense
// buffer; the sum runs over y's indices in increasing order, which is the
// same order as the sparse merge, so scores are bit-identical.
class CandidateScorer {
public:
    explicit CandidateScorer(const EmbeddingVector& x) : x_(x), norm_(x.norm()) {
        if (x.dim() <= kDenseLimit) {
            dense_.assign(x.dim(), 0.0);
            for (const auto& [i, v] : x.entries()) dense_[i] = v;
        }
    }

    double score(const EmbeddingVector& y, double y_norm) const {
        if (x_.dim() != y.dim()) throw Error(ErrorKind::DimensionMismatch, "cosine over different dimensions");
        if (norm_ == 0.0 || y_norm == 0.0) throw Error(ErrorKind::ZeroVector, "cosine with a zero vector");
        double s = 0.0;
        if (dense_.empty()) {
            s = dot(x_, y);
        } else {
            for (const auto& [i, v] : y.entries()) {
                if (dense_[i] != 0.0) s += dense_[i] * v;
            }
        }
        return std::clamp(s / (norm_ * y_norm), -1.0, 1.0);
    }

private:
    const EmbeddingVector& x_;
    double norm_;
    std::vector<double> dense_;
};

template <class Rendering, class Embedding, class Norm>
std::optional<std::pair<std::size_t, Scored>> best_pair(std::span<const std::string> candidates,
                                                        std::size_t slice_size,
                                                        const TranslatorBackend& translator,
                                                        Rendering rendering, Embedding embedding, Norm norm) {
    if (slice_size == 0) throw Error(ErrorKind::EmptySlice, "no facts to project onto");
    if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "no candidates to project");
    std::optional<std::pair<std::size_t, Scored>> best;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (trim(candidates[c]).empty()) continue;
        const EmbeddingVector x = translator.embed(candidates[c]);
        const CandidateScorer scorer(x);
        std::optional<Scored> local;
        for (std::size_t k = 0; k < slice_size; ++k) {
            const double s = scorer.score(embedding(k), norm(k));
            if (!local || s > local->score ||
                (s == local->score && rendering(k) < rendering(local->slot))) {
                local = Scored{k, s};
            }
        }
        // Strict improvement only: earlier candidates win ties.
        if (!best || local->score > best->second.score) best = std::make_pair(c, *local);
    }
    return best;
}

}  // namespace

std::optional<ProjectionResult> project(std::span<const std::string> candidates,
                                        std::span<const std::size_t> slice,
                                        const FactEmbeddingCache& cache,
                                        std::optional<double> min_score) {
    auto best = best_pair(
        candidates, slice.size(), cache.translator(),
        [&](std::size_t k) -> const std::string& { return cache.rendering(slice[k]); },
        [&](std::size_t k) -> const EmbeddingVector& { return cache.embedding(slice[k]); },
        [&](std::size_t k) { return cache.norm(slice[k]); });
    if (!best) return std::nullopt;
    if (min_score && best->second.score < *min_score) return std::nullopt;
    return ProjectionResult{cache.kb().fact(slice[best->second.slot]), best->second.score, best->first};
}

ProjectionResult project(std::span<const std::string> candidates, std::span<const Triple> slice,
                         const TranslatorBackend& translator, const VerbalizationSchema& schema) {
    std::vector<std::string> renderings;
    for (const Triple& t : slice) renderings.push_back(schema.verbalize(t));
    const std::vector<EmbeddingVector> embeddings = translator.embed_batch(renderings);
    auto best = best_pair(
        candidates, slice.size(), translator,
        [&](std::size_t k) -> const std::string& { return renderings[k]; },
        [&](std::size_t k) -> const EmbeddingVector& { return embeddings[k]; },
        [&](std::size_t k) { return embeddings[k].norm(); });
    if (!best) throw Error(ErrorKind::InvalidArgument, "no embeddable candidate");
    return {slice[best->second.slot], best->second.score, best->first};
}

}  // namespace lmlp
