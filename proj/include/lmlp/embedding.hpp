#pragma once
// Sparse real vectors for translator embeddings.
//
// Dense remote embeddings and hashed n-gram embeddings share one type; the
// exact-string backend's one-hot vectors live in a 2^64-wide space, which is
// why storage is sparse.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace lmlp {

class EmbeddingVector {
public:
    using Entry = std::pair<std::uint64_t, double>;

    EmbeddingVector() = default;

    // Sorts, merges duplicate indices and drops zeros. Throws InvalidArgument
    // on non-finite values or indices >= dim.
    static EmbeddingVector from_sparse(std::uint64_t dim, std::vector<Entry> entries);
    static EmbeddingVector from_dense(std::span<const double> values);

    std::uint64_t dim() const { return dim_; }
    const std::vector<Entry>& entries() const { return entries_; }
    double component(std::uint64_t index) const;
    double norm() const;
    std::vector<double> dense() const;  // only sensible for small dims

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::uint64_t dim_ = 0;
    std::vector<Entry> entries_;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

// dot(a,b)/(|a||b|), clamped to [-1, 1]. Throws DimensionMismatch or
// ZeroVector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Signed feature hashing of lowercased character 3-grams, L2-normalised.
// Input is trimmed first; text shorter than three bytes is one gram.
// Throws EmptyText, or InvalidArgument when dim < 64.
EmbeddingVector hash_embed(std::string_view text, std::uint64_t dim);

constexpr std::uint64_t kHashEmbedSeed = 0x4c4d4c5068617368ULL;  // "LMLPhash"
constexpr std::uint64_t kDefaultHashDim = 512;

}  // namespace lmlp
