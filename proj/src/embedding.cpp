#include "lmlp/embedding.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace lmlp {

EmbeddingVector EmbeddingVector::from_sparse(std::uint64_t dim, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    EmbeddingVector v;
    v.dim_ = dim;
    for (const auto& [i, x] : entries) {
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite embedding value");
        if (i >= dim) throw Error(ErrorKind::InvalidArgument, "embedding index out of range");
        if (!v.entries_.empty() && v.entries_.back().first == i) {
            v.entries_.back().second += x;
        } else {
            v.entries_.emplace_back(i, x);
        }
    }
    std::erase_if(v.entries_, [](const Entry& e) { return e.second == 0.0; });
    return v;
}

EmbeddingVector EmbeddingVector::from_dense(std::span<const double> values) {
    std::vector<Entry> entries;
    entries.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) entries.emplace_back(i, values[i]);
    return from_sparse(values.size(), std::move(entries));
}

double EmbeddingVector::component(std::uint64_t index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, std::uint64_t i) { return e.first < i; });
    return it != entries_.end() && it->first == index ? it->second : 0.0;
}

double EmbeddingVector::norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.second * e.second;
    return std::sqrt(s);
}

std::vector<double> EmbeddingVector::dense() const {
    std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
    for (const auto& [i, x] : entries_) out[static_cast<std::size_t>(i)] = x;
    return out;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    const auto& x = a.entries();
    const auto& y = b.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].first < y[j].first) {
            ++i;
        } else if (y[j].first < x[i].first) {
            ++j;
        } else {
            s += x[i++].second * y[j++].second;
        }
    }
    return s;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "cosine over different dimensions");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::ZeroVector, "cosine with a zero vector");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

EmbeddingVector hash_embed(std::string_view raw, std::uint64_t dim) {
    if (dim < 64) throw Error(ErrorKind::InvalidArgument, "hash_embed needs dim >= 64");
    const std::string_view trimmed = trim(raw);
    if (trimmed.empty()) throw Error(ErrorKind::EmptyText, "cannot embed empty text");
    std::string text(trimmed);
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::map<std::uint64_t, double> signed_counts;
    std::map<std::uint64_t, double> counts;
    auto add = [&](std::string_view gram) {
        const std::uint64_t h = fnv1a64(gram, kHashEmbedSeed);
        const std::uint64_t bucket = h % dim;
        signed_counts[bucket] += (h >> 63) != 0 ? -1.0 : 1.0;
        counts[bucket] += 1.0;
    };
    if (text.size() < 3) {
        add(text);
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i) add(std::string_view(text).substr(i, 3));
    }

    auto build = [&](const std::map<std::uint64_t, double>& m) {
        std::vector<EmbeddingVector::Entry> entries(m.begin(), m.end());
        double n = 0.0;
        for (const auto& e : entries) n += e.second * e.second;
        n = std::sqrt(n);
        if (n == 0.0) return EmbeddingVector::from_sparse(dim, {});
        for (auto& e : entries) e.second /= n;
        return EmbeddingVector::from_sparse(dim, std::move(entries));
    };
    // Signs can cancel to an all-zero vector; fall back to unsigned counts.
    EmbeddingVector v = build(signed_counts);
    if (v.entries().empty()) v = build(counts);
    return v;
}

}  // namespace lmlp
