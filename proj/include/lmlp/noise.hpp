#pragma once
// Random distractor facts.

#include "lmlp/knowledge_base.hpp"

#include <cstdint>
#include <unordered_set>

namespace lmlp {

struct NoiseConfig {
    double rate = 0.0;  // in [0, 1]
    std::size_t base = 5000;
    std::uint64_t seed = 0;

    // round(rate * base). Throws InvalidArgument for a rate outside [0, 1].
    std::size_t count() const;
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

// Adds exactly cfg.count() facts drawn uniformly from
// entities x relations x entities of kb's vocabulary, skipping self-loops,
// existing facts and protected triples. Original facts keep their order and
// come first. Throws VocabTooSmall when not enough distinct facts exist.
KnowledgeBase inject_noise(const KnowledgeBase& kb, const NoiseConfig& cfg, const TripleSet& protected_triples);

}  // namespace lmlp
