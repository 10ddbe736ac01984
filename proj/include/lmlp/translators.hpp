#pragma once
// Translator backends (the embedding side of projection).

#include "lmlp/embedding.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmlp {

class FixtureStore;

class TranslatorBackend {
public:
    virtual ~TranslatorBackend() = default;

    // Non-zero vector of a fixed per-backend dimension for non-empty text.
    virtual EmbeddingVector embed(std::string_view text) const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;
    virtual std::string name() const = 0;
};

// One-hot over exact (trimmed) strings: cosine is 1 for identical text and 0
// otherwise. The degenerate backend used by tests and oracle replays.
class ExactStringTranslator final : public TranslatorBackend {
public:
    EmbeddingVector embed(std::string_view text) const override;
    std::string name() const override { return "exact"; }
};

class HashTranslator final : public TranslatorBackend {
public:
    explicit HashTranslator(std::uint64_t dim = kDefaultHashDim);
    EmbeddingVector embed(std::string_view text) const override;
    std::string name() const override { return "hash"; }
    std::uint64_t dim() const { return dim_; }

private:
    std::uint64_t dim_;
};

// Records every inner response into `store` keyed by request hash.
class RecordingTranslator final : public TranslatorBackend {
public:
    RecordingTranslator(const TranslatorBackend& inner, FixtureStore& store)
        : inner_(inner), store_(store) {}
    EmbeddingVector embed(std::string_view text) const override;
    std::string name() const override { return inner_.name(); }

private:
    const TranslatorBackend& inner_;
    FixtureStore& store_;
};

// Serves recorded responses only; throws ReplayMiss on unknown requests.
class ReplayTranslator final : public TranslatorBackend {
public:
    explicit ReplayTranslator(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}
    EmbeddingVector embed(std::string_view text) const override;
    std::string name() const override { return "replay"; }

private:
    std::shared_ptr<const FixtureStore> store_;
};

}  // namespace lmlp
