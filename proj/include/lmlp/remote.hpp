#pragma once
// HTTP backends for real language-model services.
//
// The planner speaks the de-facto completions wire shape
//   POST {prompt, n, temperature, max_tokens, stop[, model, seed]}
//   -> {choices: [{text}, ...]}
// and the translator the embeddings shape
//   POST {input: [text, ...][, model]} -> {data: [{embedding: [...]}, ...]}.
// Transient failures (no response, 429, 5xx) are retried with capped
// exponential backoff.

#include "lmlp/planners.hpp"
#include "lmlp/translators.hpp"

#include <chrono>
#include <string>

namespace lmlp {

struct RemoteConfig {
    std::string url;    // scheme://host[:port]/path
    std::string token;  // sent as a Bearer token when non-empty
    std::string model;  // optional "model" field
    int attempts = 3;
    std::chrono::milliseconds backoff_base{200};
    std::chrono::milliseconds backoff_cap{2000};
    std::chrono::seconds timeout{60};

    // Reads <PREFIX>_URL, <PREFIX>_TOKEN and <PREFIX>_MODEL, e.g.
    // LMLP_PLANNER_URL. Throws InvalidArgument when the URL is unset.
    static RemoteConfig from_env(const std::string& prefix);
};

// POSTs a JSON body, retrying transient failures; returns the parsed
// response. Throws Transport after the last attempt, Protocol on a
// non-retryable status or unparsable body.
nlohmann::json post_json(const RemoteConfig& cfg, const nlohmann::json& body);

class RemotePlanner final : public PlannerBackend {
public:
    explicit RemotePlanner(RemoteConfig cfg) : cfg_(std::move(cfg)) {}
    std::vector<std::string> propose(const PlannerRequest& r) const override;
    std::string name() const override { return "remote"; }

private:
    RemoteConfig cfg_;
};

class RemoteTranslator final : public TranslatorBackend {
public:
    explicit RemoteTranslator(RemoteConfig cfg, std::size_t batch_size = 64)
        : cfg_(std::move(cfg)), batch_size_(batch_size) {}
    EmbeddingVector embed(std::string_view text) const override;
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;
    std::string name() const override { return "remote"; }

private:
    RemoteConfig cfg_;
    std::size_t batch_size_;
};

}  // namespace lmlp
