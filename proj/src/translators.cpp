#include "lmlp/translators.hpp"

#include "lmlp/error.hpp"
#include "lmlp/fixtures.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/symbols.hpp"

#include <limits>

namespace lmlp {

std::vector<EmbeddingVector> TranslatorBackend::embed_batch(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(embed(t));
    return out;
}

EmbeddingVector ExactStringTranslator::embed(std::string_view raw) const {
    const std::string_view text = trim(raw);
    if (text.empty()) throw Error(ErrorKind::EmptyText, "cannot embed empty text");
    constexpr std::uint64_t dim = std::numeric_limits<std::uint64_t>::max();
    return EmbeddingVector::from_sparse(dim, {{fnv1a64(text) % dim, 1.0}});
}

HashTranslator::HashTranslator(std::uint64_t dim) : dim_(dim) {
    if (dim < 64) throw Error(ErrorKind::InvalidArgument, "hash translator needs dim >= 64");
}

EmbeddingVector HashTranslator::embed(std::string_view text) const { return hash_embed(text, dim_); }

namespace {

nlohmann::json vector_to_json(const EmbeddingVector& v) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [i, x] : v.entries()) entries.push_back({i, x});
    return {{"dim", v.dim()}, {"entries", entries}};
}

EmbeddingVector vector_from_json(const nlohmann::json& j) {
    try {
        std::vector<EmbeddingVector::Entry> entries;
        for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<double>());
        return EmbeddingVector::from_sparse(j.at("dim").get<std::uint64_t>(), std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Protocol, std::string("malformed recorded embedding: ") + e.what());
    }
}

std::string embed_key(std::string_view text) {
    return request_hash(nlohmann::json{{"input", nlohmann::json::array({std::string(text)})}});
}

}  // namespace

EmbeddingVector RecordingTranslator::embed(std::string_view text) const {
    EmbeddingVector v = inner_.embed(text);
    store_.put(embed_key(text), vector_to_json(v));
    return v;
}

EmbeddingVector ReplayTranslator::embed(std::string_view text) const {
    auto hit = store_->lookup(embed_key(text));
    if (!hit) throw Error(ErrorKind::ReplayMiss, "no recorded embedding for \"" + std::string(text) + "\"");
    return vector_from_json(*hit);
}

}  // namespace lmlp
