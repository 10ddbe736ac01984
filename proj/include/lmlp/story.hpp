#pragma once
// Natural-language stories for kinship instances.
//
// One sentence per fact, picked from a small template inventory, in seeded
// order. Stories are an export format only; the prover never reads them.

#include "lmlp/family.hpp"
#include "lmlp/schema.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lmlp {

// Genders implied by the facts themselves (e.g. the object of `sister` is
// female, the subject of `husband` is its object's wife).
std::map<EntityId, Gender> infer_genders(const std::vector<Triple>& facts);

// Sentences joined by single spaces; empty facts give an empty string.
// Throws UnknownRelation for relations outside the schema.
std::string render_story(const std::vector<Triple>& facts, const VerbalizationSchema& schema, std::uint64_t seed);

// Recovers the facts from a story produced by render_story, in story order.
// Throws UnparsableText on a sentence no template matches.
std::vector<Triple> parse_story(std::string_view story, const VerbalizationSchema& schema);

}  // namespace lmlp
