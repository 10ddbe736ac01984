#pragma once

#include "lmlp/knowledge_base.hpp"

#include <vector>

namespace lmlp {

// Every simple fact chain from src to dst with 1..max_len steps, in DFS
// order over the subject index. src == dst yields nothing.
std::vector<std::vector<Triple>> find_ground_paths(const KnowledgeBase& kb, EntityId src,
                                                   EntityId dst, std::size_t max_len);

}  // namespace lmlp
