#include "lmlp/paths.hpp"

#include <unordered_set>

namespace lmlp {

namespace {

void dfs(const KnowledgeBase& kb, EntityId at, EntityId dst, std::size_t max_len,
         std::vector<Triple>& path, std::unordered_set<EntityId>& visited,
         std::vector<std::vector<Triple>>& out) {
    if (path.size() == max_len) return;
    for (std::size_t i : kb.indices_with_subject(at)) {
        const Triple& f = kb.fact(i);
        if (visited.count(f.object) != 0) continue;
        path.push_back(f);
        if (f.object == dst) {
            out.push_back(path);
        } else {
            visited.insert(f.object);
            dfs(kb, f.object, dst, max_len, path, visited, out);
            visited.erase(f.object);
        }
        path.pop_back();
    }
}

}  // namespace

std::vector<std::vector<Triple>> find_ground_paths(const KnowledgeBase& kb, EntityId src,
                                                   EntityId dst, std::size_t max_len) {
    std::vector<std::vector<Triple>> out;
    if (src == dst || max_len == 0) return out;
    std::vector<Triple> path;
    std::unordered_set<EntityId> visited{src};
    dfs(kb, src, dst, max_len, path, visited, out);
    return out;
}

}  // namespace lmlp
