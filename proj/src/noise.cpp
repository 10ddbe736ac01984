#include "lmlp/noise.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <algorithm>
#include <cmath>

namespace lmlp {

std::size_t NoiseConfig::count() const {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "noise rate must lie in [0, 1]");
    }
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(base)));
}

KnowledgeBase inject_noise(const KnowledgeBase& kb, const NoiseConfig& cfg, const TripleSet& protected_triples) {
    const std::size_t wanted = cfg.count();
    KnowledgeBase out = kb;
    if (wanted == 0) return out;

    const auto& ents = kb.entities();
    const auto& rels = kb.relations();
    if (ents.size() < 2 || rels.empty()) {
        throw Error(ErrorKind::VocabTooSmall, "noise needs at least two entities and one relation");
    }
    const std::size_t e = ents.size(), r = rels.size();
    const std::size_t space = e * (e - 1) * r;
    auto decode = [&](std::size_t code) {
        const std::size_t s = code / ((e - 1) * r);
        std::size_t rest = code % ((e - 1) * r);
        const std::size_t p = rest / (e - 1);
        std::size_t o = rest % (e - 1);
        if (o >= s) ++o;  // skip the self-loop slot
        return Triple{ents[s], rels[p], ents[o]};
    };
    auto usable = [&](const Triple& t) { return !out.contains(t) && !protected_triples.count(t); };

    std::size_t blocked = kb.size();
    for (const Triple& t : protected_triples) {
        const bool in_space = t.subject != t.object && kb.has_entity(t.subject) && kb.has_entity(t.object) &&
                              std::find(rels.begin(), rels.end(), t.relation) != rels.end();
        if (in_space && !kb.contains(t)) ++blocked;
    }
    if (space < blocked + wanted) {
        throw Error(ErrorKind::VocabTooSmall, "only " + std::to_string(space > blocked ? space - blocked : 0) +
                                                  " distinct noise facts available, " + std::to_string(wanted) +
                                                  " requested");
    }

    Rng rng(cfg.seed);
    std::size_t added = 0;
    if (wanted * 2 <= space - blocked) {
        // Sparse regime: rejection sampling terminates quickly.
        while (added < wanted) {
            const Triple t = decode(static_cast<std::size_t>(rng.uniform(space)));
            if (usable(t)) {
                out.add(t);
                ++added;
            }
        }
    } else {
        std::vector<std::size_t> codes;
        for (std::size_t c = 0; c < space; ++c) {
            if (usable(decode(c))) codes.push_back(c);
        }
        rng.shuffle(codes);
        for (std::size_t i = 0; i < wanted; ++i) out.add(decode(codes[i]));
        added = wanted;
    }
    return out;
}

}  // namespace lmlp
