#include "lmlp/symbols.hpp"

#include "lmlp/data_files.hpp"
#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <cstdlib>
#include <limits>
#include <deque>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace lmlp {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnparsableText: return "UnparsableText";
        case ErrorKind::UnknownRelation: return "UnknownRelation";
        case ErrorKind::ChainBroken: return "ChainBroken";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::EmptyText: return "EmptyText";
        case ErrorKind::EmptySlice: return "EmptySlice";
        case ErrorKind::RuleExhausted: return "RuleExhausted";
        case ErrorKind::Transport: return "Transport";
        case ErrorKind::Protocol: return "Protocol";
        case ErrorKind::ReplayMiss: return "ReplayMiss";
        case ErrorKind::NoExampleForRelation: return "NoExampleForRelation";
        case ErrorKind::InfeasibleSize: return "InfeasibleSize";
        case ErrorKind::CompositionUndefined: return "CompositionUndefined";
        case ErrorKind::VocabTooSmall: return "VocabTooSmall";
        case ErrorKind::UnprovableTestQuery: return "UnprovableTestQuery";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::uint64_t Rng::uniform(std::uint64_t n) {
    // Rejection sampling keeps the reduction unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    Rng rng(seed);
    rng.shuffle(p);
    return p;
}

std::string data_path(const std::string& name) {
    if (const char* dir = std::getenv("LMLP_DATA_DIR"); dir != nullptr && *dir != '\0') {
        return std::string(dir) + "/" + name;
    }
    return std::string(LMLP_DATA_DIR) + "/" + name;
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

namespace detail {
namespace {

struct SymbolTable {
    std::shared_mutex mutex;
    std::unordered_map<std::string_view, std::uint32_t> index;
    std::deque<std::string> texts;  // deque: element addresses never move
};

SymbolTable& table(int which) {
    static SymbolTable tables[2];
    return tables[which];
}

}  // namespace

std::uint32_t intern_symbol(int which, std::string_view raw) {
    std::string_view text = trim(raw);
    if (text.empty()) throw Error(ErrorKind::InvalidArgument, "empty symbol");
    SymbolTable& t = table(which);
    {
        std::shared_lock lock(t.mutex);
        if (auto it = t.index.find(text); it != t.index.end()) return it->second;
    }
    std::unique_lock lock(t.mutex);
    if (auto it = t.index.find(text); it != t.index.end()) return it->second;
    t.texts.emplace_back(text);
    auto id = static_cast<std::uint32_t>(t.texts.size() - 1);
    t.index.emplace(t.texts.back(), id);
    return id;
}

bool find_symbol(int which, std::string_view text, std::uint32_t* out) {
    SymbolTable& t = table(which);
    std::shared_lock lock(t.mutex);
    auto it = t.index.find(text);
    if (it == t.index.end()) return false;
    *out = it->second;
    return true;
}

const std::string& symbol_text(int which, std::uint32_t id) {
    SymbolTable& t = table(which);
    std::shared_lock lock(t.mutex);
    if (id >= t.texts.size()) throw Error(ErrorKind::InvalidArgument, "invalid symbol handle");
    return t.texts[id];
}

}  // namespace detail
}  // namespace lmlp
