#pragma once
// Interned symbols for entities and relations.
//
// One process-wide table per symbol kind. Handles are dense u32 indices;
// interning is injective on the trimmed text. The tables only grow, so a
// handle stays valid (and its text stable) for the life of the process.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace lmlp {

namespace detail {
std::uint32_t intern_symbol(int table, std::string_view text);
bool find_symbol(int table, std::string_view text, std::uint32_t* out);
const std::string& symbol_text(int table, std::uint32_t id);
}  // namespace detail

std::string_view trim(std::string_view s);

template <class Tag>
class SymbolId {
public:
    SymbolId() = default;

    // Trims surrounding whitespace; throws InvalidArgument on empty text.
    static SymbolId intern(std::string_view text) {
        return SymbolId(detail::intern_symbol(Tag::table, text));
    }

    // Lookup without interning; returns false if the symbol was never seen.
    static bool find(std::string_view text, SymbolId* out) {
        std::uint32_t id = 0;
        if (!detail::find_symbol(Tag::table, trim(text), &id)) return false;
        *out = SymbolId(id);
        return true;
    }

    const std::string& text() const { return detail::symbol_text(Tag::table, id_); }
    std::uint32_t raw() const { return id_; }
    bool valid() const { return id_ != kInvalid; }

    friend bool operator==(SymbolId a, SymbolId b) { return a.id_ == b.id_; }
    // Orders by text, not by handle, so sorted output never depends on
    // interning order.
    friend bool operator<(SymbolId a, SymbolId b) {
        return a.id_ != b.id_ && a.text() < b.text();
    }

private:
    static constexpr std::uint32_t kInvalid = 0xffffffffu;
    explicit SymbolId(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = kInvalid;
};

struct EntityTag { static constexpr int table = 0; };
struct RelationTag { static constexpr int table = 1; };

using EntityId = SymbolId<EntityTag>;
using RelationId = SymbolId<RelationTag>;

}  // namespace lmlp

template <class Tag>
struct std::hash<lmlp::SymbolId<Tag>> {
    std::size_t operator()(lmlp::SymbolId<Tag> s) const noexcept { return s.raw(); }
};
