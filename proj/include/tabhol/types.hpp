#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tabhol {

struct NameId {
    std::uint32_t id = 0;
    friend constexpr auto operator<=>(NameId, NameId) = default;
};

struct TyId {
    std::uint32_t id = 0;
    friend constexpr auto operator<=>(TyId, TyId) = default;
};

} // namespace tabhol

template <> struct std::hash<tabhol::NameId> {
    std::size_t operator()(tabhol::NameId n) const noexcept { return n.id; }
};
template <> struct std::hash<tabhol::TyId> {
    std::size_t operator()(tabhol::TyId t) const noexcept { return t.id; }
};

namespace tabhol {

/// Injective string interning.
class NameTable {
public:
    NameId intern(std::string_view s);
    const std::string& str(NameId n) const { return strings_.at(n.id); }
    bool contains(std::string_view s) const;
    std::size_t size() const { return strings_.size(); }

private:
    std::vector<std::string> strings_;
    std::unordered_map<std::string, NameId> index_;
};

enum class TyKind : std::uint8_t { Prop, Base, Arrow };

struct TyShape {
    TyKind kind = TyKind::Prop;
    std::uint32_t a = 0; // Base: name id, Arrow: domain
    std::uint32_t b = 0; // Arrow: codomain
    friend constexpr bool operator==(const TyShape&, const TyShape&) = default;
};

/// Simple types, interned so structural equality is id equality.
/// Prop (type o) is always TyId{0}.
class TypeTable {
public:
    TypeTable();

    TyId intern(TyShape shape);
    TyId prop() const { return TyId{0}; }
    TyId base(NameId sort) { return intern({TyKind::Base, sort.id, 0}); }
    TyId arrow(TyId dom, TyId cod) { return intern({TyKind::Arrow, dom.id, cod.id}); }
    /// Curried arrow: args[0] > args[1] > ... > result.
    TyId arrows(const std::vector<TyId>& args, TyId result);

    const TyShape& shape(TyId t) const { return shapes_.at(t.id); }
    bool is_prop(TyId t) const { return shape(t).kind == TyKind::Prop; }
    bool is_sort(TyId t) const { return shape(t).kind == TyKind::Base; }
    bool is_arrow(TyId t) const { return shape(t).kind == TyKind::Arrow; }
    TyId dom(TyId t) const { return TyId{shape(t).a}; }
    TyId cod(TyId t) const { return TyId{shape(t).b}; }
    NameId sort_name(TyId t) const { return NameId{shape(t).a}; }
    std::size_t size() const { return shapes_.size(); }

private:
    struct ShapeHash {
        std::size_t operator()(const TyShape& s) const noexcept {
            return (std::size_t(s.kind) * 0x9E3779B97F4A7C15ULL) ^ (std::size_t(s.a) << 21) ^ s.b;
        }
    };
    std::vector<TyShape> shapes_;
    std::unordered_map<TyShape, TyId, ShapeHash> index_;
};

} // namespace tabhol
