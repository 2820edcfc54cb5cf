#include "tabhol/types.hpp"

#include <stdexcept>

namespace tabhol {

NameId NameTable::intern(std::string_view s) {
    if (auto it = index_.find(std::string(s)); it != index_.end()) return it->second;
    NameId id{static_cast<std::uint32_t>(strings_.size())};
    strings_.emplace_back(s);
    index_.emplace(strings_.back(), id);
    return id;
}

bool NameTable::contains(std::string_view s) const { return index_.contains(std::string(s)); }

TypeTable::TypeTable() { intern({TyKind::Prop, 0, 0}); }

TyId TypeTable::intern(TyShape shape) {
    if (shape.kind == TyKind::Prop) shape.a = shape.b = 0;
    if (shape.kind == TyKind::Base) shape.b = 0;
    if (shape.kind == TyKind::Arrow && (shape.a >= shapes_.size() || shape.b >= shapes_.size()))
        throw std::out_of_range("arrow type over uninterned component");
    if (auto it = index_.find(shape); it != index_.end()) return it->second;
    TyId id{static_cast<std::uint32_t>(shapes_.size())};
    shapes_.push_back(shape);
    index_.emplace(shape, id);
    return id;
}

TyId TypeTable::arrows(const std::vector<TyId>& args, TyId result) {
    TyId t = result;
    for (auto it = args.rbegin(); it != args.rend(); ++it) t = arrow(*it, t);
    return t;
}

} // namespace tabhol
