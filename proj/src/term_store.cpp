#include "tabhol/term_store.hpp"

#include <bit>
#include <string>

namespace tabhol {

bool DbMask::any_from(int k) const {
    if (k <= 0) return !empty();
    if (k > kMaxDbIndex) return false;
    std::size_t w = static_cast<std::size_t>(k) >> 6;
    if ((words_[w] >> (k & 63)) != 0) return true;
    for (++w; w < 4; ++w)
        if (words_[w] != 0) return true;
    return false;
}

int DbMask::max_index() const {
    for (int w = 3; w >= 0; --w)
        if (words_[w] != 0) return w * 64 + 63 - std::countl_zero(words_[w]);
    return -1;
}

DbMask DbMask::unbind() const {
    DbMask r;
    for (std::size_t w = 0; w < 4; ++w) {
        r.words_[w] = words_[w] >> 1;
        if (w + 1 < 4) r.words_[w] |= words_[w + 1] << 63;
    }
    return r;
}

std::vector<int> DbMask::indices() const {
    std::vector<int> out;
    for (int i = 0; i <= kMaxDbIndex; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

std::size_t TermStore::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.tag) * 0x9E3779B97F4A7C15ULL;
    h ^= (std::uint64_t{k.num} << 32 | k.left) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= (std::uint64_t{k.right} << 32 | k.ty) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
}

std::size_t TermStore::OpKeyHash::operator()(const OpKey& k) const noexcept {
    std::uint64_t h = (std::uint64_t{k.t} << 32) ^ static_cast<std::uint32_t>(k.k);
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= std::uint64_t{k.arg} * 0x94D049BB133111EBULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
}

TermStore::TermStore() { bot_ = intern(Tag::Bot, 0, kNoChild, kNoChild, types_.prop()); }

TermId TermStore::intern(Tag tag, std::uint32_t num, std::uint32_t left, std::uint32_t right, TyId ty) {
    Key key{tag, num, left, right, ty.id};
    if (auto it = index_.find(key); it != index_.end()) return it->second;

    DbMask mask;
    bool choice = tag == Tag::Choice;
    switch (tag) {
    case Tag::DB: mask = DbMask::single(static_cast<int>(num)); break;
    case Tag::Lam:
    case Tag::All:
        mask = nodes_[left].fdbv.unbind();
        choice = nodes_[left].has_choice;
        break;
    case Tag::Ap:
    case Tag::Imp:
    case Tag::Eq:
        mask = nodes_[left].fdbv | nodes_[right].fdbv;
        choice = nodes_[left].has_choice || nodes_[right].has_choice;
        break;
    default: break;
    }
    TermId id{static_cast<std::uint32_t>(nodes_.size())};
    nodes_.push_back(TermNode{tag, num, left, right, ty, mask, choice});
    index_.emplace(key, id);
    return id;
}

void TermStore::expect_prop(TermId t, const char* what) const {
    if (!types_.is_prop(type_of(t))) throw TypeMismatch(std::string(what) + ": operand is not a proposition");
}

TermId TermStore::mk_db(int index, TyId ty) {
    if (index < 0) throw std::out_of_range("negative de Bruijn index");
    if (index > kMaxDbIndex)
        throw DepthLimitExceeded("de Bruijn index " + std::to_string(index) + " exceeds 255");
    return intern(Tag::DB, static_cast<std::uint32_t>(index), kNoChild, kNoChild, ty);
}

TermId TermStore::mk_const(NameId name, TyId ty) {
    auto [it, fresh] = const_types_.try_emplace(name, ty);
    if (!fresh && it->second != ty)
        throw TypeMismatch("constant " + names_.str(name) + " used at two different types");
    return intern(Tag::Const, name.id, kNoChild, kNoChild, ty);
}

TermId TermStore::mk_imp(TermId s, TermId t) {
    expect_prop(s, "implication");
    expect_prop(t, "implication");
    return intern(Tag::Imp, 0, s.id, t.id, types_.prop());
}

TermId TermStore::mk_all(TyId binder, TermId body) {
    expect_prop(body, "universal quantifier");
    return intern(Tag::All, binder.id, body.id, kNoChild, types_.prop());
}

TermId TermStore::mk_eq(TermId s, TermId t) {
    if (type_of(s) != type_of(t)) throw TypeMismatch("equation between terms of different types");
    return intern(Tag::Eq, type_of(s).id, s.id, t.id, types_.prop());
}

TermId TermStore::mk_choice(TyId ty) {
    TyId full = types_.arrow(types_.arrow(ty, types_.prop()), ty);
    return intern(Tag::Choice, ty.id, kNoChild, kNoChild, full);
}

TermId TermStore::mk_norm_ap(TermId f, TermId a) {
    TyId fty = type_of(f);
    if (!types_.is_arrow(fty)) throw TypeMismatch("application of a term of non-function type");
    if (types_.dom(fty) != type_of(a)) throw TypeMismatch("argument type does not match domain");
    if (tag(f) == Tag::Lam) return subst_rec(left(f), 0, a);
    return intern(Tag::Ap, 0, f.id, a.id, types_.cod(fty));
}

TermId TermStore::mk_norm_ap(TermId f, std::initializer_list<TermId> args) {
    for (TermId a : args) f = mk_norm_ap(f, a);
    return f;
}

TermId TermStore::mk_norm_lam(TyId ty, TermId body) {
    const TermNode& b = nodes_[body.id];
    if (b.tag == Tag::Ap) {
        const TermNode& arg = nodes_[b.right];
        if (arg.tag == Tag::DB && arg.num == 0 && !nodes_[b.left].fdbv.test(0))
            return shift(TermId{b.left}, 0, -1);
    }
    return intern(Tag::Lam, ty.id, body.id, kNoChild, types_.arrow(ty, b.ty));
}

TermId TermStore::shift(TermId t, int cutoff, int amount) {
    if (amount == 0 || !fdbv(t).any_from(cutoff)) return t;
    if (amount > 0 && fdbv(t).max_index() + amount > kMaxDbIndex)
        throw DepthLimitExceeded("shift would exceed de Bruijn index 255");
    if (amount < 0) {
        for (int i = cutoff; i < cutoff - amount; ++i)
            if (fdbv(t).test(i)) throw std::logic_error("negative shift would capture a free index");
    }
    return shift_rec(t, cutoff, amount);
}

TermId TermStore::shift_rec(TermId t, int cutoff, int amount) {
    if (!fdbv(t).any_from(cutoff)) return t;
    OpKey key{t.id, cutoff, static_cast<std::uint32_t>(amount)};
    if (auto it = shift_cache_.find(key); it != shift_cache_.end()) return it->second;

    // Shifting never creates or destroys redexes, so raw interning suffices.
    const TermNode n = nodes_[t.id];
    TermId r;
    switch (n.tag) {
    case Tag::DB: r = mk_db(static_cast<int>(n.num) + amount, n.ty); break;
    case Tag::Ap:
    case Tag::Imp:
    case Tag::Eq: {
        TermId l = shift_rec(TermId{n.left}, cutoff, amount);
        TermId rr = shift_rec(TermId{n.right}, cutoff, amount);
        r = intern(n.tag, n.num, l.id, rr.id, n.ty);
        break;
    }
    case Tag::Lam:
    case Tag::All: {
        TermId body = shift_rec(TermId{n.left}, cutoff + 1, amount);
        r = intern(n.tag, n.num, body.id, kNoChild, n.ty);
        break;
    }
    default: r = t; break;
    }
    shift_cache_.emplace(key, r);
    return r;
}

TermId TermStore::subst_norm(TermId t, int j, TermId s) {
    if (j < 0) throw std::out_of_range("negative substitution index");
    return subst_rec(t, j, s);
}

TermId TermStore::subst_rec(TermId t, int k, TermId s) {
    const DbMask& m = fdbv(t);
    if (!m.any_from(k)) return t;
    if (!m.test(k)) return shift(t, k, -1);

    OpKey key{t.id, k, s.id};
    if (auto it = subst_cache_.find(key); it != subst_cache_.end()) return it->second;

    const TermNode n = nodes_[t.id];
    TermId r;
    switch (n.tag) {
    case Tag::DB:
        r = shift(s, 0, k);
        if (type_of(r) != n.ty) throw TypeMismatch("substituted term has the wrong type");
        break;
    case Tag::Ap: r = mk_norm_ap(subst_rec(TermId{n.left}, k, s), subst_rec(TermId{n.right}, k, s)); break;
    case Tag::Imp: r = mk_imp(subst_rec(TermId{n.left}, k, s), subst_rec(TermId{n.right}, k, s)); break;
    case Tag::Eq: r = mk_eq(subst_rec(TermId{n.left}, k, s), subst_rec(TermId{n.right}, k, s)); break;
    case Tag::Lam: r = mk_norm_lam(TyId{n.num}, subst_rec(TermId{n.left}, k + 1, s)); break;
    case Tag::All: r = mk_all(TyId{n.num}, subst_rec(TermId{n.left}, k + 1, s)); break;
    default: r = t; break;
    }
    subst_cache_.emplace(key, r);
    return r;
}

std::pair<TermId, std::vector<TermId>> TermStore::head_spine(TermId t) const {
    std::vector<TermId> args;
    while (tag(t) == Tag::Ap) {
        args.push_back(right(t));
        t = left(t);
    }
    return {t, std::vector<TermId>(args.rbegin(), args.rend())};
}

std::optional<TermId> TermStore::negated(TermId t) const {
    const TermNode& n = nodes_[t.id];
    if (n.tag == Tag::Imp && n.right == bot_.id) return TermId{n.left};
    return std::nullopt;
}

std::optional<TyId> TermStore::const_type(NameId n) const {
    if (auto it = const_types_.find(n); it != const_types_.end()) return it->second;
    return std::nullopt;
}

void TermStore::clear_caches() {
    shift_cache_.clear();
    subst_cache_.clear();
}

} // namespace tabhol
