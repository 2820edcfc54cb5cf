#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tabhol/errors.hpp"
#include "tabhol/types.hpp"

namespace tabhol {

struct TermId {
    std::uint32_t id = 0;
    friend constexpr auto operator<=>(TermId, TermId) = default;
};

} // namespace tabhol

template <> struct std::hash<tabhol::TermId> {
    std::size_t operator()(tabhol::TermId t) const noexcept { return t.id; }
};

namespace tabhol {

inline constexpr int kMaxDbIndex = 255;

/// Set of free de Bruijn indices, 0..255.
class DbMask {
public:
    constexpr DbMask() = default;
    static DbMask single(int i) {
        DbMask m;
        m.set(i);
        return m;
    }

    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(int i) const { return i <= kMaxDbIndex && (words_[i >> 6] >> (i & 63) & 1U) != 0; }
    bool empty() const { return (words_[0] | words_[1] | words_[2] | words_[3]) == 0; }
    /// True when some index >= k is free.
    bool any_from(int k) const;
    /// Highest free index, -1 when empty.
    int max_index() const;
    /// {i | i+1 in this}: the mask seen from outside one binder.
    DbMask unbind() const;
    std::vector<int> indices() const;

    DbMask operator|(const DbMask& o) const {
        DbMask r;
        for (std::size_t w = 0; w < 4; ++w) r.words_[w] = words_[w] | o.words_[w];
        return r;
    }
    friend bool operator==(const DbMask&, const DbMask&) = default;

private:
    std::array<std::uint64_t, 4> words_{};
};

enum class Tag : std::uint8_t { DB, Const, Ap, Lam, Bot, Imp, All, Eq, Choice };

inline constexpr std::uint32_t kNoChild = 0xFFFFFFFFU;

/// One stored node. `num` is the de Bruijn index (DB), the name (Const) or
/// the binder/side type (Lam, All, Eq, Choice). `ty` is the node's own type.
struct TermNode {
    Tag tag;
    std::uint32_t num;
    std::uint32_t left;
    std::uint32_t right;
    TyId ty;
    DbMask fdbv;
    bool has_choice;
};

/// Perfectly shared store of beta-eta normal simply typed terms.
///
/// Every constructor returns the id of an already-normal term; structurally
/// equal normal terms always receive the same id. Substitution and shifting
/// are memoized and short-circuit on the free-index mask, so neither
/// traverses a subterm they cannot affect. Ids are dense and allocated in
/// construction order.
class TermStore {
public:
    TermStore();
    TermStore(const TermStore&) = delete;
    TermStore& operator=(const TermStore&) = delete;

    TypeTable& types() { return types_; }
    const TypeTable& types() const { return types_; }
    NameTable& names() { return names_; }
    const NameTable& names() const { return names_; }

    // -- constructors ---------------------------------------------------
    TermId mk_db(int index, TyId ty);
    /// A constant. A name keeps the type it was first used with.
    TermId mk_const(NameId name, TyId ty);
    TermId mk_bot() const { return bot_; }
    TermId mk_imp(TermId s, TermId t);
    TermId mk_neg(TermId s) { return mk_imp(s, bot_); }
    TermId mk_top() { return mk_neg(bot_); }
    TermId mk_all(TyId binder, TermId body);
    TermId mk_eq(TermId s, TermId t);
    TermId mk_neq(TermId s, TermId t) { return mk_neg(mk_eq(s, t)); }
    TermId mk_choice(TyId ty);

    /// Normal form of (f a); beta-reduces through the normalizing substitution.
    TermId mk_norm_ap(TermId f, TermId a);
    TermId mk_norm_ap(TermId f, std::initializer_list<TermId> args);
    /// Normal form of (lambda x:ty. body); eta is decided from the mask alone.
    TermId mk_norm_lam(TyId ty, TermId body);

    /// Adds `amount` to every free index >= cutoff.
    TermId shift(TermId t, int cutoff, int amount);
    /// Normal form of t with DB j replaced by s and indices above j lowered.
    /// `s` is given in the context outside the j binders it is pushed under.
    TermId subst_norm(TermId t, int j, TermId s);

    /// t = head args[0] ... args[n-1] with head not an application.
    std::pair<TermId, std::vector<TermId>> head_spine(TermId t) const;

    // -- inspection -----------------------------------------------------
    const TermNode& node(TermId t) const { return nodes_[t.id]; }
    Tag tag(TermId t) const { return nodes_[t.id].tag; }
    TyId type_of(TermId t) const { return nodes_[t.id].ty; }
    const DbMask& fdbv(TermId t) const { return nodes_[t.id].fdbv; }
    bool closed(TermId t) const { return nodes_[t.id].fdbv.empty(); }
    TermId left(TermId t) const { return TermId{nodes_[t.id].left}; }
    TermId right(TermId t) const { return TermId{nodes_[t.id].right}; }
    int db_index(TermId t) const { return static_cast<int>(nodes_[t.id].num); }
    NameId const_name(TermId t) const { return NameId{nodes_[t.id].num}; }
    /// Binder type of Lam/All, side type of Eq, carrier of Choice.
    TyId annot(TermId t) const { return TyId{nodes_[t.id].num}; }
    /// s when t is (s => bot).
    std::optional<TermId> negated(TermId t) const;
    std::optional<TyId> const_type(NameId n) const;

    std::size_t size() const { return nodes_.size(); }
    std::size_t cache_entries() const { return shift_cache_.size() + subst_cache_.size(); }
    void clear_caches();

private:
    struct Key {
        Tag tag;
        std::uint32_t num, left, right, ty;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    struct OpKey {
        std::uint32_t t;
        std::int32_t k;
        std::uint32_t arg;
        friend bool operator==(const OpKey&, const OpKey&) = default;
    };
    struct OpKeyHash {
        std::size_t operator()(const OpKey& k) const noexcept;
    };

    TermId intern(Tag tag, std::uint32_t num, std::uint32_t left, std::uint32_t right, TyId ty);
    TermId shift_rec(TermId t, int cutoff, int amount);
    TermId subst_rec(TermId t, int k, TermId s);
    void expect_prop(TermId t, const char* what) const;

    TypeTable types_;
    NameTable names_;
    std::vector<TermNode> nodes_;
    std::unordered_map<Key, TermId, KeyHash> index_;
    std::unordered_map<NameId, TyId> const_types_;
    std::unordered_map<OpKey, TermId, OpKeyHash> shift_cache_;
    std::unordered_map<OpKey, TermId, OpKeyHash> subst_cache_;
    TermId bot_{};
};

} // namespace tabhol
