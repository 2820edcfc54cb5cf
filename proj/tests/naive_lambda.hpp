#pragma once

// Test-only reference normalizer. Terms are flat preorder token vectors with
// no sharing at all: every substitution copies the argument into each
// occurrence. It is deliberately independent of TermStore.

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "tabhol/term_store.hpp"

namespace naive {

using tabhol::Tag;

struct Tok {
    Tag tag;
    std::uint32_t val = 0; // db index, name id, or binder/side type
    std::uint32_t ty = 0;  // DB and Const: their type
    friend bool operator==(const Tok&, const Tok&) = default;
};

using Flat = std::vector<Tok>;

inline int arity(Tag t) {
    switch (t) {
    case Tag::Ap:
    case Tag::Imp:
    case Tag::Eq: return 2;
    case Tag::Lam:
    case Tag::All: return 1;
    default: return 0;
    }
}

inline std::size_t skip(const Flat& t, std::size_t pos) {
    int pending = 1;
    while (pending > 0) {
        pending += arity(t[pos].tag) - 1;
        ++pos;
    }
    return pos;
}

inline std::size_t shift_into(const Flat& src, std::size_t pos, int cutoff, int amount, Flat& out) {
    Tok tok = src[pos];
    if (tok.tag == Tag::DB) {
        int i = static_cast<int>(tok.val);
        if (i >= cutoff) tok.val = static_cast<std::uint32_t>(i + amount);
        out.push_back(tok);
        return pos + 1;
    }
    out.push_back(tok);
    ++pos;
    int inner = (tok.tag == Tag::Lam || tok.tag == Tag::All) ? cutoff + 1 : cutoff;
    for (int c = 0; c < arity(tok.tag); ++c) pos = shift_into(src, pos, inner, amount, out);
    return pos;
}

inline bool free_in(const Flat& t, std::size_t pos, int k, std::size_t* end = nullptr) {
    const Tok& tok = t[pos];
    bool found = tok.tag == Tag::DB && static_cast<int>(tok.val) == k;
    ++pos;
    int inner = (tok.tag == Tag::Lam || tok.tag == Tag::All) ? k + 1 : k;
    for (int c = 0; c < arity(tok.tag); ++c) {
        std::size_t e = 0;
        found = free_in(t, pos, inner, &e) || found;
        pos = e;
    }
    if (end) *end = pos;
    return found;
}

/// Free de Bruijn indices of the subtree at pos, seen from depth 0.
inline void free_set(const Flat& t, std::size_t pos, int depth, std::set<int>& out, std::size_t* end) {
    const Tok& tok = t[pos];
    if (tok.tag == Tag::DB && static_cast<int>(tok.val) >= depth) out.insert(static_cast<int>(tok.val) - depth);
    ++pos;
    int inner = (tok.tag == Tag::Lam || tok.tag == Tag::All) ? depth + 1 : depth;
    for (int c = 0; c < arity(tok.tag); ++c) {
        std::size_t e = 0;
        free_set(t, pos, inner, out, &e);
        pos = e;
    }
    *end = pos;
}

inline std::size_t subst_into(const Flat& src, std::size_t pos, int k, const Flat& arg, Flat& out) {
    Tok tok = src[pos];
    if (tok.tag == Tag::DB) {
        int i = static_cast<int>(tok.val);
        if (i == k) {
            shift_into(arg, 0, 0, k, out);
        } else {
            if (i > k) tok.val = static_cast<std::uint32_t>(i - 1);
            out.push_back(tok);
        }
        return pos + 1;
    }
    out.push_back(tok);
    ++pos;
    int inner = (tok.tag == Tag::Lam || tok.tag == Tag::All) ? k + 1 : k;
    for (int c = 0; c < arity(tok.tag); ++c) pos = subst_into(src, pos, inner, arg, out);
    return pos;
}

inline Flat slice(const Flat& t, std::size_t pos) { return Flat(t.begin() + pos, t.begin() + skip(t, pos)); }

/// Applicative-order beta-eta normalization (terminates on simply typed input).
inline Flat nf(const Flat& t) {
    const Tok& tok = t[0];
    switch (tok.tag) {
    case Tag::Lam: {
        Flat body = nf(slice(t, 1));
        if (body[0].tag == Tag::Ap) {
            std::size_t fend = skip(body, 1);
            const Tok& a = body[fend];
            if (a.tag == Tag::DB && a.val == 0 && !free_in(body, 1, 0)) {
                Flat out;
                shift_into(body, 1, 0, -1, out);
                return out;
            }
        }
        Flat out{tok};
        out.insert(out.end(), body.begin(), body.end());
        return out;
    }
    case Tag::All: {
        Flat body = nf(slice(t, 1));
        Flat out{tok};
        out.insert(out.end(), body.begin(), body.end());
        return out;
    }
    case Tag::Ap: {
        std::size_t fend = skip(t, 1);
        Flat f = nf(Flat(t.begin() + 1, t.begin() + fend));
        Flat a = nf(slice(t, fend));
        if (f[0].tag == Tag::Lam) {
            Flat r;
            subst_into(f, 1, 0, a, r);
            return nf(r);
        }
        Flat out{tok};
        out.insert(out.end(), f.begin(), f.end());
        out.insert(out.end(), a.begin(), a.end());
        return out;
    }
    case Tag::Imp:
    case Tag::Eq: {
        std::size_t lend = skip(t, 1);
        Flat l = nf(Flat(t.begin() + 1, t.begin() + lend));
        Flat r = nf(slice(t, lend));
        Flat out{tok};
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), r.begin(), r.end());
        return out;
    }
    default: return t;
    }
}

/// Expand a stored term back into a tree (exponential on shared DAGs).
inline void readback_into(const tabhol::TermStore& st, tabhol::TermId t, Flat& out) {
    const auto& n = st.node(t);
    Tok tok{n.tag, n.num, 0};
    if (n.tag == Tag::DB || n.tag == Tag::Const) tok.ty = n.ty.id;
    if (n.tag == Tag::Ap || n.tag == Tag::Imp || n.tag == Tag::Bot) tok.val = 0;
    out.push_back(tok);
    if (arity(n.tag) >= 1) readback_into(st, st.left(t), out);
    if (arity(n.tag) == 2) readback_into(st, st.right(t), out);
}

inline Flat readback(const tabhol::TermStore& st, tabhol::TermId t) {
    Flat out;
    readback_into(st, t, out);
    return out;
}

/// Build a raw tree through the store's normalizing constructors.
inline std::size_t build_at(tabhol::TermStore& st, const Flat& t, std::size_t pos, tabhol::TermId& out) {
    using namespace tabhol;
    const Tok& tok = t[pos];
    ++pos;
    switch (tok.tag) {
    case Tag::DB: out = st.mk_db(static_cast<int>(tok.val), TyId{tok.ty}); return pos;
    case Tag::Const: out = st.mk_const(NameId{tok.val}, TyId{tok.ty}); return pos;
    case Tag::Bot: out = st.mk_bot(); return pos;
    case Tag::Choice: out = st.mk_choice(TyId{tok.val}); return pos;
    case Tag::Lam: {
        TermId b;
        pos = build_at(st, t, pos, b);
        out = st.mk_norm_lam(TyId{tok.val}, b);
        return pos;
    }
    case Tag::All: {
        TermId b;
        pos = build_at(st, t, pos, b);
        out = st.mk_all(TyId{tok.val}, b);
        return pos;
    }
    case Tag::Ap:
    case Tag::Imp:
    case Tag::Eq: {
        TermId l, r;
        pos = build_at(st, t, pos, l);
        pos = build_at(st, t, pos, r);
        out = tok.tag == Tag::Ap ? st.mk_norm_ap(l, r) : tok.tag == Tag::Imp ? st.mk_imp(l, r) : st.mk_eq(l, r);
        return pos;
    }
    }
    throw std::logic_error("bad tag");
}

inline tabhol::TermId build(tabhol::TermStore& st, const Flat& t) {
    tabhol::TermId out;
    build_at(st, t, 0, out);
    return out;
}

/// Random well-typed raw terms over a small fixed signature.
class Generator {
public:
    explicit Generator(tabhol::TermStore& st, std::uint64_t seed) : st_(st), rng_(seed) {
        auto& ty = st.types();
        o_ = ty.prop();
        i_ = ty.base(st.names().intern("$i"));
        ii_ = ty.arrow(i_, i_);
        iii_ = ty.arrow(i_, ii_);
        io_ = ty.arrow(i_, o_);
        ii_i_ = ty.arrow(ii_, i_);
        add_const("c", i_);
        add_const("d", i_);
        add_const("f", ii_);
        add_const("g", iii_);
        add_const("p", io_);
        add_const("q", ii_i_);
        add_const("r", ty.arrow(io_, o_));
        add_const("b", o_);
        small_types_ = {i_, o_, ii_, io_};
    }

    tabhol::TyId iota() const { return i_; }
    const std::vector<std::pair<tabhol::NameId, tabhol::TyId>>& constants() const { return consts_; }

    /// A closed raw term of type ty with at most max_size tokens.
    Flat term(tabhol::TyId ty, std::size_t max_size) {
        for (;;) {
            Flat out;
            std::vector<tabhol::TyId> ctx;
            gen(ty, ctx, 6, out);
            if (out.size() <= max_size) return out;
        }
    }

    /// An open raw term (free indices typed by ctx, innermost last).
    Flat open_term(tabhol::TyId ty, std::vector<tabhol::TyId> ctx, std::size_t max_size) {
        for (;;) {
            Flat out;
            gen(ty, ctx, 5, out);
            if (out.size() <= max_size) return out;
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    void add_const(const char* name, tabhol::TyId ty) {
        auto n = st_.names().intern(name);
        consts_.push_back({n, ty});
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    void gen(tabhol::TyId ty, std::vector<tabhol::TyId>& ctx, int depth, Flat& out) {
        using namespace tabhol;
        auto& types = st_.types();
        std::vector<int> vars;
        for (int k = 0; k < static_cast<int>(ctx.size()); ++k)
            if (ctx[ctx.size() - 1 - k] == ty) vars.push_back(k);
        std::vector<std::pair<NameId, TyId>> cs;
        for (auto& c : consts_)
            if (c.second == ty) cs.push_back(c);

        bool leaf_ok = !vars.empty() || !cs.empty() || ty == o_;
        int choice = depth <= 0 ? (leaf_ok ? 0 : 3) : pick(10);
        if (choice <= 2 && leaf_ok) {
            int n = static_cast<int>(vars.size() + cs.size()) + (ty == o_ ? 1 : 0);
            int k = pick(n);
            if (k < static_cast<int>(vars.size())) {
                out.push_back({Tag::DB, static_cast<std::uint32_t>(vars[k]), ty.id});
            } else if (k < static_cast<int>(vars.size() + cs.size())) {
                auto c = cs[k - vars.size()];
                out.push_back({Tag::Const, c.first.id, c.second.id});
            } else {
                out.push_back({Tag::Bot, 0, 0});
            }
            return;
        }
        if (types.is_arrow(ty) && choice <= 5) {
            out.push_back({Tag::Lam, types.dom(ty).id, 0});
            ctx.push_back(types.dom(ty));
            gen(types.cod(ty), ctx, depth - 1, out);
            ctx.pop_back();
            return;
        }
        if (ty == o_ && choice <= 6) {
            int form = pick(3);
            if (form == 0) {
                out.push_back({Tag::Imp, 0, 0});
                gen(o_, ctx, depth - 1, out);
                gen(o_, ctx, depth - 1, out);
            } else if (form == 1) {
                TyId b = small_types_[pick(2)];
                out.push_back({Tag::All, b.id, 0});
                ctx.push_back(b);
                gen(o_, ctx, depth - 1, out);
                ctx.pop_back();
            } else {
                TyId s = small_types_[pick(4)];
                out.push_back({Tag::Eq, s.id, 0});
                gen(s, ctx, depth - 1, out);
                gen(s, ctx, depth - 1, out);
            }
            return;
        }
        if (ty == i_ && choice == 7) {
            out.push_back({Tag::Ap, 0, 0});
            out.push_back({Tag::Choice, i_.id, 0});
            gen(io_, ctx, depth - 1, out);
            return;
        }
        // application, often with a lambda in head position
        TyId arg = small_types_[pick(static_cast<int>(small_types_.size()))];
        out.push_back({Tag::Ap, 0, 0});
        gen(types.arrow(arg, ty), ctx, depth - 1, out);
        gen(arg, ctx, depth - 1, out);
    }

    tabhol::TermStore& st_;
    std::mt19937_64 rng_;
    tabhol::TyId o_, i_, ii_, iii_, io_, ii_i_;
    std::vector<std::pair<tabhol::NameId, tabhol::TyId>> consts_;
    std::vector<tabhol::TyId> small_types_;
};

/// Church numeral n at (i>i)>i>i applied as in the C^n family, as raw trees.
struct ChurchRaw {
    Flat lhs, rhs;
};

inline Flat church_numeral(std::uint32_t i_ty, std::uint32_t ii_ty, int n) {
    Flat t{{Tag::Lam, ii_ty, 0}, {Tag::Lam, i_ty, 0}};
    for (int k = 0; k < n; ++k) {
        t.push_back({Tag::Ap, 0, 0});
        t.push_back({Tag::DB, 1, ii_ty});
    }
    t.push_back({Tag::DB, 0, i_ty});
    return t;
}

inline ChurchRaw church_sides(tabhol::TermStore& st, int n) {
    using namespace tabhol;
    auto& ty = st.types();
    TyId i = ty.base(st.names().intern("$i"));
    TyId ii = ty.arrow(i, i);
    TyId iii = ty.arrow(i, ii);
    Tok cons{Tag::Const, st.names().intern("cons").id, iii.id};
    Tok nil{Tag::Const, st.names().intern("nil").id, i.id};
    Flat num = church_numeral(i.id, ii.id, n);
    Flat dup{{Tag::Lam, i.id, 0}, {Tag::Ap, 0, 0}, {Tag::Ap, 0, 0}, cons, {Tag::DB, 0, i.id}, {Tag::DB, 0, i.id}};
    auto iterate = [&](const Flat& base) {
        Flat t{{Tag::Ap, 0, 0}, {Tag::Ap, 0, 0}};
        t.insert(t.end(), num.begin(), num.end());
        t.insert(t.end(), dup.begin(), dup.end());
        t.insert(t.end(), base.begin(), base.end());
        return t;
    };
    Flat cnn{{Tag::Ap, 0, 0}, {Tag::Ap, 0, 0}, cons, nil, nil};
    ChurchRaw out;
    out.lhs = iterate(cnn);
    Flat inner = iterate(Flat{nil});
    out.rhs = {{Tag::Ap, 0, 0}, {Tag::Ap, 0, 0}, cons};
    out.rhs.insert(out.rhs.end(), inner.begin(), inner.end());
    out.rhs.insert(out.rhs.end(), inner.begin(), inner.end());
    return out;
}

} // namespace naive
