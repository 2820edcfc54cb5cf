#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "tabhol/tptp.hpp"
#include "tptp_lexer.hpp"

namespace tabhol {

TptpError::TptpError(const std::string& what, SourceLoc loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + what), loc_(loc) {}

std::optional<TyId> Signature::const_type(NameId n) const {
    if (auto it = consts.find(n); it != consts.end()) return it->second;
    return std::nullopt;
}

namespace {

using detail::Token;
using detail::TokKind;

enum class ExprKind {
    Atom,      // constant or bound variable
    True,
    False,
    Not,
    Binary,    // logical connective or '=' / '!='
    App,
    Binder,    // ! ? ^ @+
    PiSigma,   // !! or ?? as a constant
    ConnConst, // (&), (|), ... as a constant
};

struct Expr {
    ExprKind kind;
    std::string op; // connective, binder, or atom name
    bool variable = false;
    std::vector<std::pair<std::string, TyId>> vars;
    std::unique_ptr<Expr> lhs, rhs;
    SourceLoc loc;
};

using ExprPtr = std::unique_ptr<Expr>;

ExprPtr make(ExprKind k, std::string op, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->op = std::move(op);
    e->loc = loc;
    return e;
}

bool is_binary_connective(const std::string& op) {
    return op == "<=>" || op == "<~>" || op == "=>" || op == "<=" || op == "|" || op == "~|" || op == "&" ||
           op == "~&";
}

class Parser {
public:
    Parser(TermStore& st, std::vector<Token> toks, Problem& prob, const ParseOptions& opts,
           std::unordered_set<std::string>& visiting)
        : st_(st), toks_(std::move(toks)), prob_(prob), opts_(opts), visiting_(visiting) {}

    void parse_all() {
        while (peek().kind != TokKind::End) parse_entry();
    }

    TermId parse_single_formula() {
        ExprPtr e = parse_formula();
        if (peek().kind == TokKind::Dot) next();
        if (peek().kind != TokKind::End) throw SyntaxError("trailing input after formula", peek().loc);
        return elaborate_prop(*e);
    }

private:
    // -- tokens --------------------------------------------------------
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool at_op(std::string_view op, std::size_t k = 0) const {
        return peek(k).kind == TokKind::Op && peek(k).text == op;
    }
    const Token& expect(TokKind k, const char* what) {
        if (peek().kind != k) throw SyntaxError(std::string("expected ") + what + ", found '" + peek().text + "'",
                                                peek().loc);
        return next();
    }
    void expect_op(std::string_view op) {
        if (!at_op(op)) throw SyntaxError("expected '" + std::string(op) + "'", peek().loc);
        next();
    }
    std::string parse_name() {
        const Token& t = peek();
        if (t.kind == TokKind::LowerWord || t.kind == TokKind::SingleQuoted || t.kind == TokKind::Number) {
            next();
            return t.text;
        }
        throw SyntaxError("expected a name", t.loc);
    }

    // -- entries -------------------------------------------------------
    void parse_entry() {
        const Token& head = expect(TokKind::LowerWord, "annotated formula");
        if (head.text == "include") {
            parse_include(head.loc);
            return;
        }
        if (head.text != "thf") throw UnsupportedFeature("only thf entries are supported, found " + head.text, head.loc);
        expect(TokKind::LParen, "'('");
        std::string label = parse_name();
        expect(TokKind::Comma, "','");
        const Token& role_tok = expect(TokKind::LowerWord, "formula role");
        std::string role = role_tok.text;
        expect(TokKind::Comma, "','");
        if (role == "type") {
            parse_type_decl();
        } else {
            ExprPtr e = parse_formula();
            TermId prop = elaborate_prop(*e);
            if (role == "conjecture") {
                if (prob_.conjecture) throw SyntaxError("more than one conjecture", role_tok.loc);
                prob_.conjecture = LabeledProp{label, prop};
            } else if (role == "axiom" || role == "hypothesis" || role == "definition" || role == "lemma" ||
                       role == "theorem" || role == "assumption" || role == "negated_conjecture" ||
                       role == "plain") {
                prob_.axioms.push_back(LabeledProp{label, prop});
            } else {
                throw UnsupportedFeature("unsupported formula role " + role, role_tok.loc);
            }
        }
        skip_annotations();
        expect(TokKind::RParen, "')'");
        expect(TokKind::Dot, "'.'");
    }

    void skip_annotations() {
        int depth = 0;
        while (peek().kind != TokKind::End) {
            TokKind k = peek().kind;
            if (depth == 0 && k == TokKind::RParen) return;
            if (k == TokKind::LParen || k == TokKind::LBrack) ++depth;
            if (k == TokKind::RParen || k == TokKind::RBrack) --depth;
            next();
        }
    }

    void parse_include(SourceLoc loc) {
        expect(TokKind::LParen, "'('");
        std::string file = expect(TokKind::SingleQuoted, "quoted file name").text;
        skip_annotations();
        expect(TokKind::RParen, "')'");
        expect(TokKind::Dot, "'.'");

        std::filesystem::path candidates[] = {opts_.tptp_root / file, opts_.base_dir / file};
        for (const auto& path : candidates) {
            if (path.empty() || !std::filesystem::exists(path)) continue;
            std::string key = std::filesystem::weakly_canonical(path).string();
            if (visiting_.contains(key)) throw SyntaxError("cyclic include of " + file, loc);
            std::ifstream in(path);
            std::stringstream buf;
            buf << in.rdbuf();
            visiting_.insert(key);
            Parser sub(st_, detail::tokenize(buf.str()), prob_, opts_, visiting_);
            sub.parse_all();
            visiting_.erase(key);
            return;
        }
        throw SyntaxError("cannot resolve include '" + file + "'", loc);
    }

    void parse_type_decl() {
        int parens = 0;
        while (peek().kind == TokKind::LParen) {
            next();
            ++parens;
        }
        SourceLoc loc = peek().loc;
        std::string name = parse_name();
        expect(TokKind::Colon, "':'");
        if (peek().kind == TokKind::DollarWord && peek().text == "$tType") {
            next();
            if (at_op(">")) throw UnsupportedFeature("type constructors are not supported", peek().loc);
            NameId n = st_.names().intern(name);
            if (!prob_.sig.sorts.contains(n)) {
                prob_.sig.sorts.emplace(n, st_.types().base(n));
                prob_.sig.sort_order.push_back(n);
            }
        } else {
            TyId ty = parse_type();
            NameId n = st_.names().intern(name);
            if (auto old = prob_.sig.const_type(n)) {
                if (*old != ty) throw TptpTypeError("conflicting declarations for " + name, loc);
            } else {
                if (auto used = st_.const_type(n); used && *used != ty)
                    throw TptpTypeError("constant " + name + " already used at another type", loc);
                prob_.sig.consts.emplace(n, ty);
                prob_.sig.const_order.push_back(n);
            }
        }
        for (; parens > 0; --parens) expect(TokKind::RParen, "')'");
    }

    // -- types ---------------------------------------------------------
    TyId parse_type() {
        TyId lhs = parse_type_atom();
        if (at_op("*")) throw UnsupportedFeature("product types are not supported", peek().loc);
        if (at_op(">")) {
            next();
            return st_.types().arrow(lhs, parse_type());
        }
        return lhs;
    }

    TyId parse_type_atom() {
        const Token& t = peek();
        if (t.kind == TokKind::LParen) {
            next();
            TyId ty = parse_type();
            expect(TokKind::RParen, "')'");
            return ty;
        }
        if (t.kind == TokKind::Op && (t.text == "!>" || t.text == "?*"))
            throw UnsupportedFeature("polymorphic types are not supported", t.loc);
        if (t.kind == TokKind::DollarWord) {
            next();
            if (t.text == "$o") return st_.types().prop();
            if (t.text == "$i") return st_.types().base(st_.names().intern("$i"));
            if (t.text == "$int" || t.text == "$rat" || t.text == "$real")
                throw UnsupportedFeature("arithmetic types are not supported", t.loc);
            if (t.text == "$tType") throw UnsupportedFeature("$tType in a term type", t.loc);
            throw UnknownSymbol("unknown defined type " + t.text, t.loc);
        }
        if (t.kind == TokKind::LowerWord || t.kind == TokKind::SingleQuoted) {
            next();
            NameId n = st_.names().intern(t.text);
            auto it = prob_.sig.sorts.find(n);
            if (it == prob_.sig.sorts.end()) throw UnknownSymbol("undeclared sort " + t.text, t.loc);
            return it->second;
        }
        if (t.kind == TokKind::UpperWord) throw UnsupportedFeature("type variables are not supported", t.loc);
        throw SyntaxError("expected a type", t.loc);
    }

    // -- formulas ------------------------------------------------------
    static int level_of(const Token& t) {
        if (t.kind != TokKind::Op) return -1;
        const std::string& s = t.text;
        if (s == "<=>" || s == "<~>") return 0;
        if (s == "=>" || s == "<=") return 1;
        if (s == "|" || s == "~|") return 2;
        if (s == "&" || s == "~&") return 3;
        if (s == "=" || s == "!=") return 4;
        if (s == "@") return 5;
        return -1;
    }

    ExprPtr parse_formula() { return parse_level(0); }

    ExprPtr parse_level(int level) {
        if (level > 5) return parse_unary();
        ExprPtr lhs = parse_level(level + 1);
        while (level_of(peek()) == level) {
            const Token& op = next();
            ExprPtr rhs = parse_level(level + 1);
            auto e = make(op.text == "@" ? ExprKind::App : ExprKind::Binary, op.text, op.loc);
            e->lhs = std::move(lhs);
            e->rhs = std::move(rhs);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        switch (t.kind) {
        case TokKind::Op: {
            std::string op = t.text;
            if (op == "~") {
                next();
                auto e = make(ExprKind::Not, "~", loc);
                e->lhs = parse_level(4);
                return e;
            }
            if (op == "!" || op == "?" || op == "^" || op == "@+") {
                next();
                auto e = make(ExprKind::Binder, op, loc);
                expect(TokKind::LBrack, "'['");
                for (;;) {
                    const Token& v = expect(TokKind::UpperWord, "variable");
                    if (peek().kind != TokKind::Colon) throw SyntaxError("untyped variable " + v.text, v.loc);
                    next();
                    e->vars.emplace_back(v.text, parse_type());
                    if (peek().kind == TokKind::Comma) {
                        next();
                        continue;
                    }
                    break;
                }
                expect(TokKind::RBrack, "']'");
                expect(TokKind::Colon, "':'");
                e->lhs = parse_level(4);
                return e;
            }
            if (op == "@-") throw UnsupportedFeature("description binders are not supported", loc);
            if (op == "!>" || op == "?*") throw UnsupportedFeature("polymorphic binders are not supported", loc);
            if (op == "!!" || op == "??") {
                next();
                return make(ExprKind::PiSigma, op, loc);
            }
            throw SyntaxError("unexpected operator '" + op + "'", loc);
        }
        case TokKind::LParen: {
            next();
            if (peek().kind == TokKind::Op && peek(1).kind == TokKind::RParen) {
                std::string op = peek().text;
                if (is_binary_connective(op) || op == "~" || op == "=" || op == "!=") {
                    next();
                    next();
                    return make(ExprKind::ConnConst, op, loc);
                }
                if (op == "!!" || op == "??") {
                    next();
                    next();
                    return make(ExprKind::PiSigma, op, loc);
                }
            }
            ExprPtr e = parse_formula();
            expect(TokKind::RParen, "')'");
            return e;
        }
        case TokKind::LowerWord:
        case TokKind::SingleQuoted:
        case TokKind::UpperWord: {
            next();
            auto e = make(ExprKind::Atom, t.text, loc);
            e->variable = t.kind == TokKind::UpperWord;
            return e;
        }
        case TokKind::DollarWord:
            next();
            if (t.text == "$true") return make(ExprKind::True, "", loc);
            if (t.text == "$false") return make(ExprKind::False, "", loc);
            throw UnsupportedFeature("unsupported defined symbol " + t.text, loc);
        case TokKind::DollarDollarWord: throw UnsupportedFeature("system symbols are not supported", loc);
        case TokKind::Number: throw UnsupportedFeature("arithmetic is not supported", loc);
        case TokKind::DistinctObject: throw UnsupportedFeature("distinct objects are not supported", loc);
        default: throw SyntaxError("unexpected '" + t.text + "'", loc);
        }
    }

    // -- elaboration ---------------------------------------------------
    using Ctx = std::vector<std::pair<std::string, TyId>>;

    TermId elaborate_prop(const Expr& e) {
        Ctx ctx;
        TermId t = elaborate(e, ctx);
        if (!st_.types().is_prop(st_.type_of(t))) throw TptpTypeError("formula is not of type $o", e.loc);
        return t;
    }

    TermId need_prop(const Expr& e, Ctx& ctx) {
        TermId t = elaborate(e, ctx);
        if (!st_.types().is_prop(st_.type_of(t))) throw TptpTypeError("expected a formula of type $o", e.loc);
        return t;
    }

    TermId connective(const std::string& op, TermId s, TermId t, SourceLoc loc) {
        TermStore& st = st_;
        try {
            if (op == "=") return st.mk_eq(s, t);
            if (op == "!=") return st.mk_neq(s, t);
            if (!st.types().is_prop(st.type_of(s)) || !st.types().is_prop(st.type_of(t)))
                throw TptpTypeError("operands of " + op + " must have type $o", loc);
            if (op == "=>") return st.mk_imp(s, t);
            if (op == "<=") return st.mk_imp(t, s);
            if (op == "|") return st.mk_imp(st.mk_neg(s), t);
            if (op == "&") return st.mk_neg(st.mk_imp(s, st.mk_neg(t)));
            if (op == "<=>") return st.mk_eq(s, t);
            if (op == "<~>") return st.mk_neg(st.mk_eq(s, t));
            if (op == "~|") return st.mk_neg(st.mk_imp(st.mk_neg(s), t));
            if (op == "~&") return st.mk_neg(st.mk_neg(st.mk_imp(s, st.mk_neg(t))));
        } catch (const TypeMismatch& ex) {
            throw TptpTypeError(ex.what(), loc);
        }
        throw SyntaxError("unknown connective " + op, loc);
    }

    TermId elaborate(const Expr& e, Ctx& ctx) {
        TermStore& st = st_;
        switch (e.kind) {
        case ExprKind::True: return st.mk_top();
        case ExprKind::False: return st.mk_bot();
        case ExprKind::Atom: {
            for (std::size_t k = ctx.size(); k-- > 0;)
                if (ctx[k].first == e.op) return st.mk_db(static_cast<int>(ctx.size() - 1 - k), ctx[k].second);
            if (e.variable) throw UnknownSymbol("unbound variable " + e.op, e.loc);
            NameId n = st.names().intern(e.op);
            auto ty = prob_.sig.const_type(n);
            if (!ty) throw UnknownSymbol("undeclared constant " + e.op, e.loc);
            return st.mk_const(n, *ty);
        }
        case ExprKind::Not: return st.mk_neg(need_prop(*e.lhs, ctx));
        case ExprKind::Binary: {
            TermId s = elaborate(*e.lhs, ctx);
            TermId t = elaborate(*e.rhs, ctx);
            return connective(e.op, s, t, e.loc);
        }
        case ExprKind::App: {
            if (e.lhs->kind == ExprKind::PiSigma) {
                TermId pred = elaborate(*e.rhs, ctx);
                TyId pty = st.type_of(pred);
                if (!st.types().is_arrow(pty) || !st.types().is_prop(st.types().cod(pty)))
                    throw TptpTypeError("argument of " + e.lhs->op + " must be a predicate", e.loc);
                TyId dom = st.types().dom(pty);
                TermId body = st.mk_norm_ap(st.shift(pred, 0, 1), st.mk_db(0, dom));
                if (e.lhs->op == "!!") return st.mk_all(dom, body);
                return st.mk_neg(st.mk_all(dom, st.mk_neg(body)));
            }
            TermId f = elaborate(*e.lhs, ctx);
            TermId a = elaborate(*e.rhs, ctx);
            try {
                return st.mk_norm_ap(f, a);
            } catch (const TypeMismatch& ex) {
                throw TptpTypeError(ex.what(), e.loc);
            }
        }
        case ExprKind::Binder: {
            std::size_t base = ctx.size();
            for (auto& v : e.vars) ctx.push_back(v);
            TermId body = elaborate(*e.lhs, ctx);
            if (e.op != "^" && !st.types().is_prop(st.type_of(body)))
                throw TptpTypeError("quantified body must have type $o", e.lhs->loc);
            for (std::size_t k = e.vars.size(); k-- > 0;) {
                TyId vt = e.vars[k].second;
                if (e.op == "!") {
                    body = st.mk_all(vt, body);
                } else if (e.op == "?") {
                    body = st.mk_neg(st.mk_all(vt, st.mk_neg(body)));
                } else if (e.op == "^") {
                    body = st.mk_norm_lam(vt, body);
                } else {
                    // @+ [X]: b  is  eps (\X. b); only the innermost variable may be bound this way
                    if (k + 1 != e.vars.size()) throw UnsupportedFeature("multi-variable choice binder", e.loc);
                    body = st.mk_norm_ap(st.mk_choice(vt), st.mk_norm_lam(vt, body));
                }
            }
            ctx.resize(base);
            return body;
        }
        case ExprKind::PiSigma: throw UnsupportedFeature(e.op + " must be applied to a predicate", e.loc);
        case ExprKind::ConnConst: {
            TyId o = st.types().prop();
            if (e.op == "~") return st.mk_norm_lam(o, st.mk_neg(st.mk_db(0, o)));
            if (e.op == "=" || e.op == "!=")
                throw UnsupportedFeature("unapplied equality constant needs a type", e.loc);
            TermId body = connective(e.op, st.mk_db(1, o), st.mk_db(0, o), e.loc);
            return st.mk_norm_lam(o, st.mk_norm_lam(o, body));
        }
        }
        throw SyntaxError("unhandled expression", e.loc);
    }

    TermStore& st_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Problem& prob_;
    const ParseOptions& opts_;
    std::unordered_set<std::string>& visiting_;
};

} // namespace

Problem parse_problem(TermStore& st, std::string_view text, const ParseOptions& opts) {
    Problem prob;
    std::unordered_set<std::string> visiting;
    Parser p(st, detail::tokenize(text), prob, opts, visiting);
    p.parse_all();
    return prob;
}

Problem parse_problem_file(TermStore& st, const std::filesystem::path& file, ParseOptions opts) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (opts.base_dir.empty()) opts.base_dir = file.parent_path();
    return parse_problem(st, buf.str(), opts);
}

TermId parse_formula(TermStore& st, const Signature& sig, std::string_view text) {
    Problem prob;
    prob.sig = sig;
    ParseOptions opts;
    std::unordered_set<std::string> visiting;
    Parser p(st, detail::tokenize(text), prob, opts, visiting);
    return p.parse_single_formula();
}

std::vector<TermId> negate_conjecture(TermStore& st, const Problem& p) {
    std::vector<TermId> out;
    for (auto& a : p.axioms) out.push_back(a.prop);
    if (p.conjecture) out.push_back(st.mk_neg(p.conjecture->prop));
    return out;
}

} // namespace tabhol
