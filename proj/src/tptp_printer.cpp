#include <cctype>
#include <sstream>

#include "tabhol/tptp.hpp"

namespace tabhol {

namespace {

std::string atom_name(const std::string& s) {
    bool lower_word = !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') lower_word = false;
    if (lower_word || (!s.empty() && s[0] == '$')) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string var_name(int level) { return "X" + std::to_string(level); }

class Printer {
public:
    explicit Printer(const TermStore& st) : st_(st) {}

    void type(std::ostream& os, TyId t) const {
        const TypeTable& ty = st_.types();
        switch (ty.shape(t).kind) {
        case TyKind::Prop: os << "$o"; break;
        case TyKind::Base: os << atom_name(st_.names().str(ty.sort_name(t))); break;
        case TyKind::Arrow:
            os << "( ";
            type(os, ty.dom(t));
            os << " > ";
            type(os, ty.cod(t));
            os << " )";
            break;
        }
    }

    // depth = number of enclosing binders; DB i names binder depth-1-i.
    void term(std::ostream& os, TermId t, int depth) const {
        const TermNode& n = st_.node(t);
        switch (n.tag) {
        case Tag::DB: os << var_name(depth - 1 - static_cast<int>(n.num)); return;
        case Tag::Const: os << atom_name(st_.names().str(st_.const_name(t))); return;
        case Tag::Bot: os << "$false"; return;
        case Tag::Imp:
            os << "( ";
            term(os, st_.left(t), depth);
            os << " => ";
            term(os, st_.right(t), depth);
            os << " )";
            return;
        case Tag::Eq:
            os << "( ";
            term(os, st_.left(t), depth);
            os << " = ";
            term(os, st_.right(t), depth);
            os << " )";
            return;
        case Tag::All:
        case Tag::Lam:
            os << "( " << (n.tag == Tag::All ? "!" : "^") << " [" << var_name(depth) << ": ";
            type(os, st_.annot(t));
            os << "] : ";
            term(os, st_.left(t), depth + 1);
            os << " )";
            return;
        case Tag::Ap:
            if (st_.tag(st_.left(t)) == Tag::Choice) {
                choice_app(os, st_.annot(st_.left(t)), st_.right(t), depth);
                return;
            }
            os << "( ";
            term(os, st_.left(t), depth);
            os << " @ ";
            term(os, st_.right(t), depth);
            os << " )";
            return;
        case Tag::Choice: {
            // eps alone: (^[P]: @+[X]: P @ X), which eta-normalizes back to eps
            TyId carrier = st_.annot(t);
            os << "( ^ [" << var_name(depth) << ": ( ";
            type(os, carrier);
            os << " > $o )] : ( @+ [" << var_name(depth + 1) << ": ";
            type(os, carrier);
            os << "] : ( " << var_name(depth) << " @ " << var_name(depth + 1) << " ) ) )";
            return;
        }
        }
    }

private:
    void choice_app(std::ostream& os, TyId carrier, TermId pred, int depth) const {
        // eps p  as  @+[X]: (p @ X); p's free indices keep their outer names
        os << "( @+ [" << var_name(depth) << ": ";
        type(os, carrier);
        os << "] : ( ";
        term(os, pred, depth);
        os << " @ " << var_name(depth) << " ) )";
    }

    const TermStore& st_;
};

} // namespace

std::string print_term(const TermStore& st, TermId t) {
    std::ostringstream os;
    Printer(st).term(os, t, 0);
    return os.str();
}

std::string print_type(const TermStore& st, TyId t) {
    std::ostringstream os;
    Printer(st).type(os, t);
    return os.str();
}

std::string print_signature(const TermStore& st, const Signature& sig) {
    std::ostringstream os;
    for (NameId s : sig.sort_order) {
        const std::string& name = st.names().str(s);
        os << "thf(" << atom_name(name + "_type") << ", type, " << atom_name(name) << ": $tType).\n";
    }
    for (NameId c : sig.const_order) {
        const std::string& name = st.names().str(c);
        os << "thf(" << atom_name(name + "_decl") << ", type, " << atom_name(name) << ": "
           << print_type(st, sig.consts.at(c)) << ").\n";
    }
    return os.str();
}

} // namespace tabhol
