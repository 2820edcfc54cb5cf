#include "tabhol/church.hpp"

#include <stdexcept>

namespace tabhol {

namespace {

std::string numeral(int n) {
    std::string body = "X";
    for (int i = 0; i < n; ++i) body = "(F @ " + body + ")";
    return "(^ [F: $i > $i, X: $i] : " + body + ")";
}

} // namespace

std::string church_eq_thf(int n) {
    if (n < 1) throw std::invalid_argument("church_eq_thf: n must be positive");
    std::string num = numeral(n);
    std::string dup = "(^ [Y: $i] : (cons @ Y @ Y))";
    std::string iter_nil = "(" + num + " @ " + dup + " @ nil)";
    std::string out;
    out += "% C^" + std::to_string(n) + ": iterated duplication, both sides share one normal form.\n";
    out += "thf(cons_decl, type, cons: $i > $i > $i).\n";
    out += "thf(nil_decl, type, nil: $i).\n";
    out += "thf(c" + std::to_string(n) + ", conjecture,\n    ( " + num + " @ " + dup + " @ (cons @ nil @ nil) )\n" +
           "  = ( cons @ " + iter_nil + "\n           @ " + iter_nil + " ) ).\n";
    return out;
}

Problem gen_church_eq(TermStore& st, int n) { return parse_problem(st, church_eq_thf(n)); }

} // namespace tabhol
