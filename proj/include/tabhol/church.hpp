#pragma once

#include <string>

#include "tabhol/tptp.hpp"

namespace tabhol {

/// THF text of C^n:
///   n (^x. cons x x) (cons nil nil) = cons (n (^x. cons x x) nil) (n (^x. cons x x) nil)
/// with n the Church numeral at type ($i>$i)>$i>$i.
std::string church_eq_thf(int n);

/// church_eq_thf(n) parsed into st. Requires n >= 1.
Problem gen_church_eq(TermStore& st, int n);

} // namespace tabhol
