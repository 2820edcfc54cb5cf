#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tabhol/term_store.hpp"

namespace tabhol {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

class TptpError : public std::runtime_error {
public:
    TptpError(const std::string& what, SourceLoc loc);
    SourceLoc loc() const { return loc_; }

private:
    SourceLoc loc_;
};

class SyntaxError : public TptpError {
public:
    using TptpError::TptpError;
};
class UnknownSymbol : public TptpError {
public:
    using TptpError::TptpError;
};
class TptpTypeError : public TptpError {
public:
    using TptpError::TptpError;
};
class UnsupportedFeature : public TptpError {
public:
    using TptpError::TptpError;
};

/// Declared constants and sorts, in declaration order.
struct Signature {
    std::unordered_map<NameId, TyId> consts;
    std::vector<NameId> const_order;
    std::unordered_map<NameId, TyId> sorts;
    std::vector<NameId> sort_order;

    std::optional<TyId> const_type(NameId n) const;
};

struct LabeledProp {
    std::string label;
    TermId prop;
};

/// A parsed THF problem; every proposition is closed, normal and of type o.
struct Problem {
    Signature sig;
    std::vector<LabeledProp> axioms;
    std::optional<LabeledProp> conjecture;
};

struct ParseOptions {
    /// Root for include directives; falls back to base_dir when empty.
    std::filesystem::path tptp_root;
    std::filesystem::path base_dir;
};

Problem parse_problem(TermStore& st, std::string_view text, const ParseOptions& opts = {});
Problem parse_problem_file(TermStore& st, const std::filesystem::path& file, ParseOptions opts = {});

/// Parse and elaborate a single closed THF formula against an existing signature.
TermId parse_formula(TermStore& st, const Signature& sig, std::string_view text);

/// The branch to refute: the axioms, plus the negated conjecture if present.
std::vector<TermId> negate_conjecture(TermStore& st, const Problem& p);

/// THF rendering of a core term; parse_formula reads it back to the same id.
std::string print_term(const TermStore& st, TermId t);
std::string print_type(const TermStore& st, TyId t);
/// THF type declarations for a signature (one `thf(...)` line per entry).
std::string print_signature(const TermStore& st, const Signature& sig);

} // namespace tabhol
