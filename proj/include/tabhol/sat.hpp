#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tabhol/term_store.hpp"

namespace tabhol {

/// Nonzero literal; negation is arithmetic minus.
struct Lit {
    std::int32_t value = 0;

    constexpr Lit operator-() const { return Lit{-value}; }
    constexpr std::uint32_t var() const { return static_cast<std::uint32_t>(value < 0 ? -value : value); }
    constexpr bool negative() const { return value < 0; }
    friend constexpr auto operator<=>(Lit, Lit) = default;
};

/// Assigns literals to closed propositions: lit(s => bot) = -lit(s), and
/// every other proposition gets the next variable on first sight.
class LiteralMap {
public:
    explicit LiteralMap(const TermStore& st) : st_(st) {}

    Lit lit_of(TermId p);
    /// The proposition a variable was allocated for.
    TermId prop_of(std::uint32_t var) const { return props_.at(var - 1); }
    std::uint32_t num_vars() const { return static_cast<std::uint32_t>(props_.size()); }

private:
    const TermStore& st_;
    std::vector<std::int32_t> var_of_; // indexed by TermId, 0 = none
    std::vector<TermId> props_;
};

/// Clauses stored back to back in one buffer.
class ClauseArena {
public:
    std::uint32_t push(std::span<const Lit> lits) {
        lits_.insert(lits_.end(), lits.begin(), lits.end());
        start_.push_back(lits_.size());
        return static_cast<std::uint32_t>(start_.size() - 2);
    }
    std::span<Lit> operator[](std::size_t i) { return {lits_.data() + start_[i], start_[i + 1] - start_[i]}; }
    std::span<const Lit> operator[](std::size_t i) const {
        return {lits_.data() + start_[i], start_[i + 1] - start_[i]};
    }
    std::size_t size() const { return start_.size() - 1; }
    bool empty() const { return size() == 0; }

private:
    std::vector<Lit> lits_;
    std::vector<std::size_t> start_ = std::vector<std::size_t>(1, 0);
};

enum class Propagation { NoConflict, Conflict };
enum class SatStatus { Sat, Unsat, Unknown };

/// DPLL with two watched literals and chronological backtracking.
///
/// Clauses are added incrementally at decision level 0 and unit-propagated
/// immediately. solve(false) reports only conflicts already evident from
/// propagation; solve(true) decides exact satisfiability. The last model is
/// kept and extended while new clauses stay satisfiable under it, so a
/// search only runs when an added clause falsifies the model.
class SatSolver {
public:
    Propagation add_clause(std::span<const Lit> lits);
    Propagation add_clause(std::initializer_list<Lit> lits) {
        return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    SatStatus solve(bool search_allowed,
                    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

    /// Level-0 conflict, or a completed search proved unsatisfiability.
    bool unsat() const { return unsat_; }
    /// Value fixed at level 0: +1 true, -1 false, 0 open.
    int fixed_value(Lit l) const;

    std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assign_.size()) - 1; }
    std::size_t num_clauses() const { return clauses_.size(); }
    /// Clauses as added (after tautology removal and duplicate merging).
    const ClauseArena& clauses() const { return original_; }
    std::uint64_t decisions() const { return decisions_; }
    std::uint64_t searches() const { return searches_; }

    void write_dimacs(std::ostream& os) const;

private:
    static std::uint32_t code(Lit l) { return l.var() * 2 + (l.negative() ? 1 : 0); }
    int value(Lit l) const {
        int v = assign_[l.var()];
        return l.negative() ? -v : v;
    }
    void ensure_var(std::uint32_t v);
    void assign(Lit l);
    /// Propagates pending assignments; returns false on conflict.
    bool propagate();
    void backtrack_to(std::size_t level);
    SatStatus search(std::optional<std::chrono::steady_clock::time_point> deadline);
    void note_model_clause(std::span<const Lit> lits);

    struct Decision {
        std::size_t trail_pos;
        Lit lit;
        bool flipped;
    };

    ClauseArena clauses_; // watched copies, watches at [0], [1]
    ClauseArena original_;
    std::vector<std::vector<std::uint32_t>> watches_ = std::vector<std::vector<std::uint32_t>>(2);
    std::vector<std::int8_t> assign_ = std::vector<std::int8_t>(1, 0);
    std::vector<Lit> trail_;
    std::size_t qhead_ = 0;
    std::vector<Decision> decisions_stack_;
    std::uint32_t next_var_hint_ = 1;
    bool unsat_ = false;

    std::vector<std::int8_t> model_ = std::vector<std::int8_t>(1, 0);
    bool model_valid_ = true;

    std::uint64_t decisions_ = 0;
    std::uint64_t searches_ = 0;
};

} // namespace tabhol
