#include "tabhol/sat.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace tabhol {

Lit LiteralMap::lit_of(TermId p) {
    bool neg = false;
    while (auto inner = st_.negated(p)) {
        neg = !neg;
        p = *inner;
    }
    if (var_of_.size() <= p.id) var_of_.resize(std::max<std::size_t>(p.id + 1, var_of_.size() * 2), 0);
    std::int32_t& v = var_of_[p.id];
    if (v == 0) {
        props_.push_back(p);
        v = static_cast<std::int32_t>(props_.size());
    }
    return Lit{neg ? -v : v};
}

void SatSolver::ensure_var(std::uint32_t v) {
    if (v < assign_.size()) return;
    assign_.resize(v + 1, 0);
    model_.resize(v + 1, 0);
    watches_.resize(2 * (v + 1));
}

void SatSolver::assign(Lit l) {
    assign_[l.var()] = l.negative() ? -1 : 1;
    trail_.push_back(l);
}

int SatSolver::fixed_value(Lit l) const {
    if (l.var() >= assign_.size()) return 0;
    return value(l);
}

void SatSolver::note_model_clause(std::span<const Lit> lits) {
    if (!model_valid_) return;
    auto model_value = [&](Lit l) {
        int v = model_[l.var()];
        return l.negative() ? -v : v;
    };
    for (Lit l : lits)
        if (model_value(l) == 1) return;
    for (Lit l : lits) {
        if (model_[l.var()] == 0) {
            model_[l.var()] = l.negative() ? -1 : 1;
            return;
        }
    }
    model_valid_ = false;
}

Propagation SatSolver::add_clause(std::span<const Lit> input) {
    std::vector<Lit> lits;
    lits.reserve(input.size());
    for (Lit l : input) {
        if (l.value == 0) throw std::invalid_argument("literal 0 is not allowed");
        if (std::find(lits.begin(), lits.end(), -l) != lits.end()) return unsat_ ? Propagation::Conflict
                                                                                 : Propagation::NoConflict;
        if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(l);
    }
    for (Lit l : lits) ensure_var(l.var());
    original_.push(lits);
    if (unsat_) return Propagation::Conflict;
    note_model_clause(lits);

    std::vector<Lit> open;
    for (Lit l : lits) {
        int v = value(l);
        if (v == 1) return Propagation::NoConflict; // satisfied at level 0 for good
        if (v == 0) open.push_back(l);
    }
    if (open.empty()) {
        unsat_ = true;
        return Propagation::Conflict;
    }
    if (open.size() == 1) {
        std::size_t before = trail_.size();
        assign(open[0]);
        bool ok = propagate();
        for (std::size_t k = before; k < trail_.size(); ++k) {
            Lit l = trail_[k];
            std::int8_t want = l.negative() ? -1 : 1;
            if (model_[l.var()] == 0)
                model_[l.var()] = want;
            else if (model_[l.var()] != want)
                model_valid_ = false;
        }
        if (!ok) {
            unsat_ = true;
            return Propagation::Conflict;
        }
        return Propagation::NoConflict;
    }
    // watched copy: the two open literals first
    std::vector<Lit> watched = open;
    for (Lit l : lits)
        if (value(l) == -1) watched.push_back(l);
    std::uint32_t ci = clauses_.push(watched);
    watches_[code(watched[0])].push_back(ci);
    watches_[code(watched[1])].push_back(ci);
    return Propagation::NoConflict;
}

bool SatSolver::propagate() {
    while (qhead_ < trail_.size()) {
        Lit falselit = -trail_[qhead_++];
        auto& ws = watches_[code(falselit)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            std::uint32_t ci = ws[i++];
            std::span<Lit> c = clauses_[ci];
            if (c[0] == falselit) std::swap(c[0], c[1]);
            if (value(c[0]) == 1) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != -1) {
                    std::swap(c[1], c[k]);
                    watches_[code(c[1])].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = ci;
            if (value(c[0]) == -1) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return false;
            }
            assign(c[0]);
        }
        ws.resize(j);
    }
    return true;
}

void SatSolver::backtrack_to(std::size_t level) {
    while (decisions_stack_.size() > level) {
        std::size_t pos = decisions_stack_.back().trail_pos;
        for (std::size_t k = pos; k < trail_.size(); ++k) {
            std::uint32_t v = trail_[k].var();
            assign_[v] = 0;
            next_var_hint_ = std::min(next_var_hint_, v);
        }
        trail_.resize(pos);
        decisions_stack_.pop_back();
    }
    qhead_ = std::min(qhead_, trail_.size());
}

SatStatus SatSolver::solve(bool search_allowed, std::optional<std::chrono::steady_clock::time_point> deadline) {
    if (unsat_) return SatStatus::Unsat;
    if (!search_allowed || model_valid_) return SatStatus::Sat;
    return search(deadline);
}

SatStatus SatSolver::search(std::optional<std::chrono::steady_clock::time_point> deadline) {
    ++searches_;
    next_var_hint_ = 1;
    std::uint64_t ticks = 0;
    for (;;) {
        if (deadline && (++ticks & 15) == 0 && std::chrono::steady_clock::now() > *deadline) {
            backtrack_to(0);
            return SatStatus::Unknown;
        }
        if (!propagate()) {
            while (!decisions_stack_.empty() && decisions_stack_.back().flipped) backtrack_to(decisions_stack_.size() - 1);
            if (decisions_stack_.empty()) {
                unsat_ = true;
                return SatStatus::Unsat;
            }
            Lit d = decisions_stack_.back().lit;
            backtrack_to(decisions_stack_.size() - 1);
            decisions_stack_.push_back(Decision{trail_.size(), -d, true});
            assign(-d);
            continue;
        }
        while (next_var_hint_ < assign_.size() && assign_[next_var_hint_] != 0) ++next_var_hint_;
        if (next_var_hint_ >= assign_.size()) {
            model_ = assign_;
            model_valid_ = true;
            backtrack_to(0);
            return SatStatus::Sat;
        }
        ++decisions_;
        Lit d{static_cast<std::int32_t>(next_var_hint_)};
        decisions_stack_.push_back(Decision{trail_.size(), d, false});
        assign(d);
    }
}

void SatSolver::write_dimacs(std::ostream& os) const {
    os << "p cnf " << num_vars() << ' ' << original_.size() << '\n';
    for (std::size_t i = 0; i < original_.size(); ++i) {
        for (Lit l : original_[i]) os << l.value << ' ';
        os << "0\n";
    }
}

} // namespace tabhol
