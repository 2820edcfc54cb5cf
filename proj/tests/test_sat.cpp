#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "tabhol/engine.hpp"
#include "tabhol/schedule.hpp"
#include "tabhol/tptp.hpp"

namespace tabhol {
namespace {

Lit L(int v) { return Lit{v}; }

struct Props {
    TermStore st;
    TermId a, b, c;
    Props() {
        TyId o = st.types().prop();
        a = st.mk_const(st.names().intern("a"), o);
        b = st.mk_const(st.names().intern("b"), o);
        c = st.mk_const(st.names().intern("c"), o);
    }
};

TEST(LiteralMap, NegationIsMinus) {
    Props p;
    LiteralMap lits(p.st);
    Lit a = lits.lit_of(p.a);
    EXPECT_EQ(lits.lit_of(p.st.mk_neg(p.a)), -a);
    EXPECT_EQ(lits.lit_of(p.st.mk_neg(p.st.mk_neg(p.a))), a);
}

TEST(LiteralMap, DenseFirstSightAllocation) {
    Props p;
    LiteralMap lits(p.st);
    EXPECT_EQ(lits.lit_of(p.st.mk_neg(p.b)).value, -1);
    EXPECT_EQ(lits.lit_of(p.a).value, 2);
    EXPECT_EQ(lits.lit_of(p.c).value, 3);
    EXPECT_EQ(lits.lit_of(p.b).value, 1);
    EXPECT_EQ(lits.num_vars(), 3U);
    EXPECT_EQ(lits.prop_of(1), p.b);
}

TEST(LiteralMap, BottomAndTopShareAVariable) {
    Props p;
    LiteralMap lits(p.st);
    EXPECT_EQ(lits.lit_of(p.st.mk_top()), -lits.lit_of(p.st.mk_bot()));
}

TEST(SatSolver, UnitThenComplementConflicts) {
    SatSolver s;
    EXPECT_EQ(s.add_clause({L(1)}), Propagation::NoConflict);
    EXPECT_EQ(s.add_clause({L(-1)}), Propagation::Conflict);
    EXPECT_TRUE(s.unsat());
}

TEST(SatSolver, BinaryClauseBecomesUnit) {
    SatSolver s;
    EXPECT_EQ(s.add_clause({L(1), L(2)}), Propagation::NoConflict);
    EXPECT_EQ(s.add_clause({L(-1)}), Propagation::NoConflict);
    EXPECT_EQ(s.fixed_value(L(2)), 1);
    EXPECT_EQ(s.fixed_value(L(-2)), -1);
}

TEST(SatSolver, ClosureClauseAgainstAssertedDisequation) {
    TermStore st;
    TyId i = st.types().base(st.names().intern("$i"));
    TermId c = st.mk_const(st.names().intern("c"), i);
    TermId neq = st.mk_neq(c, c);
    LiteralMap lits(st);
    SatSolver s;
    EXPECT_EQ(s.add_clause({-lits.lit_of(neq)}), Propagation::NoConflict);
    EXPECT_EQ(s.add_clause({lits.lit_of(neq)}), Propagation::Conflict);
}

TEST(SatSolver, EmptySetIsSat) {
    SatSolver s;
    EXPECT_EQ(s.solve(true), SatStatus::Sat);
    EXPECT_EQ(s.solve(false), SatStatus::Sat);
}

TEST(SatSolver, FourClausesNeedSearch) {
    SatSolver s;
    s.add_clause({L(1), L(2)});
    s.add_clause({L(-1), L(2)});
    s.add_clause({L(1), L(-2)});
    s.add_clause({L(-1), L(-2)});
    EXPECT_EQ(s.solve(false), SatStatus::Sat);
    EXPECT_FALSE(s.unsat());
    EXPECT_EQ(s.solve(true), SatStatus::Unsat);
    EXPECT_TRUE(s.unsat());
}

TEST(SatSolver, TautologiesAreDropped) {
    SatSolver s;
    s.add_clause({L(1), L(-1), L(2)});
    EXPECT_TRUE(s.clauses().empty());
    s.add_clause({L(3), L(3), L(4)});
    ASSERT_EQ(s.clauses().size(), 1U);
    EXPECT_EQ(s.clauses()[0].size(), 2U);
}

TEST(SatSolver, ZeroLiteralRejected) { EXPECT_THROW(SatSolver{}.add_clause({L(0)}), std::invalid_argument); }

TEST(SatSolver, AgreesWithTruthTableOracle) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 1000; ++round) {
        int nvars = std::uniform_int_distribution<int>(1, 12)(rng);
        auto clauses = oracle::random_clauses(rng, nvars);
        SatSolver s;
        // interleave solves so the model-reuse path is exercised
        for (std::size_t k = 0; k < clauses.size(); ++k) {
            s.add_clause(clauses[k]);
            if (k % 3 == 0) s.solve(true);
        }
        bool expect = oracle::brute_force_sat(clauses, nvars);
        ASSERT_EQ(s.solve(true) == SatStatus::Sat, expect) << "round " << round;
        if (!expect) {
            ASSERT_TRUE(s.unsat());
        }
    }
}

TEST(SatSolver, PropagateOnlyNeverClaimsFalseUnsat) {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 300; ++round) {
        int nvars = std::uniform_int_distribution<int>(1, 10)(rng);
        auto clauses = oracle::random_clauses(rng, nvars);
        SatSolver s;
        for (const auto& c : clauses) s.add_clause(c);
        if (s.solve(false) == SatStatus::Unsat) {
            ASSERT_FALSE(oracle::brute_force_sat(clauses, nvars));
        }
    }
}

TEST(SatSolver, UnsatIsMonotone) {
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 50) {
        auto clauses = oracle::random_clauses(rng, 6);
        SatSolver s;
        for (const auto& c : clauses) s.add_clause(c);
        if (s.solve(true) != SatStatus::Unsat) continue;
        ++checked;
        for (const auto& c : oracle::random_clauses(rng, 8)) {
            s.add_clause(c);
            ASSERT_EQ(s.solve(true), SatStatus::Unsat);
            ASSERT_EQ(s.solve(false), SatStatus::Unsat);
        }
    }
}

TEST(SatSolver, Deterministic) {
    std::mt19937_64 rng(11);
    auto clauses = oracle::random_clauses(rng, 12);
    auto run = [&] {
        SatSolver s;
        std::vector<int> trace;
        for (const auto& c : clauses) {
            trace.push_back(static_cast<int>(s.add_clause(c)));
            trace.push_back(static_cast<int>(s.solve(true)));
        }
        trace.push_back(static_cast<int>(s.decisions()));
        return trace;
    };
    EXPECT_EQ(run(), run());
}

TEST(SatSolver, DeadlineReturnsUnknown) {
    // pigeonhole 9 into 8: hard for DPLL without learning
    SatSolver s;
    auto v = [](int p, int h) { return Lit{p * 8 + h + 1}; };
    for (int p = 0; p < 9; ++p) {
        std::vector<Lit> c;
        for (int h = 0; h < 8; ++h) c.push_back(v(p, h));
        s.add_clause(c);
    }
    for (int h = 0; h < 8; ++h)
        for (int p = 0; p < 9; ++p)
            for (int q = p + 1; q < 9; ++q) s.add_clause({-v(p, h), -v(q, h)});
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(20);
    EXPECT_EQ(s.solve(true, deadline), SatStatus::Unknown);
    EXPECT_FALSE(s.unsat());
}

TEST(SatSolver, DimacsDump) {
    SatSolver s;
    s.add_clause({L(1), L(-2)});
    s.add_clause({L(2)});
    std::ostringstream os;
    s.write_dimacs(os);
    EXPECT_EQ(os.str(), "p cnf 2 2\n1 -2 0\n2 0\n");
}

TEST(SatSolver, ClosedWalkthroughTableauReplaysUnsat) {
    TermStore st;
    Problem prob = parse_problem_file(st, TABHOL_SOURCE_DIR "/problems/sev241_5.p");
    auto props = negate_conjecture(st, prob);
    EngineOptions opts;
    opts.record_clauses = true;
    Engine eng(st, bundled_modes().at("basic"), opts);
    ASSERT_EQ(eng.search(props, std::chrono::seconds(5)).status, Status::Theorem);
    SatSolver replay;
    for (const auto& rec : eng.clause_log()) replay.add_clause(rec.lits);
    EXPECT_EQ(replay.solve(true), SatStatus::Unsat);
}

} // namespace
} // namespace tabhol
