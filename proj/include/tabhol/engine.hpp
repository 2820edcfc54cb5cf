#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tabhol/flags.hpp"
#include "tabhol/sat.hpp"
#include "tabhol/term_store.hpp"

namespace tabhol {

enum class CommandKind : std::uint8_t { ProcessProp, Instantiate, Mate, Confront, DefaultInst };

const char* to_string(CommandKind k);

/// a, b are TermId payloads, except DefaultInst where a is a TyId.
struct Command {
    CommandKind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::int64_t priority = 0;
    std::uint64_t seq = 0;
};

enum class Rule : std::uint8_t {
    Assert,
    Bottom,
    Closure,
    Implication,
    NegImplication,
    Instantiate,
    NegForall,
    EqFun,
    NeqFun,
    EqProp,
    NeqProp,
    Mate,
    Confront,
    Decompose,
    Choice,
};

const char* to_string(Rule r);

struct ClauseRecord {
    Rule rule;
    std::vector<Lit> lits;
};

struct TraceEntry {
    std::uint64_t step;
    Command command;
    /// Propositions derived by this command, in derivation order.
    std::vector<TermId> produced;
    /// Fresh constant created by this command, if any.
    std::optional<TermId> fresh;
};

/// Insertion-ordered set of terms.
class TermSet {
public:
    bool insert(TermId t) {
        if (!members_.insert(t).second) return false;
        order_.push_back(t);
        return true;
    }
    bool contains(TermId t) const { return members_.contains(t); }
    bool empty() const { return order_.empty(); }
    std::size_t size() const { return order_.size(); }
    auto begin() const { return order_.begin(); }
    auto end() const { return order_.end(); }
    const std::vector<TermId>& items() const { return order_; }

private:
    std::vector<TermId> order_;
    std::unordered_set<TermId> members_;
};

struct BranchState {
    std::unordered_set<TermId> processed;
    std::unordered_map<TyId, TermSet> instantiations;
    std::unordered_map<TyId, TermSet> processed_foralls;
    std::unordered_map<TyId, TermSet> diseq_sides;
    /// Keyed by the head term of the atom's spine.
    std::unordered_map<TermId, TermSet> pos_atoms, neg_atoms;
    std::unordered_map<TyId, TermSet> pos_eqns, diseqs;
    std::unordered_map<TyId, TermId> defaults;
    /// (forall, witness) pairs whose Instantiate command has run.
    std::unordered_set<std::uint64_t> executed_instantiations;
    std::uint32_t fresh_counter = 0;
    std::uint64_t steps = 0;
};

enum class StepOutcome { Progress, QueueEmpty, Refuted };
enum class Status { Theorem, GaveUp, Timeout };

const char* to_string(Status s);

struct SearchResult {
    Status status = Status::GaveUp;
    std::uint64_t steps = 0;
    std::chrono::nanoseconds elapsed{0};
};

struct EngineOptions {
    bool record_trace = false;
    bool record_clauses = false;
    /// Called after every dispatched command.
    std::function<void(const TraceEntry&)> on_trace;
    /// Stop with GaveUp after this many steps; 0 = unlimited.
    std::uint64_t step_limit = 0;
    /// Polled once per step; when set the search stops with Timeout.
    const std::atomic<bool>* cancel = nullptr;
};

/// Ground tableau search over one branch set, closed by the SAT core.
///
/// Every rule application emits clauses {-principal, conclusions...}.
/// Only asserted propositions get unit clauses; derived propositions are
/// reachable solely through those clauses, so every SAT model is a branch.
class Engine {
public:
    Engine(TermStore& st, FlagMap flags, EngineOptions opts = {});

    /// Unit clause for p, and ProcessProp(p) if unseen.
    void assert_prop(TermId p);
    void assert_prop(TermId p, std::int64_t priority);
    StepOutcome step();
    /// Asserts props and steps until refuted, the queue empties, or the budget runs out.
    SearchResult search(std::span<const TermId> props, std::chrono::nanoseconds budget);

    bool refuted() const { return sat_.unsat(); }
    Lit lit(TermId p) { return lits_.lit_of(p); }
    const BranchState& state() const { return state_; }
    const SatSolver& sat() const { return sat_; }
    const LiteralMap& literals() const { return lits_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    const std::vector<ClauseRecord>& clause_log() const { return clause_log_; }
    /// Queued entries; a pair cursor counts once however many pairs it has left.
    std::size_t queue_size() const { return queue_.size(); }
    const FlagMap& flags() const { return flags_; }
    TermStore& store() { return st_; }
    const TermStore& store() const { return st_; }

    static std::uint64_t pair_key(TermId a, TermId b) { return std::uint64_t{a.id} << 32 | b.id; }

private:
    /// Which partner list a pair cursor walks.
    enum class Side : std::uint8_t { None, Forall, Witness, PosAtom, NegAtom, Eqn, Diseq };

    /// A queued command. Pair commands are cursors: `a` is paired with entries
    /// [next, limit) of the partner list selected by side and key, one per
    /// dispatch, keeping (priority, seq) so the order matches eager enqueueing.
    struct Pending {
        CommandKind kind;
        Side side;
        std::uint32_t a;
        std::uint32_t key;
        std::uint32_t next;
        std::uint32_t limit;
        std::int64_t priority;
        std::uint64_t seq;
    };

    struct Later {
        bool operator()(const Pending& x, const Pending& y) const {
            return x.priority != y.priority ? x.priority > y.priority : x.seq > y.seq;
        }
    };

    struct Priorities {
        std::int64_t atom, alpha, forall, beta, instantiate, mate, confront, default_inst, aging;
    };

    void enqueue(CommandKind kind, std::uint32_t a, std::uint32_t b, std::int64_t priority);
    /// Pairs `a` with the first `limit` members of a partner list.
    void enqueue_pairs(CommandKind kind, Side side, std::uint32_t a, std::uint32_t key, std::size_t limit,
                       std::int64_t priority);
    const TermSet& partners(Side side, std::uint32_t key);
    void emit(Rule rule, std::vector<Lit> lits);
    void derive(TermId p);
    std::int64_t process_priority(TermId p) const;
    TermId fresh_const(TyId ty);
    void add_instantiation(TyId ty, TermId w);
    void harvest(TermId p);
    void rule_choice(TermId eps_app);

    void dispatch(const Command& c);
    void process(TermId p);
    void process_negated(TermId p, TermId s);
    void rule_forall(TermId p);
    void rule_instantiate(TermId forall, TermId w);
    void rule_neg_forall(TermId p, TermId all);
    void rule_equation(TermId p);
    void rule_disequation(TermId p, TermId eq);
    void rule_decompose(TermId p, TermId lhs, TermId rhs);
    void rule_atom(TermId p, bool positive, TermId atom);
    void rule_mate(TermId pos, TermId neg);
    void rule_confront(TermId eqn, TermId diseq);
    void rule_default_inst(TyId ty);
    void check_sat_after_step();

    TermStore& st_;
    FlagMap flags_;
    EngineOptions opts_;
    Priorities prio_;
    bool sat_delay_;
    std::int64_t sat_period_;
    bool enable_decompose_, enable_choice_, enable_neq_fun_, enable_mate_;

    LiteralMap lits_;
    SatSolver sat_;
    BranchState state_;

    std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
    std::unordered_set<std::uint64_t> enqueued_[5];
    std::uint64_t next_seq_ = 0;

    std::unordered_set<TermId> asserted_;
    std::unordered_set<TermId> closure_emitted_;
    std::unordered_set<TermId> choice_done_;
    std::vector<std::uint8_t> harvested_; // by TermId

    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::vector<TraceEntry> trace_;
    std::vector<ClauseRecord> clause_log_;
    TraceEntry* current_ = nullptr;
};

} // namespace tabhol
