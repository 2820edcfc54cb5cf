#include "tabhol/engine.hpp"

#include <stdexcept>
#include <string>

namespace tabhol {

const char* to_string(CommandKind k) {
    switch (k) {
    case CommandKind::ProcessProp: return "ProcessProp";
    case CommandKind::Instantiate: return "Instantiate";
    case CommandKind::Mate: return "Mate";
    case CommandKind::Confront: return "Confront";
    case CommandKind::DefaultInst: return "DefaultInst";
    }
    return "?";
}

const char* to_string(Rule r) {
    switch (r) {
    case Rule::Assert: return "assert";
    case Rule::Bottom: return "bottom";
    case Rule::Closure: return "closure";
    case Rule::Implication: return "implication";
    case Rule::NegImplication: return "neg_implication";
    case Rule::Instantiate: return "instantiate";
    case Rule::NegForall: return "neg_forall";
    case Rule::EqFun: return "eq_fun";
    case Rule::NeqFun: return "neq_fun";
    case Rule::EqProp: return "eq_o";
    case Rule::NeqProp: return "neq_o";
    case Rule::Mate: return "mate";
    case Rule::Confront: return "confront";
    case Rule::Decompose: return "decompose";
    case Rule::Choice: return "choice";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::Theorem: return "Theorem";
    case Status::GaveUp: return "GaveUp";
    case Status::Timeout: return "Timeout";
    }
    return "?";
}

Engine::Engine(TermStore& st, FlagMap flags, EngineOptions opts)
    : st_(st), flags_(std::move(flags)), opts_(std::move(opts)), lits_(st) {
    prio_ = Priorities{
        flags_.get_int("priority_atom"),        flags_.get_int("priority_alpha"),
        flags_.get_int("priority_forall"),      flags_.get_int("priority_beta"),
        flags_.get_int("priority_instantiate"), flags_.get_int("priority_mate"),
        flags_.get_int("priority_confront"),    flags_.get_int("default_inst_priority"),
        flags_.get_int("priority_aging"),
    };
    sat_delay_ = flags_.get_bool("sat_search_delay");
    sat_period_ = flags_.get_int("sat_search_period");
    enable_decompose_ = flags_.get_bool("enable_decompose");
    enable_choice_ = flags_.get_bool("enable_choice");
    enable_neq_fun_ = flags_.get_bool("enable_neq_fun");
    enable_mate_ = flags_.get_bool("enable_mate");
    emit(Rule::Bottom, {-lit(st_.mk_bot())});
}

// -- plumbing -------------------------------------------------------------

void Engine::enqueue(CommandKind kind, std::uint32_t a, std::uint32_t b, std::int64_t priority) {
    if (!enqueued_[static_cast<int>(kind)].insert(std::uint64_t{a} << 32 | b).second) return;
    if (prio_.aging > 0) priority += static_cast<std::int64_t>(state_.steps) / prio_.aging;
    queue_.push(Pending{kind, Side::None, a, b, 0, 0, priority, next_seq_++});
}

// Pairs are unique by construction: each side enters its list exactly once and
// is paired only with members that were there before it.
void Engine::enqueue_pairs(CommandKind kind, Side side, std::uint32_t a, std::uint32_t key, std::size_t limit,
                           std::int64_t priority) {
    if (limit == 0) return;
    if (prio_.aging > 0) priority += static_cast<std::int64_t>(state_.steps) / prio_.aging;
    queue_.push(Pending{kind, side, a, key, 0, static_cast<std::uint32_t>(limit), priority, next_seq_++});
}

const TermSet& Engine::partners(Side side, std::uint32_t key) {
    switch (side) {
    case Side::Forall: return state_.instantiations[TyId{key}];
    case Side::Witness: return state_.processed_foralls[TyId{key}];
    case Side::PosAtom: return state_.neg_atoms[TermId{key}];
    case Side::NegAtom: return state_.pos_atoms[TermId{key}];
    case Side::Eqn: return state_.diseqs[TyId{key}];
    case Side::Diseq: return state_.pos_eqns[TyId{key}];
    case Side::None: break;
    }
    throw std::logic_error("partners: not a pair cursor");
}

void Engine::emit(Rule rule, std::vector<Lit> lits) {
    sat_.add_clause(lits);
    if (opts_.record_clauses) clause_log_.push_back(ClauseRecord{rule, std::move(lits)});
}

void Engine::derive(TermId p) {
    if (current_) current_->produced.push_back(p);
    if (auto s = st_.negated(p); s && st_.tag(*s) == Tag::Eq && st_.left(*s) == st_.right(*s)) {
        if (closure_emitted_.insert(p).second) emit(Rule::Closure, {-lit(p)});
    }
    lit(p);
    enqueue(CommandKind::ProcessProp, p.id, 0, process_priority(p));
}

std::int64_t Engine::process_priority(TermId p) const {
    auto eq_priority = [&](TermId eq) {
        TyId side = st_.type_of(st_.left(eq));
        if (st_.types().is_prop(side)) return prio_.beta;
        if (st_.types().is_arrow(side)) return prio_.alpha;
        return prio_.atom;
    };
    if (auto s = st_.negated(p)) {
        switch (st_.tag(*s)) {
        case Tag::Imp:
        case Tag::All: return prio_.alpha;
        case Tag::Eq: return eq_priority(*s);
        default: return prio_.atom;
        }
    }
    switch (st_.tag(p)) {
    case Tag::Imp: return prio_.beta;
    case Tag::All: return prio_.forall;
    case Tag::Eq: return eq_priority(p);
    default: return prio_.atom;
    }
}

void Engine::assert_prop(TermId p) { assert_prop(p, process_priority(p)); }

void Engine::assert_prop(TermId p, std::int64_t priority) {
    if (!asserted_.insert(p).second) return;
    emit(Rule::Assert, {lit(p)});
    if (auto s = st_.negated(p); s && st_.tag(*s) == Tag::Eq && st_.left(*s) == st_.right(*s)) {
        if (closure_emitted_.insert(p).second) emit(Rule::Closure, {-lit(p)});
    }
    enqueue(CommandKind::ProcessProp, p.id, 0, priority);
}

TermId Engine::fresh_const(TyId ty) {
    std::string name;
    do {
        name = "#" + std::to_string(++state_.fresh_counter);
    } while (st_.names().contains(name));
    TermId c = st_.mk_const(st_.names().intern(name), ty);
    if (current_) current_->fresh = c;
    return c;
}

void Engine::add_instantiation(TyId ty, TermId w) {
    if (!state_.instantiations[ty].insert(w)) return;
    auto it = state_.processed_foralls.find(ty);
    if (it == state_.processed_foralls.end()) return;
    enqueue_pairs(CommandKind::Instantiate, Side::Witness, w.id, ty.id, it->second.size(), prio_.instantiate);
}

// Closed subterms of function type become instantiations; closed choice
// applications trigger the choice rule. Each node is visited once per engine.
void Engine::harvest(TermId p) {
    std::vector<TermId> stack{p};
    while (!stack.empty()) {
        TermId t = stack.back();
        stack.pop_back();
        if (harvested_.size() <= t.id) harvested_.resize(st_.size(), 0);
        if (harvested_[t.id]) continue;
        harvested_[t.id] = 1;
        const TermNode& n = st_.node(t);
        if (n.fdbv.empty()) {
            if (st_.types().is_arrow(n.ty)) add_instantiation(n.ty, t);
            if (enable_choice_ && n.tag == Tag::Ap && st_.tag(st_.left(t)) == Tag::Choice) rule_choice(t);
        }
        switch (n.tag) {
        case Tag::Ap:
        case Tag::Imp:
        case Tag::Eq:
            stack.push_back(TermId{n.right});
            stack.push_back(TermId{n.left});
            break;
        case Tag::Lam:
        case Tag::All: stack.push_back(TermId{n.left}); break;
        default: break;
        }
    }
}

void Engine::rule_choice(TermId eps_app) {
    if (!choice_done_.insert(eps_app).second) return;
    TyId carrier = st_.annot(st_.left(eps_app));
    TermId pred = st_.right(eps_app);
    TermId empty = st_.mk_all(carrier, st_.mk_neg(st_.mk_norm_ap(st_.shift(pred, 0, 1), st_.mk_db(0, carrier))));
    TermId chosen = st_.mk_norm_ap(pred, eps_app);
    emit(Rule::Choice, {lit(empty), lit(chosen)});
    derive(empty);
    derive(chosen);
}

// -- main loop ------------------------------------------------------------

StepOutcome Engine::step() {
    if (sat_.unsat()) return StepOutcome::Refuted;
    if (queue_.empty()) {
        return sat_.solve(true, deadline_) == SatStatus::Unsat ? StepOutcome::Refuted : StepOutcome::QueueEmpty;
    }
    Pending top = queue_.top();
    queue_.pop();
    Command c{top.kind, top.a, top.key, top.priority, top.seq};
    if (top.side != Side::None) {
        TermId other = partners(top.side, top.key).items()[top.next];
        bool principal_first = top.side == Side::Forall || top.side == Side::PosAtom || top.side == Side::Eqn;
        c.a = principal_first ? top.a : other.id;
        c.b = principal_first ? other.id : top.a;
        if (++top.next < top.limit) queue_.push(top);
    }
    ++state_.steps;
    TraceEntry entry{state_.steps, c, {}, std::nullopt};
    current_ = &entry;
    dispatch(c);
    current_ = nullptr;
    if (opts_.on_trace) opts_.on_trace(entry);
    if (opts_.record_trace) trace_.push_back(std::move(entry));
    check_sat_after_step();
    return sat_.unsat() ? StepOutcome::Refuted : StepOutcome::Progress;
}

void Engine::check_sat_after_step() {
    if (sat_.unsat()) return;
    if (!sat_delay_ || (sat_period_ > 0 && state_.steps % static_cast<std::uint64_t>(sat_period_) == 0))
        sat_.solve(true, deadline_);
}

SearchResult Engine::search(std::span<const TermId> props, std::chrono::nanoseconds budget) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    deadline_ = start + budget;
    auto finish = [&](Status s) { return SearchResult{s, state_.steps, clock::now() - start}; };
    for (TermId p : props) assert_prop(p);
    for (;;) {
        if (sat_.unsat()) return finish(Status::Theorem);
        if (opts_.step_limit != 0 && state_.steps >= opts_.step_limit) return finish(Status::GaveUp);
        if (opts_.cancel && opts_.cancel->load(std::memory_order_relaxed)) return finish(Status::Timeout);
        if (clock::now() > *deadline_) return finish(Status::Timeout);
        switch (step()) {
        case StepOutcome::Refuted: return finish(Status::Theorem);
        case StepOutcome::QueueEmpty:
            return finish(clock::now() > *deadline_ ? Status::Timeout : Status::GaveUp);
        case StepOutcome::Progress: break;
        }
    }
}

void Engine::dispatch(const Command& c) {
    switch (c.kind) {
    case CommandKind::ProcessProp: process(TermId{c.a}); break;
    case CommandKind::Instantiate: rule_instantiate(TermId{c.a}, TermId{c.b}); break;
    case CommandKind::Mate: rule_mate(TermId{c.a}, TermId{c.b}); break;
    case CommandKind::Confront: rule_confront(TermId{c.a}, TermId{c.b}); break;
    case CommandKind::DefaultInst: rule_default_inst(TyId{c.a}); break;
    }
}

// -- rules ----------------------------------------------------------------

void Engine::process(TermId p) {
    if (!state_.processed.insert(p).second) return;
    harvest(p);
    if (p == st_.mk_bot()) return;
    if (auto s = st_.negated(p)) {
        process_negated(p, *s);
        return;
    }
    switch (st_.tag(p)) {
    case Tag::Imp: {
        TermId a = st_.left(p), b = st_.right(p);
        emit(Rule::Implication, {-lit(p), -lit(a), lit(b)});
        derive(st_.mk_neg(a));
        derive(b);
        break;
    }
    case Tag::All: rule_forall(p); break;
    case Tag::Eq: rule_equation(p); break;
    default: rule_atom(p, true, p); break;
    }
}

void Engine::process_negated(TermId p, TermId s) {
    switch (st_.tag(s)) {
    case Tag::Bot: return;
    case Tag::Imp: {
        if (auto inner = st_.negated(s)) {
            // lit(~~a) = lit(a): same proposition, no clause
            derive(*inner);
            return;
        }
        TermId a = st_.left(s), b = st_.right(s);
        emit(Rule::NegImplication, {-lit(p), lit(a)});
        emit(Rule::NegImplication, {-lit(p), -lit(b)});
        derive(a);
        derive(st_.mk_neg(b));
        return;
    }
    case Tag::All: rule_neg_forall(p, s); return;
    case Tag::Eq: rule_disequation(p, s); return;
    default: rule_atom(p, false, s); return;
    }
}

void Engine::rule_forall(TermId p) {
    TyId ty = st_.annot(p);
    // seed before joining, so the seeds reach p only through the loop below
    if (st_.types().is_prop(ty)) {
        add_instantiation(ty, st_.mk_bot());
        add_instantiation(ty, st_.mk_top());
    }
    state_.processed_foralls[ty].insert(p);
    const TermSet& known = state_.instantiations[ty];
    enqueue_pairs(CommandKind::Instantiate, Side::Forall, p.id, ty.id, known.size(), prio_.instantiate);
    if (known.empty()) enqueue(CommandKind::DefaultInst, ty.id, 0, prio_.default_inst);
}

void Engine::rule_instantiate(TermId forall, TermId w) {
    state_.executed_instantiations.insert(pair_key(forall, w));
    TermId inst = st_.subst_norm(st_.left(forall), 0, w);
    emit(Rule::Instantiate, {-lit(forall), lit(inst)});
    derive(inst);
}

void Engine::rule_neg_forall(TermId p, TermId all) {
    TermId w = fresh_const(st_.annot(all));
    TermId c = st_.mk_neg(st_.subst_norm(st_.left(all), 0, w));
    emit(Rule::NegForall, {-lit(p), lit(c)});
    derive(c);
}

void Engine::rule_equation(TermId p) {
    TermId a = st_.left(p), b = st_.right(p);
    TyId ty = st_.type_of(a);
    const TypeTable& types = st_.types();
    if (types.is_prop(ty)) {
        emit(Rule::EqProp, {-lit(p), lit(a), -lit(b)});
        emit(Rule::EqProp, {-lit(p), -lit(a), lit(b)});
        derive(a);
        derive(b);
        derive(st_.mk_neg(a));
        derive(st_.mk_neg(b));
        return;
    }
    if (types.is_arrow(ty)) {
        TyId dom = types.dom(ty);
        TermId x = st_.mk_db(0, dom);
        TermId body = st_.mk_eq(st_.mk_norm_ap(st_.shift(a, 0, 1), x), st_.mk_norm_ap(st_.shift(b, 0, 1), x));
        TermId ext = st_.mk_all(dom, body);
        emit(Rule::EqFun, {-lit(p), lit(ext)});
        derive(ext);
        return;
    }
    if (a == b) return;
    state_.pos_eqns[ty].insert(p);
    enqueue_pairs(CommandKind::Confront, Side::Eqn, p.id, ty.id, state_.diseqs[ty].size(), prio_.confront);
}

void Engine::rule_disequation(TermId p, TermId eq) {
    TermId a = st_.left(eq), b = st_.right(eq);
    if (a == b) {
        if (closure_emitted_.insert(p).second) emit(Rule::Closure, {-lit(p)});
        return;
    }
    TyId ty = st_.type_of(a);
    const TypeTable& types = st_.types();
    if (types.is_prop(ty)) {
        emit(Rule::NeqProp, {-lit(p), lit(a), lit(b)});
        emit(Rule::NeqProp, {-lit(p), -lit(a), -lit(b)});
        derive(a);
        derive(b);
        derive(st_.mk_neg(a));
        derive(st_.mk_neg(b));
        return;
    }
    if (types.is_arrow(ty)) {
        if (!enable_neq_fun_) return;
        TermId w = fresh_const(types.dom(ty));
        TermId q = st_.mk_neq(st_.mk_norm_ap(a, w), st_.mk_norm_ap(b, w));
        emit(Rule::NeqFun, {-lit(p), lit(q)});
        derive(q);
        return;
    }
    state_.diseqs[ty].insert(p);
    for (TermId side : {a, b})
        if (state_.diseq_sides[ty].insert(side)) add_instantiation(ty, side);
    if (enable_decompose_) rule_decompose(p, a, b);
    enqueue_pairs(CommandKind::Confront, Side::Diseq, p.id, ty.id, state_.pos_eqns[ty].size(), prio_.confront);
}

void Engine::rule_decompose(TermId p, TermId lhs, TermId rhs) {
    auto [ha, as] = st_.head_spine(lhs);
    auto [hb, bs] = st_.head_spine(rhs);
    if (ha != hb || st_.tag(ha) != Tag::Const || as.empty() || as.size() != bs.size()) return;
    std::vector<Lit> clause{-lit(p)};
    std::vector<TermId> goals;
    for (std::size_t i = 0; i < as.size(); ++i) {
        goals.push_back(st_.mk_neq(as[i], bs[i]));
        clause.push_back(lit(goals.back()));
    }
    emit(Rule::Decompose, std::move(clause));
    for (TermId g : goals) derive(g);
}

void Engine::rule_atom(TermId p, bool positive, TermId atom) {
    if (!enable_mate_) return;
    auto [head, args] = st_.head_spine(atom);
    if (args.empty()) return;
    if (positive) {
        state_.pos_atoms[head].insert(p);
        enqueue_pairs(CommandKind::Mate, Side::PosAtom, p.id, head.id, state_.neg_atoms[head].size(), prio_.mate);
    } else {
        state_.neg_atoms[head].insert(p);
        enqueue_pairs(CommandKind::Mate, Side::NegAtom, p.id, head.id, state_.pos_atoms[head].size(), prio_.mate);
    }
}

void Engine::rule_mate(TermId pos, TermId neg) {
    auto [hp, ss] = st_.head_spine(pos);
    auto [hn, ts] = st_.head_spine(*st_.negated(neg));
    if (hp != hn || ss.size() != ts.size()) return;
    std::vector<Lit> clause{-lit(pos), -lit(neg)};
    std::vector<TermId> goals;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        goals.push_back(st_.mk_neq(ss[i], ts[i]));
        clause.push_back(lit(goals.back()));
    }
    emit(Rule::Mate, std::move(clause));
    for (TermId g : goals) derive(g);
}

// Branches {s!=u, t!=u} | {s!=v, t!=v}, as the four clauses of their CNF.
void Engine::rule_confront(TermId eqn, TermId diseq) {
    TermId s = st_.left(eqn), t = st_.right(eqn);
    TermId inner = *st_.negated(diseq);
    TermId u = st_.left(inner), v = st_.right(inner);
    TermId su = st_.mk_neq(s, u), sv = st_.mk_neq(s, v);
    TermId tu = st_.mk_neq(t, u), tv = st_.mk_neq(t, v);
    Lit e = -lit(eqn), d = -lit(diseq);
    emit(Rule::Confront, {e, d, lit(su), lit(sv)});
    emit(Rule::Confront, {e, d, lit(tu), lit(tv)});
    emit(Rule::Confront, {e, d, lit(su), lit(tv)});
    emit(Rule::Confront, {e, d, lit(tu), lit(sv)});
    derive(su);
    derive(tu);
    derive(sv);
    derive(tv);
}

void Engine::rule_default_inst(TyId ty) {
    if (!state_.instantiations[ty].empty()) return;
    TermId d = fresh_const(ty);
    state_.defaults.emplace(ty, d);
    add_instantiation(ty, d);
}

} // namespace tabhol
