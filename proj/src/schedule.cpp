#include "tabhol/schedule.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace tabhol {

namespace {

struct BundledMode {
    const char* name;
    const char* text;
};

#include "bundled_modes.inc"

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

using clock = std::chrono::steady_clock;

std::vector<std::chrono::nanoseconds> slice_budgets(const Schedule& sched, std::chrono::nanoseconds wall) {
    std::vector<std::chrono::nanoseconds> out;
    double total = sched.total_seconds();
    for (const auto& e : sched.entries)
        out.emplace_back(static_cast<std::int64_t>(static_cast<double>(wall.count()) * (e.seconds / total)));
    return out;
}

/// A slice's store and engine; the engine refers to the store, so it is destroyed first.
struct Slice {
    TermStore st;
    std::optional<Engine> engine;
};

// Freeing millions of hash nodes takes around a second, so large slices are
// released on a detached thread and the result is returned without waiting.
constexpr std::size_t kBackgroundFreeNodes = 100000;

void retire(std::unique_ptr<Slice> slice) {
    if (slice->st.size() < kBackgroundFreeNodes) return;
    std::thread([s = std::move(slice)]() mutable { s.reset(); }).detach();
}

SearchResult run_slice(const ProblemLoader& load, const FlagMap& flags, std::chrono::nanoseconds budget,
                       const EngineOptions& eopts, std::size_t& store_size,
                       const std::function<void(Engine&)>& on_end = nullptr) {
    auto slice = std::make_unique<Slice>();
    Problem prob = load(slice->st);
    std::vector<TermId> props = negate_conjecture(slice->st, prob);
    Engine& engine = slice->engine.emplace(slice->st, flags, eopts);
    SearchResult r = engine.search(props, budget);
    store_size = slice->st.size();
    if (on_end) on_end(engine);
    retire(std::move(slice));
    return r;
}

} // namespace

double Schedule::total_seconds() const {
    double t = 0;
    for (const auto& e : entries) t += e.seconds;
    return t;
}

Schedule parse_schedule(std::string_view text) {
    Schedule sched;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);
        line = trim(line);
        if (line.empty()) continue;
        auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos)
            throw ModeParseError("expected 'mode seconds' on schedule line " + std::to_string(line_no));
        std::string_view secs = trim(line.substr(sp));
        double v = 0;
        auto [ptr, ec] = std::from_chars(secs.data(), secs.data() + secs.size(), v);
        if (ec != std::errc{} || ptr != secs.data() + secs.size() || !(v > 0))
            throw ModeParseError("bad seconds on schedule line " + std::to_string(line_no));
        sched.entries.push_back(ScheduleEntry{std::string(line.substr(0, sp)), v});
    }
    if (sched.entries.empty()) throw ModeParseError("empty schedule");
    return sched;
}

Schedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModeParseError("cannot open schedule file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_schedule(buf.str());
}

const std::map<std::string, FlagMap>& bundled_modes() {
    static const std::map<std::string, FlagMap> modes = [] {
        std::map<std::string, FlagMap> m;
        for (const auto& b : kBundledModes) m.emplace(b.name, parse_mode(b.text));
        return m;
    }();
    return modes;
}

std::string_view bundled_mode_text(std::string_view name) {
    for (const auto& b : kBundledModes)
        if (name == b.name) return b.text;
    return {};
}

const Schedule& default_schedule() {
    static const Schedule sched = parse_schedule(kDefaultSchedule);
    return sched;
}

FlagMap resolve_mode(std::string_view name_or_path) {
    const auto& modes = bundled_modes();
    if (auto it = modes.find(std::string(name_or_path)); it != modes.end()) return it->second;
    std::filesystem::path p(name_or_path);
    if (std::filesystem::exists(p)) return load_mode(p);
    throw ModeParseError("unknown mode '" + std::string(name_or_path) + "'");
}

ScheduleResult run_schedule(const ProblemLoader& load, const Schedule& sched, std::chrono::nanoseconds wall,
                            const RunOptions& opts) {
    std::vector<FlagMap> flags;
    for (const auto& e : sched.entries) flags.push_back(resolve_mode(e.mode));
    auto budgets = slice_budgets(sched, wall);
    const auto start = clock::now();
    const auto hard_stop = start + wall + opts.grace;
    ScheduleResult out;
    out.store_sizes.assign(sched.entries.size(), 0);

    if (!opts.parallel) {
        for (std::size_t i = 0; i < sched.entries.size(); ++i) {
            auto left = std::chrono::duration_cast<std::chrono::nanoseconds>(hard_stop - clock::now());
            if (left.count() <= 0) break;
            std::function<void(Engine&)> on_end;
            if (opts.on_slice_end)
                on_end = [&](Engine& e) { opts.on_slice_end(e, sched.entries[i].mode); };
            out.result =
                run_slice(load, flags[i], std::min(budgets[i], left), opts.engine, out.store_sizes[i], on_end);
            out.mode = sched.entries[i].mode;
            if (out.result.status == Status::Theorem) break;
        }
        out.result.elapsed = clock::now() - start;
        return out;
    }

    // Parallel: every mode runs at once with the whole wall budget; losers are cancelled.
    std::atomic<bool> cancel{false};
    std::mutex mu;
    std::optional<std::size_t> winner;
    std::vector<SearchResult> results(sched.entries.size());
    {
        std::vector<std::jthread> workers;
        for (std::size_t i = 0; i < sched.entries.size(); ++i) {
            workers.emplace_back([&, i] {
                EngineOptions eopts = opts.engine;
                eopts.cancel = &cancel;
                eopts.on_trace = nullptr;
                results[i] = run_slice(load, flags[i], wall, eopts, out.store_sizes[i]);
                if (results[i].status == Status::Theorem) {
                    std::lock_guard lock(mu);
                    if (!winner) winner = i;
                    cancel = true;
                }
            });
        }
    }
    std::size_t pick = winner.value_or(sched.entries.size() - 1);
    out.result = results[pick];
    out.mode = sched.entries[pick].mode;
    out.result.elapsed = clock::now() - start;
    return out;
}

ScheduleResult run_mode(const ProblemLoader& load, const std::string& mode, std::chrono::nanoseconds wall,
                        const RunOptions& opts) {
    Schedule single{{ScheduleEntry{mode, 1.0}}};
    RunOptions sequential = opts;
    sequential.parallel = false;
    return run_schedule(load, single, wall, sequential);
}

} // namespace tabhol
