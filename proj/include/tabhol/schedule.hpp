#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tabhol/engine.hpp"
#include "tabhol/flags.hpp"
#include "tabhol/tptp.hpp"

namespace tabhol {

struct ScheduleEntry {
    std::string mode;
    double seconds;
};

struct Schedule {
    std::vector<ScheduleEntry> entries;
    double total_seconds() const;
};

/// `modename seconds` lines; `%` starts a comment. Seconds must be positive.
Schedule parse_schedule(std::string_view text);
Schedule load_schedule(const std::filesystem::path& path);

/// The modes compiled into the binary, by name.
const std::map<std::string, FlagMap>& bundled_modes();
/// Source text of a bundled mode, or empty.
std::string_view bundled_mode_text(std::string_view name);
const Schedule& default_schedule();

/// A bundled mode name, else a mode file path.
FlagMap resolve_mode(std::string_view name_or_path);

/// Builds the problem into a fresh store; called once per slice.
using ProblemLoader = std::function<Problem(TermStore&)>;

struct RunOptions {
    bool parallel = false;
    EngineOptions engine;
    /// Extra wall time a slice may use to wind down.
    std::chrono::milliseconds grace{50};
    /// Called after each sequential slice with its engine and mode name.
    std::function<void(Engine&, const std::string&)> on_slice_end;
};

struct ScheduleResult {
    SearchResult result;
    /// Mode of the slice that produced the result.
    std::string mode;
    /// Node count of each slice's store after its run; 0 for slices never started.
    std::vector<std::size_t> store_sizes;
};

/// One fresh store and engine per slice, shares scaled to `wall`; first Theorem wins.
ScheduleResult run_schedule(const ProblemLoader& load, const Schedule& sched, std::chrono::nanoseconds wall,
                            const RunOptions& opts = {});

/// A single mode with the whole budget.
ScheduleResult run_mode(const ProblemLoader& load, const std::string& mode, std::chrono::nanoseconds wall,
                        const RunOptions& opts = {});

} // namespace tabhol
