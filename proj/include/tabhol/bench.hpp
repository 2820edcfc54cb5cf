#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tabhol/schedule.hpp"

namespace tabhol {

struct BenchRow {
    std::string problem;
    std::string status;
    std::uint64_t steps = 0;
    std::int64_t millis = 0;
    /// Best-of-repeats wall time, unrounded.
    std::chrono::nanoseconds best{0};
};

struct BenchItem {
    std::string name;
    ProblemLoader load;
};

BenchItem file_item(const std::filesystem::path& path, ParseOptions opts = {});
BenchItem church_item(int n);

struct BenchOptions {
    /// Empty: the default schedule.
    std::string mode;
    std::chrono::nanoseconds timeout = std::chrono::seconds(10);
    int repeats = 3;
};

/// One row per item, in input order. Loader or engine errors give status Error.
std::vector<BenchRow> run_bench(const std::vector<BenchItem>& items, const BenchOptions& opts);

/// Header `problem,status,steps,millis`, then one line per row.
void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace tabhol
