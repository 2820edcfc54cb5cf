#include "tabhol/bench.hpp"

#include <algorithm>
#include <ostream>

#include "tabhol/church.hpp"

namespace tabhol {

BenchItem file_item(const std::filesystem::path& path, ParseOptions opts) {
    return BenchItem{path.filename().string(),
                     [path, opts](TermStore& st) { return parse_problem_file(st, path, opts); }};
}

BenchItem church_item(int n) {
    return BenchItem{"C" + std::to_string(n), [n](TermStore& st) { return gen_church_eq(st, n); }};
}

std::vector<BenchRow> run_bench(const std::vector<BenchItem>& items, const BenchOptions& opts) {
    std::vector<BenchRow> rows;
    for (const auto& item : items) {
        BenchRow row{item.name, "Error", 0, 0, {}};
        try {
            for (int rep = 0; rep < std::max(1, opts.repeats); ++rep) {
                ScheduleResult r = opts.mode.empty() ? run_schedule(item.load, default_schedule(), opts.timeout)
                                                     : run_mode(item.load, opts.mode, opts.timeout);
                auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(r.result.elapsed);
                if (rep == 0 || elapsed < row.best) row.best = elapsed;
                row.status = to_string(r.result.status);
                row.steps = r.result.steps;
            }
            row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(row.best).count();
        } catch (const std::exception&) {
            row = BenchRow{item.name, "Error", 0, 0, {}};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "problem,status,steps,millis\n";
    for (const auto& r : rows) os << r.problem << ',' << r.status << ',' << r.steps << ',' << r.millis << '\n';
}

} // namespace tabhol
