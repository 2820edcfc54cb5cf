#include "tabhol/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

#include "tabhol/bench.hpp"
#include "tabhol/church.hpp"
#include "tabhol/schedule.hpp"

namespace tabhol {

namespace {

std::chrono::nanoseconds seconds_to_ns(double s) {
    return std::chrono::nanoseconds(static_cast<std::int64_t>(s * 1e9));
}

// CLI11 wants non-const argv.
std::vector<std::string> args_of(int argc, const char* const* argv) { return {argv, argv + argc}; }

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ground tableau prover for TPTP TH0 problems", "tabhol"};
    std::string file;
    double timeout = 10.0;
    std::string mode;
    std::string schedule_path;
    std::string tptp_root;
    bool trace = false;
    std::string dimacs_path;
    bool show_steps = false;
    bool parallel = false;
    app.add_option("FILE", file, "THF problem file")->required();
    app.add_option("-t,--timeout", timeout, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
    auto* mode_opt = app.add_option("--mode", mode, "run a single mode (bundled name or mode file)");
    app.add_option("--schedule", schedule_path, "schedule file (lines: mode seconds)")->excludes(mode_opt);
    app.add_option("--tptp-root", tptp_root, "directory include() paths are resolved against");
    app.add_flag("--trace", trace, "print one line per dispatched command");
    app.add_option("--dump-dimacs", dimacs_path, "write the final clause set of the last slice as DIMACS");
    app.add_flag("--steps", show_steps, "print steps, mode and time after the status line");
    app.add_flag("--parallel", parallel, "run the schedule's modes concurrently");

    auto args = args_of(argc, argv);
    std::vector<char*> cargv;
    for (auto& a : args) cargv.push_back(a.data());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "tabhol: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        ParseOptions popts;
        popts.tptp_root = tptp_root;
        popts.base_dir = std::filesystem::path(file).parent_path();
        if (!std::filesystem::exists(file)) throw std::runtime_error("no such file: " + file);
        ProblemLoader load = [&](TermStore& st) { return parse_problem_file(st, file, popts); };
        {
            // parse once up front so syntax errors surface as Error before any slice runs
            TermStore probe;
            load(probe);
        }

        RunOptions ropts;
        ropts.parallel = parallel;
        if (trace) {
            ropts.engine.on_trace = [&](const TraceEntry& e) {
                out << "% trace step=" << e.step << " seq=" << e.command.seq << " prio=" << e.command.priority
                    << ' ' << to_string(e.command.kind) << ' ' << e.command.a;
                if (e.command.kind != CommandKind::ProcessProp && e.command.kind != CommandKind::DefaultInst)
                    out << ' ' << e.command.b;
                out << '\n';
            };
        }
        if (!dimacs_path.empty()) {
            ropts.on_slice_end = [&](const Engine& e, const std::string&) {
                std::ofstream f(dimacs_path);
                e.sat().write_dimacs(f);
            };
        }

        ScheduleResult r;
        auto wall = seconds_to_ns(timeout);
        if (!mode.empty())
            r = run_mode(load, mode, wall, ropts);
        else
            r = run_schedule(load, schedule_path.empty() ? default_schedule() : load_schedule(schedule_path), wall,
                             ropts);

        out << "% SZS status " << to_string(r.result.status) << " for " << file << '\n';
        if (show_steps) {
            out << "% steps " << r.result.steps << " mode " << r.mode << " seconds "
                << std::chrono::duration<double>(r.result.elapsed).count() << '\n';
        }
        return r.result.status == Status::Theorem ? 0 : 1;
    } catch (const std::exception& e) {
        out << "% SZS status Error for " << file << '\n';
        err << "tabhol: " << e.what() << '\n';
        return 2;
    }
}

int bench_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmark harness: one CSV row per problem", "tabhol_bench"};
    std::vector<std::string> files;
    BenchOptions opts;
    double timeout = 10.0;
    std::vector<int> church_range;
    std::string tptp_root;
    app.add_option("FILES", files, "THF problem files");
    app.add_option("--mode", opts.mode, "single mode instead of the default schedule");
    app.add_option("-t,--timeout", timeout, "per-problem wall-clock limit in seconds")->check(CLI::PositiveNumber);
    app.add_option("--repeats", opts.repeats, "runs per problem; the best time is reported")->check(CLI::PositiveNumber);
    app.add_option("--church", church_range, "generate C^n for n in FROM..TO")->expected(2);
    app.add_option("--tptp-root", tptp_root, "directory include() paths are resolved against");

    auto args = args_of(argc, argv);
    std::vector<char*> cargv;
    for (auto& a : args) cargv.push_back(a.data());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "tabhol_bench: " << e.what() << '\n' << app.help();
        return 2;
    }
    opts.timeout = seconds_to_ns(timeout);
    if (church_range.size() == 2 && (church_range[0] < 1 || church_range[0] > church_range[1])) {
        err << "tabhol_bench: --church needs 1 <= FROM <= TO\n";
        return 2;
    }

    std::vector<BenchItem> items;
    if (church_range.size() == 2)
        for (int n = church_range[0]; n <= church_range[1]; ++n) items.push_back(church_item(n));
    for (const auto& f : files) {
        ParseOptions popts;
        popts.tptp_root = tptp_root;
        popts.base_dir = std::filesystem::path(f).parent_path();
        items.push_back(file_item(f, popts));
    }
    try {
        write_csv(out, run_bench(items, opts));
    } catch (const std::exception& e) {
        err << "tabhol_bench: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace tabhol
