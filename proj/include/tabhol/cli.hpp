#pragma once

#include <iosfwd>

namespace tabhol {

/// The prover command line. Returns 0 on Theorem, 1 on GaveUp/Timeout, 2 on error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The benchmark command line: CSV rows on `out`.
int bench_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tabhol
