#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glstat {

/// Runs the command line on `args` (without the program name).
/// Returns 0 on success, 1 on domain or I/O errors and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_shortest(double v);

/// Single-column CSV, with or without an `x` header. Blank lines are skipped.
[[nodiscard]] std::vector<double> read_column_csv(std::istream& in);

}  // namespace glstat
