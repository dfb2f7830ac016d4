#pragma once

// The `erae` command line: eval, curve, oracle, verify. Kept as a library so
// tests can drive it with in-memory streams.

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "erae/linalg.hpp"
#include "erae/units.hpp"

namespace erae::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kDomain = 3,
  kFileParse = 4,
};

/// Bad flag combination or malformed argument value (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file (exit 4).
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SeriesKind { Pure, Werner, Isotropic };

/// One curve series, parsed from `kind:key=value,...`:
///   pure:C=0.5          werner:F=0.8[,d=3]          iso:F=0.7,d=3
/// On an F axis the series carries its own order instead (alpha=...), and
/// the pure series is swept over C.
struct SeriesSpec {
  SeriesKind kind = SeriesKind::Werner;
  std::size_t d = 2;
  double param = 0.0;  // C for pure, F otherwise (alpha axis only)
  std::optional<double> alpha;
  std::string label;
};

SeriesSpec parse_series(const std::string& text);

struct CurveTable {
  std::string axis;  // "alpha" or "F"
  std::vector<std::string> labels;
  std::vector<double> xs;
  std::vector<std::vector<double>> columns;  // columns[s][i] pairs with xs[i]
};

/// `points` log-spaced values on [lo, hi] with both ends exact.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Sign changes of `diff` between consecutive grid points, each refined by
/// bisection until the bracket is narrower than `tol`. Exact zeros on the
/// grid count only when the sign differs on both sides.
std::vector<double> find_crossings(const std::function<double(double)>& diff, const std::vector<double>& grid,
                                   double tol = 1e-8);

/// JSON {dimA, dimB, re: [[...]], im: [[...]]}; `im` may be omitted.
/// Throws FileError for I/O or shape problems and erae::Error when the
/// matrix is not a valid state.
DensityMatrix load_matrix_file(const std::string& path);

/// Entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SuiteReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

/// Names accepted by `verify --suite`.
const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name);

}  // namespace erae::cli
