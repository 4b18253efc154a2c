#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spectra/catalog.hpp"
#include "spectra/diagnostics.hpp"
#include "spectra/eigen.hpp"
#include "spectra/error.hpp"
#include "spectra/expr.hpp"

namespace spectra::cli {

enum class Command { solve, scan, check, catalog, nls };
enum class OutputFormat { csv, json };

struct GridSpec {
  double a = -10.0;
  double b = 10.0;
  std::size_t n = 1000;
  bool domain_given = false;
  bool n_given = false;
  bool box = false;  // domain came from {"box": {"L", "n"}}
};

struct BoundarySpec {
  enum class Kind { dirichlet, bloch, bloch_scan };
  Kind kind = Kind::dirichlet;
  double theta = 0.0;
  std::size_t count = 0;
};

struct ScanSpec {
  std::string param;
  std::vector<double> values;
  /// Lowest states (by Re E) kept per value; 0 keeps all.
  std::size_t states = 4;
};

struct NlsSpec {
  double c = 0.0;
  std::string gain = "0";
  double target_norm = 1.0;
  double mixing = 0.5;
  int max_iterations = 500;
  double tolerance = 1e-10;
};

struct RunConfig {
  Command command = Command::solve;
  std::string potential;      // expression text or catalog id
  bool from_catalog = false;
  Bindings bindings;
  Coordinate coordinate = Coordinate::x;
  unsigned l = 0;
  GridSpec grid;
  BoundarySpec boundary;
  SolverOptions solver;
  double reality_tol = kDefaultRealityTol;
  double symmetry_tol = 1e-9;
  std::optional<ScanSpec> scan;
  QuantumNumbers quantum;
  NlsSpec nls;
  std::string out_path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
};

/// Command-line flags that override config fields.
struct Overrides {
  std::optional<std::size_t> n;
  std::optional<std::pair<double, double>> domain;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
};

/// Validates a config document and applies defaults. Throws SchemaError
/// (with a JSON pointer to the field), or the expr/catalog error that the
/// potential triggered.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Executes the command. Primary output goes to config.out_path, or to out
/// when no path is set. Returns the exit status: 0 success, 2 validation
/// failure, 3 solver non-convergence, 1 other failures (with a JSON error
/// object on err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exit status for an error code.
int exit_status(ErrorCode code);

struct ScanRow {
  double value = 0.0;
  cplx energy;
  Reality classification = Reality::real;
};

/// CSV header `index,re_E,im_E,exp_UI,theorem_residual,eig_residual,max_flux,parity_dev,class`;
/// JSON is an array of objects with the same keys. Floats carry 17 significant digits.
void write_reports(std::ostream& out, const std::vector<DiagnosticsReport>& reports, OutputFormat format);
void write_outputs(const std::vector<DiagnosticsReport>& reports, OutputFormat format, const std::string& path);
std::vector<DiagnosticsReport> read_reports_json(std::istream& in);

/// Long-format rows `value,re_E,im_E,class`.
void write_scan(std::ostream& out, const std::vector<ScanRow>& rows, OutputFormat format);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace spectra::cli
