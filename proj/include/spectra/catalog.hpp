#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/diagnostics.hpp"
#include "spectra/eigen.hpp"
#include "spectra/expr.hpp"
#include "spectra/grid.hpp"

namespace spectra {

enum class DomainKind { line, radial, box };

struct ParameterInfo {
  std::string name;
  double default_value = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool min_open = false;
  bool max_open = false;
  bool integer = false;
};

/// Quantum numbers of a closed-form family; q is the quasi-parity (+1 or -1).
struct QuantumNumbers {
  int n = 0;
  int q = 1;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::string expression;
  Coordinate coordinate = Coordinate::x;
  DomainKind domain = DomainKind::line;
  std::vector<ParameterInfo> parameters;
  /// Bindings computed from the others (trapped_cot: k = n pi / L).
  std::vector<std::string> derived;
  bool has_closed_form = false;
};

/// All entries in a stable order: bender, gen_oscillator, shifted_anharmonic,
/// nonpt_exact, trapped_cot, imag_coulomb.
const std::vector<CatalogEntry>& list_entries();

/// Throws Error(unknown_catalog_id).
const CatalogEntry& find_entry(std::string_view id);
bool is_catalog_id(std::string_view id);

/// Defaults merged with overrides, range-checked, derived bindings added.
/// Throws Error(invalid_parameter) for unknown names or out-of-range values.
Bindings resolve_parameters(const CatalogEntry& entry, const Bindings& overrides);

PotentialSpec catalog_potential(std::string_view id, const Bindings& overrides = {});

/// Grid the entry is validated on by default. Line entries get an even node
/// count so the origin is never a node.
Grid default_grid(std::string_view id, const Bindings& params, std::size_t n);

/// Default node count: 2000 with a closed form, 600 otherwise (full QR).
std::size_t default_node_count(std::string_view id);

/// Hamiltonian matrix for the entry's coordinate kind (radial entries add l(l+1)/r^2).
ComplexMatrix assemble_entry(const CatalogEntry& entry, const Bindings& params, const GridFunction& potential);

/// Closed-form energy. Throws Error(no_closed_form).
double exact_energy(std::string_view id, const Bindings& params, QuantumNumbers qn = {});

/// Unnormalized closed-form state sampled on grid (radial entries return u = rR).
GridFunction exact_wavefunction(std::string_view id, const Bindings& params, QuantumNumbers qn, const Grid& grid);

/// L_n^(a)(z) by the three-term recurrence.
cplx associated_laguerre(int n, double a, cplx z);

/// ||H psi - E psi||_2 / ||psi||_2
double discrete_residual(const ComplexMatrix& h, const GridFunction& psi, cplx energy);

struct ValidationNumerics {
  std::optional<Grid> grid;
  SolverOptions solver;
  double reality_tol = kDefaultRealityTol;
  double energy_tolerance = 2e-2;
  double theorem_tolerance = 1e-8;
  std::size_t states = 4;  // reported states for entries without a closed form
};

struct ValidationReport {
  std::string id;
  Bindings parameters;
  QuantumNumbers quantum;
  Grid grid;
  std::optional<double> exact_energy;
  std::optional<double> energy_error;
  std::optional<double> wavefunction_residual;
  std::optional<double> exact_state_exp_imag;
  /// The matched state for closed forms, else the lowest states by Re E.
  std::vector<DiagnosticsReport> states;
  bool passed = false;
};

/// Binds the closed forms to the numerical stack: residual of the exact
/// state, inverse iteration at the exact energy, theorem residual of the
/// matched state. Entries without a closed form get a full decomposition.
ValidationReport validate_entry(std::string_view id, const Bindings& params, QuantumNumbers qn = {},
                                const ValidationNumerics& numerics = {});

}  // namespace spectra
