#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "spectra/eigen.hpp"
#include "spectra/grid.hpp"

namespace spectra {

/// Default threshold (relative to max(1, |Re E|)) below which Im E counts as zero.
inline constexpr double kDefaultRealityTol = 1e-8;

enum class Reality { real, complex };

std::string_view to_string(Reality r);

/// Per-state observables of one eigenpair.
struct DiagnosticsReport {
  std::size_t index = 0;
  double norm = 0.0;                 // discrete norm of the stored eigenvector
  cplx energy;
  double exp_imag_potential = 0.0;   // <U^I> in the normalized state
  double theorem_residual = 0.0;     // |Im E - <U^I>|
  double eig_residual = 0.0;
  double max_flux = 0.0;
  std::optional<double> density_parity_deviation;  // only on symmetric grids
  Reality classification = Reality::real;
  /// theorem_residual <= 10 * residual * ||H||_F (residual floored at machine epsilon)
  bool identity_holds = false;
};

/// h * sum |psi_j|^2 Im U_j. Throws grid_mismatch.
double expectation_imag_potential(const GridFunction& psi, const GridFunction& potential);

/// (psi* H psi) / (psi* psi). Throws zero_function or dimension_mismatch.
cplx rayleigh_quotient(const ComplexMatrix& h, const GridFunction& psi);

/// J_j = 2 Im(conj(psi_j) psi'_j) with central differences at interior
/// nodes, stored in the real part. The two end nodes are left at zero.
GridFunction probability_current(const GridFunction& psi);

/// max_j | |psi(-x_j)|^2 - |psi(x_j)|^2 |, or nullopt on an asymmetric grid.
std::optional<double> density_parity_deviation(const GridFunction& psi);

struct SpectrumPartition {
  std::vector<std::size_t> real;                                // indices into the spectrum
  std::vector<std::pair<std::size_t, std::size_t>> conjugate_pairs;  // (Im > 0, Im < 0)
  std::vector<std::size_t> unpaired;
};

bool is_real_energy(cplx e, double reality_tol);

/// |Im E| <= tol * max(1, |Re E|) counts as real; the rest is greedily
/// matched into conjugate pairs within 10 * tol (same relative scale).
SpectrumPartition classify_spectrum(std::span<const cplx> values, double reality_tol = kDefaultRealityTol);
SpectrumPartition classify_spectrum(const Spectrum& spectrum, double reality_tol = kDefaultRealityTol);

/// One report per eigenpair of spectrum, which must come from h = assemble(potential).
std::vector<DiagnosticsReport> verify_reality_theorem(const ComplexMatrix& h, const Spectrum& spectrum,
                                                      const GridFunction& potential,
                                                      double reality_tol = kDefaultRealityTol);

/// Report for a single state.
DiagnosticsReport diagnose_state(const ComplexMatrix& h, const EigenPair& pair, const GridFunction& potential,
                                 double reality_tol = kDefaultRealityTol, std::size_t index = 0);

/// Bound used by DiagnosticsReport::identity_holds.
double theorem_bound(double residual, double matrix_norm);

}  // namespace spectra
