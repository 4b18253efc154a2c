#include "spectra/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectra/error.hpp"

namespace spectra {

std::string_view to_string(Reality r) { return r == Reality::real ? "real" : "complex"; }

double expectation_imag_potential(const GridFunction& psi, const GridFunction& potential) {
  if (!(psi.grid == potential.grid)) {
    throw Error(ErrorCode::grid_mismatch, "state and potential live on different grids");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) s += std::norm(psi.values[j]) * potential.values[j].imag();
  return psi.grid.spacing() * s;
}

cplx rayleigh_quotient(const ComplexMatrix& h, const GridFunction& psi) {
  if (psi.size() != h.size()) throw Error(ErrorCode::dimension_mismatch, "state length differs from matrix size");
  double denom = 0.0;
  for (const cplx& z : psi.values) denom += std::norm(z);
  if (denom == 0.0) throw Error(ErrorCode::zero_function, "Rayleigh quotient of a zero vector");
  const std::vector<cplx> hp = h.multiply(psi.values);
  cplx num{};
  for (std::size_t j = 0; j < psi.size(); ++j) num += std::conj(psi.values[j]) * hp[j];
  return num / denom;
}

GridFunction probability_current(const GridFunction& psi) {
  GridFunction j(psi.grid);
  const double h = psi.grid.spacing();
  for (std::size_t k = 1; k + 1 < psi.size(); ++k) {
    const cplx slope = psi.values[k + 1] - psi.values[k - 1];
    j.values[k] = cplx(std::imag(std::conj(psi.values[k]) * slope) / h, 0.0);
  }
  return j;
}

std::optional<double> density_parity_deviation(const GridFunction& psi) {
  if (!psi.grid.symmetric()) return std::nullopt;
  double dev = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    dev = std::max(dev, std::abs(std::norm(psi.values[psi.grid.mirror(k)]) - std::norm(psi.values[k])));
  }
  return dev;
}

bool is_real_energy(cplx e, double reality_tol) {
  return std::abs(e.imag()) <= reality_tol * std::max(1.0, std::abs(e.real()));
}

SpectrumPartition classify_spectrum(std::span<const cplx> values, double reality_tol) {
  SpectrumPartition part;
  std::vector<std::size_t> upper, lower;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (is_real_energy(values[k], reality_tol)) {
      part.real.push_back(k);
    } else if (values[k].imag() > 0.0) {
      upper.push_back(k);
    } else {
      lower.push_back(k);
    }
  }
  std::vector<bool> taken(values.size(), false);
  for (std::size_t u : upper) {
    const cplx target = std::conj(values[u]);
    const double window = 10.0 * reality_tol * std::max(1.0, std::abs(values[u]));
    std::size_t best = values.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t l : lower) {
      if (taken[l]) continue;
      const double d = std::abs(values[l] - target);
      if (d < best_dist) {
        best_dist = d;
        best = l;
      }
    }
    if (best < values.size() && best_dist <= window) {
      taken[best] = true;
      taken[u] = true;
      part.conjugate_pairs.emplace_back(u, best);
    }
  }
  for (std::size_t k : upper) {
    if (!taken[k]) part.unpaired.push_back(k);
  }
  for (std::size_t k : lower) {
    if (!taken[k]) part.unpaired.push_back(k);
  }
  std::sort(part.unpaired.begin(), part.unpaired.end());
  return part;
}

SpectrumPartition classify_spectrum(const Spectrum& spectrum, double reality_tol) {
  std::vector<cplx> values;
  values.reserve(spectrum.pairs.size());
  for (const EigenPair& p : spectrum.pairs) values.push_back(p.value);
  return classify_spectrum(values, reality_tol);
}

double theorem_bound(double residual, double matrix_norm) {
  return 10.0 * std::max(residual, std::numeric_limits<double>::epsilon()) * matrix_norm;
}

DiagnosticsReport diagnose_state(const ComplexMatrix& h, const EigenPair& pair, const GridFunction& potential,
                                 double reality_tol, std::size_t index) {
  if (pair.vector.size() != potential.size()) {
    throw Error(ErrorCode::grid_mismatch, "eigenvector length differs from the potential grid");
  }
  DiagnosticsReport rep;
  rep.index = index;
  rep.energy = pair.value;
  rep.eig_residual = pair.residual;

  const GridFunction raw(potential.grid, pair.vector);
  rep.norm = norm(raw);
  const GridFunction psi = normalize(raw);
  rep.exp_imag_potential = expectation_imag_potential(psi, potential);
  rep.theorem_residual = std::abs(pair.value.imag() - rep.exp_imag_potential);

  const GridFunction current = probability_current(psi);
  for (const cplx& z : current.values) rep.max_flux = std::max(rep.max_flux, std::abs(z.real()));
  rep.density_parity_deviation = density_parity_deviation(psi);
  rep.classification = is_real_energy(pair.value, reality_tol) ? Reality::real : Reality::complex;
  rep.identity_holds = rep.theorem_residual <= theorem_bound(pair.residual, h.frobenius_norm());
  return rep;
}

std::vector<DiagnosticsReport> verify_reality_theorem(const ComplexMatrix& h, const Spectrum& spectrum,
                                                      const GridFunction& potential, double reality_tol) {
  std::vector<DiagnosticsReport> reports;
  reports.reserve(spectrum.pairs.size());
  for (std::size_t k = 0; k < spectrum.pairs.size(); ++k) {
    reports.push_back(diagnose_state(h, spectrum.pairs[k], potential, reality_tol, k));
  }
  return reports;
}

}  // namespace spectra
