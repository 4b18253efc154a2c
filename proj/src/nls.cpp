#include "spectra/nls.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/error.hpp"

namespace spectra {

namespace {

GridFunction scaled_to_norm(const GridFunction& f, double target_norm) {
  GridFunction out = normalize(f);
  const double s = std::sqrt(target_norm);
  for (cplx& z : out.values) z *= s;
  return out;
}

std::vector<double> density_of(const GridFunction& psi) {
  std::vector<double> rho(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) rho[j] = std::norm(psi.values[j]);
  return rho;
}

bool finite(const GridFunction& f) {
  return std::all_of(f.values.begin(), f.values.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double self_consistent_residual(const NlsProblem& p, const GridFunction& base, const GridFunction& gain,
                                const GridFunction& psi, cplx energy) {
  const ComplexMatrix h = effective_hamiltonian(p, base, gain, density_of(psi));
  const std::vector<cplx> hp = h.multiply(psi.values);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    num += std::norm(hp[j] - energy * psi.values[j]);
    den += std::norm(psi.values[j]);
  }
  return std::sqrt(num / den);
}

}  // namespace

ComplexMatrix effective_hamiltonian(const NlsProblem& p, const GridFunction& base, const GridFunction& gain,
                                    std::span<const double> density) {
  GridFunction u(base.grid);
  for (std::size_t j = 0; j < u.size(); ++j) {
    u.values[j] = base.values[j] + cplx(p.nonlinearity * density[j], gain.values[j].real());
  }
  return assemble_1d(u);
}

GridFunction default_initial_state(const Grid& grid) {
  GridFunction g(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    g.values[j] = std::exp(-x * x / 2.0);
  }
  return g;
}

NlsSolution solve_stationary(const NlsProblem& p, const GridFunction& init, const NlsOptions& opts) {
  if (!(opts.mixing > 0.0 && opts.mixing <= 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "mixing must lie in (0, 1]");
  }
  if (!(p.target_norm > 0.0)) throw Error(ErrorCode::invalid_parameter, "target norm must be positive");
  if (!(init.grid == p.grid)) throw Error(ErrorCode::grid_mismatch, "initial state is not on the problem grid");

  const GridFunction base = evaluate_on_grid(p.potential, p.grid);
  const GridFunction gain = evaluate_on_grid(p.gain, p.grid);
  for (const cplx& z : gain.values) {
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real()))) {
      throw Error(ErrorCode::invalid_parameter, "gain profile f must be real on the grid");
    }
  }

  GridFunction psi = scaled_to_norm(init, p.target_norm);
  std::vector<double> rho = density_of(psi);

  // Branch selection: smallest Re E of the initial effective operator.
  const std::vector<cplx> initial = schur_eigenvalues(effective_hamiltonian(p, base, gain, rho), opts.solver);
  cplx energy = *std::min_element(initial.begin(), initial.end(),
                                  [](cplx a, cplx b) { return a.real() < b.real(); });

  NlsSolution sol;
  const double h = p.grid.spacing();
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const ComplexMatrix heff = effective_hamiltonian(p, base, gain, rho);
    const EigenPair pair = inverse_iteration(heff, energy, opts.solver, psi.values);
    const GridFunction next = scaled_to_norm(GridFunction(p.grid, pair.vector), p.target_norm);
    if (!finite(next) || !std::isfinite(pair.value.real()) || !std::isfinite(pair.value.imag())) {
      throw Error(ErrorCode::divergence, "self-consistent iteration produced a non-finite state");
    }

    double diff = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) diff += std::norm(next.values[j] - psi.values[j]);
    NlsIterate step{it, pair.value, std::sqrt(h * diff), std::abs(pair.value - energy)};
    sol.log.push_back(step);

    for (std::size_t j = 0; j < rho.size(); ++j) {
      rho[j] = (1.0 - opts.mixing) * rho[j] + opts.mixing * std::norm(next.values[j]);
    }
    psi = next;
    energy = pair.value;
    sol.iterations = it;
    if (step.delta_psi <= opts.tolerance && step.delta_energy <= opts.tolerance) {
      sol.converged = true;
      break;
    }
  }

  const ComplexMatrix hself = effective_hamiltonian(p, base, gain, density_of(psi));
  cplx num{};
  double den = 0.0;
  const std::vector<cplx> hp = hself.multiply(psi.values);
  double weighted_gain = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    num += std::conj(psi.values[j]) * hp[j];
    den += std::norm(psi.values[j]);
    weighted_gain += std::norm(psi.values[j]) * gain.values[j].real();
  }
  sol.energy = num / den;
  sol.exp_gain = weighted_gain / den;
  sol.psi = psi;
  sol.residual = self_consistent_residual(p, base, gain, psi, sol.energy);
  return sol;
}

double nls_residual(const NlsProblem& p, const NlsSolution& s) {
  if (s.psi.size() != p.grid.size()) throw Error(ErrorCode::dimension_mismatch, "solution is not on the problem grid");
  if (norm(s.psi) == 0.0) throw Error(ErrorCode::zero_function, "residual of a zero state");
  const GridFunction base = evaluate_on_grid(p.potential, p.grid);
  const GridFunction gain = evaluate_on_grid(p.gain, p.grid);
  return self_consistent_residual(p, base, gain, s.psi, s.energy);
}

}  // namespace spectra
