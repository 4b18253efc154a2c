#pragma once

#include <vector>

#include "spectra/eigen.hpp"
#include "spectra/expr.hpp"
#include "spectra/grid.hpp"

namespace spectra {

/// Stationary nonlinear Schrodinger problem
///   (-d^2/dx^2 + U(x) + c|psi|^2 + i f(x)) psi = E psi
/// with a real gain/loss profile f (gain where f > 0).
struct NlsProblem {
  PotentialSpec potential;
  double nonlinearity = 0.0;
  PotentialSpec gain;
  double target_norm = 1.0;  // h * sum |psi_j|^2
  Grid grid;
};

struct NlsOptions {
  double mixing = 0.5;  // density mixing beta in (0, 1]
  int max_iterations = 500;
  double tolerance = 1e-10;
  SolverOptions solver;
};

struct NlsIterate {
  int iteration = 0;
  cplx energy;
  double delta_psi = 0.0;
  double delta_energy = 0.0;
};

struct NlsSolution {
  GridFunction psi;
  cplx energy;
  int iterations = 0;
  bool converged = false;
  /// ||(H0 + c|psi|^2 + i f) psi - E psi|| / ||psi||
  double residual = 0.0;
  /// <f> = sum |psi|^2 f / sum |psi|^2
  double exp_gain = 0.0;
  std::vector<NlsIterate> log;
};

/// Effective matrix H0 + diag(c|psi|^2 + i f) for a given density.
ComplexMatrix effective_hamiltonian(const NlsProblem& p, const GridFunction& base, const GridFunction& gain,
                                    std::span<const double> density);

/// Gaussian exp(-x^2/2) on the problem grid.
GridFunction default_initial_state(const Grid& grid);

/// Self-consistent field iteration with density mixing. Follows the branch
/// of smallest Re E. Non-convergence returns the last iterate with
/// converged = false; a non-finite iterate throws Error(divergence).
NlsSolution solve_stationary(const NlsProblem& p, const GridFunction& init, const NlsOptions& opts = {});

/// Recomputes the stationary residual from scratch.
double nls_residual(const NlsProblem& p, const NlsSolution& s);

}  // namespace spectra
