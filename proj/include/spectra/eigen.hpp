#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spectra/grid.hpp"

namespace spectra {

struct SolverOptions {
  int max_sweeps = 60;             // QR sweeps allowed per eigenvalue
  double deflation_tol = 1e-13;    // relative subdiagonal deflation threshold
  double inverse_tol = 1e-12;      // inverse-iteration stopping residual
  std::uint64_t seed = 20240611;   // start-vector seed
};

/// Residual threshold for an eigenpair to count as converged.
inline constexpr double kConvergedResidual = 1e-10;

struct EigenPair {
  cplx value;
  /// Unit Euclidean norm, phase aligned (largest entry real positive).
  std::vector<cplx> vector;
  /// ||M v - E v||_2 / (||M||_F ||v||_2)
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct Spectrum {
  /// Ascending Re(value), ties by ascending Im(value).
  std::vector<EigenPair> pairs;
  int qr_sweeps = 0;
  int deflations = 0;
  double matrix_norm = 0.0;  // ||M||_F
};

/// All eigenvalues of M (with multiplicity): balancing, Householder
/// reduction to Hessenberg form, single-shift complex QR with Wilkinson
/// shifts. Throws Error(non_convergence) naming the stuck subdiagonal.
std::vector<cplx> schur_eigenvalues(const ComplexMatrix& m, const SolverOptions& opts = {});

/// Eigenvalues via schur_eigenvalues, eigenvectors by inverse iteration on M.
/// Pairs that fail to converge are kept and flagged.
Spectrum eigen_decompose(const ComplexMatrix& m, const SolverOptions& opts = {});

/// Eigenpair nearest to shift. Banded matrices use O(n) tridiagonal solves.
/// start, when given, replaces the seeded random start vector.
/// Throws Error(non_convergence) after 200 iterations.
EigenPair inverse_iteration(const ComplexMatrix& m, cplx shift, const SolverOptions& opts = {},
                            std::span<const cplx> start = {});

/// ||M v - E v||_2 / (||M||_F ||v||_2). Throws dimension_mismatch.
double residual_norm(const ComplexMatrix& m, const EigenPair& pair);

/// Deterministic pseudo-random complex vector with entries in the unit square.
std::vector<cplx> seeded_vector(std::size_t n, std::uint64_t seed);

}  // namespace spectra
