#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spectra/diagnostics.hpp"
#include "spectra/error.hpp"
#include "spectra/nls.hpp"

using namespace spectra;

namespace {

NlsProblem problem(double c, std::string_view gain, std::size_t n = 300) {
  return NlsProblem{make_potential("x^2", {}), c, make_potential(gain, {}), 1.0, make_grid(-8.0, 8.0, n)};
}

double grid_norm(const GridFunction& f) {
  const double n = norm(f);
  return n * n;
}

}  // namespace

TEST_CASE("linear limit reproduces the linear ground state") {
  const NlsProblem p = problem(0.0, "0");
  const NlsSolution s = solve_stationary(p, default_initial_state(p.grid));
  CHECK(s.converged);
  const ComplexMatrix h = assemble_1d(evaluate_on_grid(p.potential, p.grid));
  const Spectrum spectrum = eigen_decompose(h);
  CHECK(std::abs(s.energy - spectrum.pairs.front().value) <= 1e-8);
  CHECK(std::abs(s.energy - 1.0) < 2e-2);
  CHECK(nls_residual(p, s) <= 2.0 * s.residual + 1e-15);
  CHECK(grid_norm(s.psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("repulsive nonlinearity raises the energy to the energy-functional minimum") {
  const NlsProblem p = problem(1.0, "0");
  const NlsSolution s = solve_stationary(p, default_initial_state(p.grid));
  REQUIRE(s.converged);
  const NlsSolution lin = solve_stationary(problem(0.0, "0"), default_initial_state(p.grid));
  CHECK(std::abs(s.energy.imag()) <= 1e-10);
  CHECK(s.energy.real() > lin.energy.real());
  const double mu = oracle::gross_pitaevskii_mu([](double x) { return x * x; }, 1.0, -8.0, 8.0, 300);
  CHECK(std::abs(s.energy.real() - mu) <= 1e-8);
}

TEST_CASE("odd gain balances: real energy and zero mean gain") {
  const NlsProblem p = problem(1.0, "0.1*x");
  const NlsSolution s = solve_stationary(p, default_initial_state(p.grid));
  REQUIRE(s.converged);
  CHECK(std::abs(s.energy.imag()) <= 1e-6);
  CHECK(std::abs(s.exp_gain) <= 1e-6);
  CHECK(grid_norm(s.psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nls_residual(p, s) <= 2.0 * s.residual + 1e-15);

  // Gain-balance identity on the self-consistent effective operator.
  std::vector<double> rho(s.psi.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(s.psi.values[j]);
  const GridFunction base = evaluate_on_grid(p.potential, p.grid);
  const GridFunction gain = evaluate_on_grid(p.gain, p.grid);
  const ComplexMatrix heff = effective_hamiltonian(p, base, gain, rho);
  EigenPair pair{s.energy, s.psi.values};
  pair.residual = residual_norm(heff, pair);
  CHECK(std::abs(s.energy.imag() - s.exp_gain) <= theorem_bound(pair.residual, heff.frobenius_norm()));
  REQUIRE_FALSE(s.log.empty());
  CHECK(s.log.back().iteration == s.iterations);
}

TEST_CASE("target norm is honoured") {
  NlsProblem p = problem(0.5, "0");
  p.target_norm = 2.5;
  const NlsSolution s = solve_stationary(p, default_initial_state(p.grid));
  CHECK(s.converged);
  CHECK(grid_norm(s.psi) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("invalid problems are rejected") {
  const NlsProblem complex_gain = problem(1.0, "i*x");
  CHECK_THROWS_AS(solve_stationary(complex_gain, default_initial_state(complex_gain.grid)), Error);
  const NlsProblem p = problem(1.0, "0");
  NlsOptions bad;
  bad.mixing = 0.0;
  CHECK_THROWS_AS(solve_stationary(p, default_initial_state(p.grid), bad), Error);
  CHECK_THROWS_AS(solve_stationary(p, default_initial_state(make_grid(-8.0, 8.0, 100))), Error);
  CHECK_THROWS_AS(solve_stationary(p, GridFunction(p.grid)), Error);
}

TEST_CASE("iteration cap reports non-convergence without throwing") {
  const NlsProblem p = problem(5.0, "0");
  NlsOptions opts;
  opts.max_iterations = 2;
  const NlsSolution s = solve_stationary(p, default_initial_state(p.grid), opts);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 2);
}
