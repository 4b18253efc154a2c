#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spectra/catalog.hpp"
#include "spectra/diagnostics.hpp"
#include "spectra/error.hpp"

using namespace spectra;

namespace {

struct Assembled {
  Grid grid;
  GridFunction u;
  ComplexMatrix h;
};

Assembled assemble(std::string_view src, const Bindings& b, double a, double bb, std::size_t n) {
  Assembled s{make_grid(a, bb, n), {}, {}};
  s.u = evaluate_on_grid(make_potential(src, b), s.grid);
  s.h = assemble_1d(s.u);
  return s;
}

double max_imag_ratio(const std::vector<cplx>& v) {
  double im = 0.0, mod = 0.0;
  for (cplx z : v) {
    im = std::max(im, std::abs(z.imag()));
    mod = std::max(mod, std::abs(z));
  }
  return im / mod;
}

}  // namespace

TEST_CASE("expectation_imag_potential") {
  const Grid g = make_grid(-3.0, 3.0, 101);
  GridFunction psi(g), odd(g), constant(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    psi.values[j] = std::exp(-x * x) * cplx(1.0, 0.3);
    odd.values[j] = cplx(x * x, std::sin(x) + x * x * x);
    constant.values[j] = cplx(1.0, 0.25);
  }
  CHECK(std::abs(expectation_imag_potential(normalize(psi), odd)) < 1e-16);
  CHECK(expectation_imag_potential(normalize(psi), constant) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(expectation_imag_potential(psi, GridFunction(make_grid(-3.0, 3.0, 100))), Error);

  const Bindings p = resolve_parameters(find_entry("gen_oscillator"), {{"eps", 0.4}, {"alpha", 0.3}});
  const Grid fine = make_grid(-10.0, 10.0, 2000);
  const GridFunction exact = normalize(exact_wavefunction("gen_oscillator", p, {0, 1}, fine));
  const GridFunction u = evaluate_on_grid(catalog_potential("gen_oscillator", p), fine);
  CHECK(std::abs(expectation_imag_potential(exact, u)) <= 1e-8);
}

TEST_CASE("rayleigh_quotient") {
  const ComplexMatrix lap = ComplexMatrix::tridiagonal({-1.0, -1.0}, {2.0, 2.0, 2.0}, {-1.0, -1.0});
  const Grid g3 = make_grid(0.0, 4.0, 3);
  const GridFunction v(g3, {0.5, std::sqrt(0.5), 0.5});
  CHECK(std::abs(rayleigh_quotient(lap, v) - (2.0 - std::sqrt(2.0))) < 1e-12);

  const ComplexMatrix d = ComplexMatrix::tridiagonal({0.0}, {cplx(0, 1), cplx(0, -1)}, {0.0});
  const GridFunction w(make_grid(0.0, 3.0, 2), {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  CHECK(std::abs(rayleigh_quotient(d, w)) < 1e-16);

  const Assembled real = assemble("x^2 + sin(x)", {}, -4.0, 4.0, 80);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> dist;
  GridFunction r(real.grid);
  for (cplx& z : r.values) z = cplx(dist(gen), dist(gen));
  CHECK(std::abs(rayleigh_quotient(real.h, r).imag()) <= 1e-13);

  CHECK_THROWS_AS(rayleigh_quotient(lap, GridFunction(g3)), Error);
}

TEST_CASE("probability_current") {
  const Grid g = make_grid(-2.0, 2.0, 50);
  GridFunction real(g);
  for (std::size_t j = 0; j < 50; ++j) real.values[j] = std::cos(g.node(j));
  for (cplx z : probability_current(real).values) CHECK(z == cplx{});

  const std::size_t n = 64;
  const Grid p = make_periodic_grid(0.0, 3.0, n);
  const double k = 2.0 * std::numbers::pi / 3.0, h = p.spacing();
  GridFunction wave(p);
  for (std::size_t j = 0; j < n; ++j) wave.values[j] = std::exp(cplx(0.0, k * p.node(j)));
  const GridFunction j = probability_current(wave);
  const double expected = 2.0 * k * std::sin(k * h) / (k * h);
  for (std::size_t i = 1; i + 1 < n; ++i) CHECK(std::abs(j.values[i].real() - expected) < 1e-12);
  CHECK(j.values.front() == cplx{});
  CHECK(j.values.back() == cplx{});

  const Assembled osc = assemble("x^2", {}, -8.0, 8.0, 300);
  for (double shift : {1.0, 5.0, 13.0}) {
    const EigenPair pair = inverse_iteration(osc.h, shift);
    const DiagnosticsReport rep = diagnose_state(osc.h, pair, osc.u);
    CHECK(rep.max_flux <= 1e-10);
  }
}

TEST_CASE("density_parity_deviation needs a symmetric grid") {
  const Grid s = make_grid(-1.0, 1.0, 10);
  GridFunction f(s);
  for (std::size_t j = 0; j < 10; ++j) f.values[j] = s.node(j);
  REQUIRE(density_parity_deviation(f).has_value());
  CHECK(*density_parity_deviation(f) < 1e-15);
  f.values[0] = 3.0;
  CHECK(*density_parity_deviation(f) > 1.0);
  CHECK_FALSE(density_parity_deviation(GridFunction(make_grid(0.0, 1.0, 10))).has_value());
}

TEST_CASE("classify_spectrum: examples") {
  const std::vector<cplx> a = {1.0, cplx(2.0, 1e-12)};
  const SpectrumPartition pa = classify_spectrum(a, 1e-9);
  CHECK(pa.real == std::vector<std::size_t>{0, 1});
  CHECK(pa.conjugate_pairs.empty());

  const std::vector<cplx> b = {cplx(2.0, 0.5), cplx(2.0, -0.5)};
  const SpectrumPartition pb = classify_spectrum(b);
  REQUIRE(pb.conjugate_pairs.size() == 1);
  CHECK(pb.conjugate_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(pb.unpaired.empty());

  const std::vector<cplx> c = {cplx(1.0, 0.5), cplx(3.0, -0.5), cplx(1.0, -0.5 - 1e-12)};
  const SpectrumPartition pc = classify_spectrum(c);
  CHECK(pc.conjugate_pairs.size() == 1);
  CHECK(pc.unpaired == std::vector<std::size_t>{1});

  CHECK(is_real_energy(cplx(100.0, 5e-7), 1e-8));
  CHECK_FALSE(is_real_energy(cplx(0.5, 5e-7), 1e-8));
}

TEST_CASE("PT-symmetric discretizations produce only conjugate pairs") {
  const Bindings p = resolve_parameters(find_entry("bender"), {{"eps", -0.5}});
  const Grid g = make_grid(-10.0, 10.0, 400);
  const GridFunction u = evaluate_on_grid(catalog_potential("bender", p), g);
  const ComplexMatrix h = assemble_1d(u);
  const Spectrum s = eigen_decompose(h);
  const SpectrumPartition part = classify_spectrum(s);
  CHECK_FALSE(part.conjugate_pairs.empty());
  CHECK(part.unpaired.empty());

  const std::vector<DiagnosticsReport> reps = verify_reality_theorem(h, s, u);
  for (const auto& [up, low] : part.conjugate_pairs) {
    for (std::size_t k : {up, low}) {
      if (!s.pairs[k].converged) continue;
      CHECK(std::abs(reps[k].exp_imag_potential) > kDefaultRealityTol);
      CHECK(std::abs(std::abs(reps[k].exp_imag_potential) - std::abs(s.pairs[k].value.imag())) <=
            theorem_bound(s.pairs[k].residual, s.matrix_norm));
    }
  }
}

TEST_CASE("verify_reality_theorem: Hermitian potential") {
  const Assembled a = assemble("x^2 + 0.5*cos(3*x)", {}, -8.0, 8.0, 200);
  const Spectrum s = eigen_decompose(a.h);
  const auto reps = verify_reality_theorem(a.h, s, a.u);
  REQUIRE(reps.size() == 200);
  for (std::size_t k = 0; k < reps.size(); ++k) {
    CHECK(std::abs(reps[k].energy.imag()) <= 1e-10);
    CHECK(reps[k].exp_imag_potential == 0.0);
    CHECK(reps[k].classification == Reality::real);
    CHECK(reps[k].identity_holds);
    CHECK(reps[k].index == k);
    CHECK(max_imag_ratio(s.pairs[k].vector) <= 1e-8);
  }
}

TEST_CASE("non-PT exact state: real energy, complex eigenfunction") {
  const Bindings p = {{"k", 0.0}};
  const Grid g = make_grid(-10.0, 10.0, 40000);
  const GridFunction u = evaluate_on_grid(catalog_potential("nonpt_exact", p), g);
  const ComplexMatrix h = assemble_1d(u);
  const EigenPair pair = inverse_iteration(h, 9.0);
  const DiagnosticsReport rep = diagnose_state(h, pair, u);
  CHECK(rep.theorem_residual <= 1e-8);
  CHECK(rep.classification == Reality::real);
  CHECK(rep.identity_holds);
  CHECK(max_imag_ratio(pair.vector) >= 0.1);
}

TEST_CASE("unbroken PT states have parity-symmetric densities") {
  const Bindings p = resolve_parameters(find_entry("gen_oscillator"), {});
  const Grid g = make_grid(-10.0, 10.0, 2000);
  const GridFunction u = evaluate_on_grid(catalog_potential("gen_oscillator", p), g);
  const ComplexMatrix h = assemble_1d(u);
  for (int n = 0; n < 3; ++n) {
    for (int q : {1, -1}) {
      const double e = exact_energy("gen_oscillator", p, {n, q});
      const DiagnosticsReport rep = diagnose_state(h, inverse_iteration(h, e), u);
      REQUIRE(rep.density_parity_deviation.has_value());
      CHECK(*rep.density_parity_deviation <= 1e-6);
      CHECK(rep.classification == Reality::real);
    }
  }
}

TEST_CASE("diagnose_state rejects mismatched potentials") {
  const Assembled a = assemble("x^2", {}, -1.0, 1.0, 10);
  EigenPair p{1.0, std::vector<cplx>(9, 1.0)};
  CHECK_THROWS_AS(diagnose_state(a.h, p, a.u), Error);
  CHECK(theorem_bound(0.0, 2.0) > 0.0);
  CHECK(theorem_bound(1e-6, 2.0) == doctest::Approx(2e-5));
}
