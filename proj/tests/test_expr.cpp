#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spectra/catalog.hpp"
#include "spectra/error.hpp"
#include "spectra/expr.hpp"

using namespace spectra;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_failure;
}

cplx eval(std::string_view s, double x, const Bindings& b = {}) { return evaluate(parse(s), b, x); }

}  // namespace

TEST_CASE("parse: i*x is a product of the imaginary unit and the coordinate") {
  const Expr e = parse("i*x");
  const auto* bin = std::get_if<expr::Binary>(&e.root().data);
  REQUIRE(bin);
  CHECK(bin->op == expr::BinaryOp::mul);
  const auto* c = std::get_if<expr::Constant>(&bin->lhs->data);
  REQUIRE(c);
  CHECK(c->value == cplx(0.0, 1.0));
  const auto* v = std::get_if<expr::Variable>(&bin->rhs->data);
  REQUIRE(v);
  CHECK(v->symbol == "x");
}

TEST_CASE("parse: power family with a parameter") {
  const Expr e = parse("x^2*(i*x)^eps");
  CHECK(e.parameters() == std::set<std::string>{"eps"});
  const cplx v = evaluate(e, {{"eps", 1.0}}, 2.0);
  CHECK(std::abs(v - cplx(0.0, 8.0)) < 1e-14);
}

TEST_CASE("parse errors carry codes and offsets") {
  try {
    parse("2+*3");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.code() == ErrorCode::syntax_error);
    CHECK(e.offset() == 2);
  }
  CHECK(code_of([] { parse("foo(x)"); }) == ErrorCode::unknown_function);
  CHECK(code_of([] { parse("(x+1"); }) == ErrorCode::unbalanced_parentheses);
  CHECK(code_of([] { parse("x+1)"); }) == ErrorCode::unbalanced_parentheses);
  CHECK(code_of([] { parse("sin(x"); }) == ErrorCode::unbalanced_parentheses);
  CHECK(code_of([] { parse(""); }) == ErrorCode::syntax_error);
  CHECK(code_of([] { parse("x y"); }) == ErrorCode::syntax_error);
  CHECK(code_of([] { parse("1.2.3"); }) == ErrorCode::syntax_error);
  CHECK(code_of([] { parse("x $ 2"); }) == ErrorCode::syntax_error);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval("-x^2", 3.0) == cplx(-9.0));
  CHECK(eval("2^3^2", 0.0) == cplx(512.0));
  CHECK(eval("2*3+4", 0.0) == cplx(10.0));
  CHECK(eval("2+3*4", 0.0) == cplx(14.0));
  CHECK(eval("8/4/2", 0.0) == cplx(1.0));
  CHECK(eval("10-4-3", 0.0) == cplx(3.0));
  CHECK(eval("2^-1", 0.0) == cplx(0.5));
  CHECK(eval("--x", 2.0) == cplx(2.0));
  CHECK(eval("1.5e2 + 2E-1", 0.0) == cplx(150.2));
  CHECK(eval("r^2", 3.0) == cplx(9.0));
}

TEST_CASE("evaluate: complex arithmetic and functions") {
  CHECK(std::abs(eval("(x - i*0.5)^2", 1.0) - cplx(0.75, -1.0)) < 1e-15);
  CHECK(std::abs(eval("cot(2*x)", std::numbers::pi / 8) - 1.0) < 1e-14);
  CHECK(std::abs(eval("exp(i*x)", std::numbers::pi) + 1.0) < 1e-15);
  CHECK(std::abs(eval("sqrt(x)", -4.0) - cplx(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(eval("log(x)", -1.0) - cplx(0.0, std::numbers::pi)) < 1e-15);
  CHECK(std::abs(eval("abs(3 + 4*i)", 0.0) - 5.0) < 1e-15);
  CHECK(std::abs(eval("tan(x) - sin(x)/cos(x)", 0.7)) < 1e-15);
}

TEST_CASE("evaluate: singularities and missing bindings") {
  CHECK(code_of([] { eval("1/x", 0.0); }) == ErrorCode::evaluation_singularity);
  CHECK(code_of([] { eval("cot(x)", 0.0); }) == ErrorCode::evaluation_singularity);
  CHECK(code_of([] { eval("cot(x)", std::numbers::pi); }) == ErrorCode::evaluation_singularity);
  CHECK(code_of([] { eval("log(x)", 0.0); }) == ErrorCode::evaluation_singularity);
  CHECK(code_of([] { eval("x^(-1)", 0.0); }) == ErrorCode::evaluation_singularity);
  CHECK(code_of([] { eval("x^2 + k", 1.0); }) == ErrorCode::unbound_parameter);
  try {
    eval("1/(x-2)", 2.0);
  } catch (const SingularityError& e) {
    CHECK(e.coordinate() == 2.0);
  }
}

TEST_CASE("principal branch of complex powers") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> xs(0.01, 5.0), es(-0.9, 1.9);
  const Expr e = parse("(i*x)^eps");
  for (int t = 0; t < 100; ++t) {
    const double x = xs(gen), eps = es(gen);
    const cplx expected = std::pow(x, eps) * std::exp(cplx(0.0, eps * std::numbers::pi / 2));
    CHECK(std::abs(evaluate(e, {{"eps", eps}}, x) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    const cplx mirrored = std::pow(x, eps) * std::exp(cplx(0.0, -eps * std::numbers::pi / 2));
    CHECK(std::abs(evaluate(e, {{"eps", eps}}, -x) - mirrored) <= 1e-12 * std::max(1.0, std::abs(mirrored)));
  }
}

TEST_CASE("printed expressions reparse to equivalent trees") {
  std::vector<std::string> sources = {"x^2*(i*x)^eps", "-x^2 + 3*sin(x)/cos(2*x) - 4", "2^-x^2", "(1-i)*abs(x)^0.5",
                                      "exp(-x^2/2)*log(2+x^2)", "--x - -2.5e-1*x^3"};
  for (const CatalogEntry& e : list_entries()) sources.push_back(e.expression);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> xs(0.05, 3.0);
  for (const std::string& s : sources) {
    CAPTURE(s);
    const Expr a = parse(s);
    const Expr b = parse(to_string(a));
    CHECK(to_string(b) == to_string(a));
    Bindings bind;
    for (const std::string& p : a.parameters()) bind[p] = 0.37;
    bind["n"] = 2;
    bind["l"] = 1;
    int compared = 0;
    for (int t = 0; t < 100; ++t) {
      const double x = (t % 2 ? 1 : -1) * xs(gen);
      cplx va, vb;
      try {
        va = evaluate(a, bind, x);
      } catch (const SingularityError&) {
        continue;
      }
      vb = evaluate(b, bind, x);
      CHECK(std::abs(va - vb) <= 1e-12 * std::max(1.0, std::abs(va)));
      ++compared;
    }
    CHECK(compared >= 50);
  }
}

TEST_CASE("make_potential requires bindings for all parameters") {
  CHECK(code_of([] { make_potential("x^2 + k*x", {}); }) == ErrorCode::unbound_parameter);
  const PotentialSpec p = make_potential("x^2 + i*k*x", {{"k", 2.0}});
  CHECK(p.real_part(3.0) == 9.0);
  CHECK(p.imag_part(3.0) == 6.0);
}

TEST_CASE("evaluate_on_grid") {
  const Grid g = make_grid(-2.0, 2.0, 3);
  const GridFunction zero = evaluate_on_grid(make_potential("0", {}), g);
  for (cplx v : zero.values) CHECK(v == cplx{});
  const GridFunction sq = evaluate_on_grid(make_potential("x^2", {}), g);
  CHECK(sq.values == std::vector<cplx>{1.0, 0.0, 1.0});

  const PotentialSpec nonpt = catalog_potential("nonpt_exact", {{"k", 1.0}});
  try {
    evaluate_on_grid(nonpt, g);
    FAIL("expected a singularity");
  } catch (const SingularityError& e) {
    CHECK(e.code() == ErrorCode::evaluation_singularity);
    CHECK(e.node_index() == 1);
  }
}

TEST_CASE("analyze_symmetry: examples") {
  const Grid probe = make_grid(-5.0, 5.0, 400);
  const SymmetryReport sq = analyze_symmetry(make_potential("x^2", {}), probe, 1e-9);
  CHECK(sq.is_hermitian);
  CHECK(sq.is_pt_symmetric);
  CHECK(sq.imag_part_odd);

  const SymmetryReport ix = analyze_symmetry(make_potential("i*x", {}), probe, 1e-9);
  CHECK_FALSE(ix.is_hermitian);
  CHECK(ix.is_pt_symmetric);
  CHECK(ix.imag_part_odd);

  const SymmetryReport np = analyze_symmetry(catalog_potential("nonpt_exact", {{"k", 1.0}}), probe, 1e-9);
  CHECK_FALSE(np.is_hermitian);
  CHECK_FALSE(np.is_pt_symmetric);

  const SymmetryReport even_imag = analyze_symmetry(make_potential("x^2 + i*x^2", {}), probe, 1e-9);
  CHECK_FALSE(even_imag.imag_part_odd);
  CHECK_FALSE(even_imag.is_pt_symmetric);

  CHECK(code_of([] { analyze_symmetry(make_potential("x", {}), make_grid(0.0, 1.0, 10), 1e-9); }) ==
        ErrorCode::invalid_extent);
}

TEST_CASE("analyze_symmetry: singular probes are skipped and counted") {
  // 1/x is singular only at the origin, which a grid with odd n contains once.
  const SymmetryReport r = analyze_symmetry(make_potential("i/x", {}), make_grid(-1.0, 1.0, 41), 1e-9);
  CHECK(r.skipped == 1);
  CHECK(r.is_pt_symmetric);
  CHECK(code_of([] { analyze_symmetry(make_potential("1/(x-x)", {}), make_grid(-1.0, 1.0, 40), 1e-9); }) ==
        ErrorCode::evaluation_singularity);
}

TEST_CASE("catalog potentials reproduce their symmetry classes") {
  const Grid probe = make_grid(-3.0, 3.0, 400);
  for (const char* id : {"gen_oscillator", "shifted_anharmonic", "bender"}) {
    CAPTURE(id);
    CHECK(analyze_symmetry(catalog_potential(id), probe, 1e-9).is_pt_symmetric);
  }
  const SymmetryReport cot = analyze_symmetry(catalog_potential("trapped_cot"), make_grid(-3.0, 3.0, 400), 1e-9);
  CHECK(cot.is_pt_symmetric);
  CHECK_FALSE(cot.is_hermitian);
  for (double k : {0.5, 1.0, -2.0}) {
    const SymmetryReport r = analyze_symmetry(catalog_potential("nonpt_exact", {{"k", k}}), probe, 1e-9);
    CHECK_FALSE(r.is_hermitian);
    CHECK_FALSE(r.is_pt_symmetric);
  }
}
