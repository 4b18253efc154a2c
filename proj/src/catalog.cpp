#include "spectra/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<CatalogEntry> build_registry() {
  std::vector<CatalogEntry> r;
  r.push_back({"bender", "x^2 (ix)^eps; real positive spectrum for unbroken PT (real line valid for -1 < eps < 2)",
               "x^2*(i*x)^eps", Coordinate::x, DomainKind::line,
               {{"eps", 1.0, -1.0, 2.0, true, true, false}}, {}, false});
  r.push_back({"gen_oscillator", "(x - i eps)^2 + (alpha^2 - 1/4)/(x - i eps)^2, Laguerre eigenfunctions",
               "(x - i*eps)^2 + (alpha^2 - 1/4)/(x - i*eps)^2", Coordinate::x, DomainKind::line,
               {{"eps", 0.4, 0.0, 5.0, true, false, false}, {"alpha", 0.3, 0.0, 10.0, false, false, false}}, {},
               true});
  r.push_back({"shifted_anharmonic", "g0 (x + i eps)^(2n), coordinate-shifted anharmonic oscillator",
               "g0*(x + i*eps)^(2*n)", Coordinate::x, DomainKind::line,
               {{"g0", 1.0, 0.0, 100.0, true, false, false},
                {"eps", 0.5, -5.0, 5.0, false, false, false},
                {"n", 2.0, 1.0, 3.0, false, false, true}},
               {}, false});
  r.push_back({"nonpt_exact", "neither Hermitian nor PT symmetric; one exact state with E = 9 - k^2",
               "x^2 + 2*k*x - 4*k/x + 2/x^2 + (-4*k*x + 10 - 4*i)/(x^2 - i)", Coordinate::x, DomainKind::line,
               {{"k", 0.0, -3.0, 3.0, false, false, false}}, {}, true});
  r.push_back({"trapped_cot", "box [0, L] with cot potential; E = k^2 + eps^2 + omega, k = n pi / L",
               "omega^2*x^2 + 2*i*omega*eps*x - 2*k*(x*omega + i*eps)*cot(k*x)", Coordinate::x, DomainKind::box,
               {{"L", kPi, 0.0, 100.0, true, false, false},
                {"n", 1.0, 1.0, 50.0, false, false, true},
                {"eps", 0.3, -10.0, 10.0, false, false, false},
                {"omega", 1.0, 0.0, 10.0, false, false, false}},
               {"k"}, true});
  r.push_back({"imag_coulomb", "r^2 + 2 i alpha r - 2 i alpha (l+1)/r; E = 3 + 2l + alpha^2",
               "r^2 + 2*i*alpha*r - 2*i*alpha*(l + 1)/r", Coordinate::r, DomainKind::radial,
               {{"alpha", 0.5, -5.0, 5.0, false, false, false}, {"l", 0.0, 0.0, 10.0, false, false, true}}, {},
               true});
  return r;
}

double param(const Bindings& b, std::string_view name) {
  auto it = b.find(name);
  if (it == b.end()) throw Error(ErrorCode::invalid_parameter, "missing parameter '" + std::string(name) + "'");
  return it->second;
}

void check_quantum(std::string_view id, QuantumNumbers qn) {
  if (id != "gen_oscillator") return;
  if (qn.n < 0) throw Error(ErrorCode::invalid_parameter, "quantum number n must be >= 0");
  if (qn.q != 1 && qn.q != -1) throw Error(ErrorCode::invalid_parameter, "quasi-parity q must be +1 or -1");
}

}  // namespace

const std::vector<CatalogEntry>& list_entries() {
  static const std::vector<CatalogEntry> registry = build_registry();
  return registry;
}

const CatalogEntry& find_entry(std::string_view id) {
  for (const CatalogEntry& e : list_entries()) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::unknown_catalog_id, "unknown catalog id '" + std::string(id) + "'");
}

bool is_catalog_id(std::string_view id) {
  return std::any_of(list_entries().begin(), list_entries().end(),
                     [id](const CatalogEntry& e) { return e.id == id; });
}

Bindings resolve_parameters(const CatalogEntry& entry, const Bindings& overrides) {
  for (const auto& [name, value] : overrides) {
    if (std::find(entry.derived.begin(), entry.derived.end(), name) != entry.derived.end()) continue;
    const bool known = std::any_of(entry.parameters.begin(), entry.parameters.end(),
                                   [&](const ParameterInfo& p) { return p.name == name; });
    if (!known) {
      throw Error(ErrorCode::invalid_parameter, "'" + entry.id + "' has no parameter '" + name + "'");
    }
  }
  Bindings b;
  for (const ParameterInfo& p : entry.parameters) {
    auto it = overrides.find(p.name);
    const double v = it == overrides.end() ? p.default_value : it->second;
    const bool below = p.min_open ? !(v > p.min) : !(v >= p.min);
    const bool above = p.max_open ? !(v < p.max) : !(v <= p.max);
    if (below || above || (p.integer && v != std::round(v))) {
      throw Error(ErrorCode::invalid_parameter, "parameter '" + p.name + "' = " + std::to_string(v) +
                                                    " outside " + (p.min_open ? "(" : "[") + std::to_string(p.min) +
                                                    ", " + std::to_string(p.max) + (p.max_open ? ")" : "]") +
                                                    (p.integer ? " (integer)" : ""));
    }
    b[p.name] = v;
  }
  if (entry.id == "trapped_cot") b["k"] = param(b, "n") * kPi / param(b, "L");
  return b;
}

PotentialSpec catalog_potential(std::string_view id, const Bindings& overrides) {
  const CatalogEntry& e = find_entry(id);
  return make_potential(e.expression, resolve_parameters(e, overrides), e.coordinate);
}

std::size_t default_node_count(std::string_view id) { return find_entry(id).has_closed_form ? 2000 : 600; }

Grid default_grid(std::string_view id, const Bindings& params, std::size_t n) {
  const CatalogEntry& e = find_entry(id);
  switch (e.domain) {
    case DomainKind::box: return make_grid(0.0, param(params, "L"), n);
    case DomainKind::radial: return make_grid(0.0, 10.0, n);
    case DomainKind::line: break;
  }
  const std::size_t even = n % 2 == 0 ? n : n + 1;
  double half = 10.0;
  if (e.id == "nonpt_exact") half += std::abs(param(params, "k"));
  return make_grid(-half, half, even);
}

ComplexMatrix assemble_entry(const CatalogEntry& entry, const Bindings& params, const GridFunction& potential) {
  if (entry.domain == DomainKind::radial) {
    return assemble_radial(potential, static_cast<unsigned>(param(params, "l")));
  }
  return assemble_1d(potential);
}

double exact_energy(std::string_view id, const Bindings& params, QuantumNumbers qn) {
  const CatalogEntry& e = find_entry(id);
  if (!e.has_closed_form) throw Error(ErrorCode::no_closed_form, "'" + e.id + "' has no closed-form energy");
  check_quantum(id, qn);
  if (id == "nonpt_exact") {
    const double k = param(params, "k");
    return 9.0 - k * k;
  }
  if (id == "trapped_cot") {
    const double k = param(params, "n") * kPi / param(params, "L");
    return k * k + param(params, "eps") * param(params, "eps") + param(params, "omega");
  }
  if (id == "imag_coulomb") {
    const double a = param(params, "alpha");
    return 3.0 + 2.0 * param(params, "l") + a * a;
  }
  return 4.0 * qn.n + 2.0 - 2.0 * qn.q * param(params, "alpha");
}

cplx associated_laguerre(int n, double a, cplx z) {
  if (n < 0) throw Error(ErrorCode::invalid_parameter, "Laguerre degree must be >= 0");
  cplx prev(1.0, 0.0);
  if (n == 0) return prev;
  cplx cur = 1.0 + a - z;
  for (int k = 1; k < n; ++k) {
    const cplx next = ((2.0 * k + 1.0 + a - z) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

GridFunction exact_wavefunction(std::string_view id, const Bindings& params, QuantumNumbers qn, const Grid& grid) {
  const CatalogEntry& e = find_entry(id);
  if (!e.has_closed_form) throw Error(ErrorCode::no_closed_form, "'" + e.id + "' has no closed-form state");
  check_quantum(id, qn);
  const cplx I(0.0, 1.0);
  GridFunction psi(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    cplx v;
    if (id == "nonpt_exact") {
      const double k = param(params, "k");
      v = x * x * (1.0 + I * x * x) * std::exp(-x * x / 2.0 - k * x);
    } else if (id == "trapped_cot") {
      const double k = param(params, "n") * kPi / param(params, "L");
      const double om = param(params, "omega"), eps = param(params, "eps");
      v = std::exp(cplx(-om * x * x / 2.0, -eps * x)) * std::sin(k * x);
    } else if (id == "imag_coulomb") {
      const double l = param(params, "l"), a = param(params, "alpha");
      v = std::pow(x, l + 1.0) * std::exp(cplx(-x * x / 2.0, -a * x));
    } else {
      const double eps = param(params, "eps"), alpha = param(params, "alpha");
      const double order = -qn.q * alpha;
      const cplx z(x, -eps);
      v = std::exp((order + 0.5) * std::log(z) - z * z / 2.0) * associated_laguerre(qn.n, order, z * z);
    }
    psi.values[j] = v;
  }
  return psi;
}

double discrete_residual(const ComplexMatrix& h, const GridFunction& psi, cplx energy) {
  const std::vector<cplx> hp = h.multiply(psi.values);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    num += std::norm(hp[j] - energy * psi.values[j]);
    den += std::norm(psi.values[j]);
  }
  if (den == 0.0) throw Error(ErrorCode::zero_function, "residual of a zero state");
  return std::sqrt(num / den);
}

ValidationReport validate_entry(std::string_view id, const Bindings& params, QuantumNumbers qn,
                                const ValidationNumerics& numerics) {
  const CatalogEntry& entry = find_entry(id);
  ValidationReport rep;
  rep.id = entry.id;
  rep.parameters = resolve_parameters(entry, params);
  rep.quantum = qn;
  rep.grid = numerics.grid ? *numerics.grid : default_grid(id, rep.parameters, default_node_count(id));

  const PotentialSpec spec = make_potential(entry.expression, rep.parameters, entry.coordinate);
  const GridFunction potential = evaluate_on_grid(spec, rep.grid);
  const ComplexMatrix h = assemble_entry(entry, rep.parameters, potential);

  if (entry.has_closed_form) {
    const double e_exact = exact_energy(id, rep.parameters, qn);
    const GridFunction psi = exact_wavefunction(id, rep.parameters, qn, rep.grid);
    rep.exact_energy = e_exact;
    rep.wavefunction_residual = discrete_residual(h, psi, e_exact);
    rep.exact_state_exp_imag = expectation_imag_potential(normalize(psi), potential);

    const EigenPair pair = inverse_iteration(h, e_exact, numerics.solver);
    rep.energy_error = std::abs(pair.value - e_exact);
    rep.states.push_back(diagnose_state(h, pair, potential, numerics.reality_tol, 0));
    const DiagnosticsReport& s = rep.states.front();
    rep.passed = *rep.energy_error <= numerics.energy_tolerance && s.theorem_residual <= numerics.theorem_tolerance &&
                 s.identity_holds;
    return rep;
  }

  const Spectrum spectrum = eigen_decompose(h, numerics.solver);
  rep.passed = true;
  const std::size_t count = std::min(numerics.states, spectrum.pairs.size());
  for (std::size_t k = 0; k < count; ++k) {
    rep.states.push_back(diagnose_state(h, spectrum.pairs[k], potential, numerics.reality_tol, k));
    rep.passed = rep.passed && spectrum.pairs[k].converged && rep.states.back().identity_holds;
  }
  return rep;
}

}  // namespace spectra
