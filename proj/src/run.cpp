#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "spectra/cli.hpp"
#include "spectra/error.hpp"
#include "spectra/nls.hpp"

namespace spectra::cli {

namespace {

struct Problem {
  PotentialSpec potential;
  Grid grid;
  GridFunction samples;
  ComplexMatrix hamiltonian;
};

Bindings effective_bindings(const RunConfig& c, const Bindings& bindings) {
  return c.from_catalog ? resolve_parameters(find_entry(c.potential), bindings) : bindings;
}

PotentialSpec potential_of(const RunConfig& c, const Bindings& bindings) {
  if (c.from_catalog) return catalog_potential(c.potential, bindings);
  return make_potential(c.potential, bindings, c.coordinate);
}

Grid grid_of(const RunConfig& c, const Bindings& bindings, bool periodic) {
  if (periodic) {
    if (c.coordinate == Coordinate::r) throw Error(ErrorCode::invalid_parameter, "Bloch boundaries need a line domain");
    return make_periodic_grid(c.grid.a, c.grid.b, c.grid.n);
  }
  if (c.from_catalog && !c.grid.domain_given) return default_grid(c.potential, bindings, c.grid.n);
  return make_grid(c.grid.a, c.grid.b, c.grid.n);
}

unsigned angular_momentum(const RunConfig& c, const Bindings& bindings) {
  if (c.from_catalog && bindings.contains("l")) return static_cast<unsigned>(bindings.at("l"));
  return c.l;
}

Problem build(const RunConfig& c, const Bindings& raw, const BoundaryCondition& bc) {
  const Bindings bindings = effective_bindings(c, raw);
  const bool periodic = std::holds_alternative<Bloch>(bc);
  PotentialSpec spec = potential_of(c, bindings);
  Grid grid = grid_of(c, bindings, periodic);
  GridFunction samples = evaluate_on_grid(spec, grid);
  ComplexMatrix h = spec.coordinate == Coordinate::r ? assemble_radial(samples, angular_momentum(c, bindings))
                                                     : assemble_1d(samples, bc);
  return Problem{std::move(spec), std::move(grid), std::move(samples), std::move(h)};
}

std::vector<cplx> sorted_eigenvalues(const ComplexMatrix& h, const SolverOptions& opts) {
  std::vector<cplx> values = schur_eigenvalues(h, opts);
  std::sort(values.begin(), values.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return values;
}

std::size_t thread_cap(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPECTRA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = std::min<std::size_t>(cap, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

// Runs job(i) for every i, at most thread_cap() at a time. Results stay in
// index order; the first failing index (in order) is rethrown.
template <class Row, class Job>
std::vector<std::vector<Row>> parallel_rows(std::size_t count, Job job) {
  std::vector<std::vector<Row>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = thread_cap(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<ScanRow> flatten(std::vector<std::vector<ScanRow>> chunks) {
  std::vector<ScanRow> rows;
  for (auto& c : chunks) rows.insert(rows.end(), c.begin(), c.end());
  return rows;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + c.out_path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorCode::io_failure, "failed writing '" + c.out_path + "'");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorCode::io_failure, "failed writing '" + path + "'");
}

std::string json_string(std::string_view s) {
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') o += '\\';
    if (static_cast<unsigned char>(ch) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", ch);
      o += buf;
      continue;
    }
    o += ch;
  }
  return o + "\"";
}

std::string json_optional(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "null";
  return format_double(*v);
}

std::string json_value(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_bindings(const Bindings& b) {
  std::string o = "{";
  bool first = true;
  for (const auto& [k, v] : b) {
    o += (first ? "" : ",") + json_string(k) + ":" + json_value(v);
    first = false;
  }
  return o + "}";
}

std::string reports_text(const std::vector<DiagnosticsReport>& reports, OutputFormat f) {
  std::ostringstream s;
  write_reports(s, reports, f);
  return s.str();
}

int run_solve(const RunConfig& c, std::ostream& out) {
  if (c.boundary.kind == BoundarySpec::Kind::bloch_scan) {
    const std::size_t count = c.boundary.count;
    auto chunks = parallel_rows<ScanRow>(count, [&](std::size_t j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      const Problem p = build(c, c.bindings, Bloch{theta});
      std::vector<ScanRow> rows;
      for (cplx e : sorted_eigenvalues(p.hamiltonian, c.solver)) {
        rows.push_back({theta, e, is_real_energy(e, c.reality_tol) ? Reality::real : Reality::complex});
      }
      return rows;
    });
    std::ostringstream s;
    write_scan(s, flatten(std::move(chunks)), c.format);
    emit(c, out, s.str());
    return 0;
  }

  BoundaryCondition bc = Dirichlet{};
  if (c.boundary.kind == BoundarySpec::Kind::bloch) bc = Bloch{c.boundary.theta};
  const Problem p = build(c, c.bindings, bc);
  const Spectrum spectrum = eigen_decompose(p.hamiltonian, c.solver);
  const std::vector<DiagnosticsReport> reports =
      verify_reality_theorem(p.hamiltonian, spectrum, p.samples, c.reality_tol);
  emit(c, out, reports_text(reports, c.format));
  const bool all = std::all_of(spectrum.pairs.begin(), spectrum.pairs.end(),
                               [](const EigenPair& e) { return e.converged; });
  return all ? 0 : 3;
}

int run_scan(const RunConfig& c, std::ostream& out) {
  const ScanSpec& scan = *c.scan;
  auto chunks = parallel_rows<ScanRow>(scan.values.size(), [&](std::size_t i) {
    Bindings b = c.bindings;
    b[scan.param] = scan.values[i];
    const Problem p = build(c, b, Dirichlet{});
    std::vector<cplx> values = sorted_eigenvalues(p.hamiltonian, c.solver);
    if (scan.states != 0 && scan.states < values.size()) values.resize(scan.states);
    std::vector<ScanRow> rows;
    for (cplx e : values) {
      rows.push_back({scan.values[i], e, is_real_energy(e, c.reality_tol) ? Reality::real : Reality::complex});
    }
    return rows;
  });
  std::ostringstream s;
  write_scan(s, flatten(std::move(chunks)), c.format);
  emit(c, out, s.str());
  return 0;
}

int run_check(const RunConfig& c, std::ostream& out) {
  const Bindings bindings = effective_bindings(c, c.bindings);
  const PotentialSpec spec = potential_of(c, bindings);
  double extent = std::max(std::abs(c.grid.a), std::abs(c.grid.b));
  if (c.from_catalog && !c.grid.domain_given) {
    const Grid g = default_grid(c.potential, bindings, 2);
    extent = std::max(std::abs(g.a()), std::abs(g.b()));
  }
  const SymmetryReport r = analyze_symmetry(spec, make_grid(-extent, extent, 400), c.symmetry_tol);
  std::ostringstream s;
  s << "{\"potential\":" << json_string(c.potential) << ",\"bindings\":" << json_bindings(bindings)
    << ",\"is_hermitian\":" << (r.is_hermitian ? "true" : "false")
    << ",\"is_pt_symmetric\":" << (r.is_pt_symmetric ? "true" : "false")
    << ",\"imag_part_odd\":" << (r.imag_part_odd ? "true" : "false") << ",\"max_imag\":" << json_value(r.max_imag)
    << ",\"pt_deviation\":" << json_value(r.pt_deviation) << ",\"odd_deviation\":" << json_value(r.odd_deviation)
    << ",\"tolerance\":" << json_value(r.tolerance) << ",\"probes\":" << r.probes << ",\"skipped\":" << r.skipped
    << "}\n";
  emit(c, out, s.str());
  return 0;
}

int run_catalog(const RunConfig& c, std::ostream& out) {
  if (!c.from_catalog) throw SchemaError("/potential", "catalog command needs a catalog id");
  const Bindings bindings = resolve_parameters(find_entry(c.potential), c.bindings);
  ValidationNumerics num;
  num.solver = c.solver;
  num.reality_tol = c.reality_tol;
  if (c.grid.domain_given || c.grid.n_given) {
    const std::size_t n = c.grid.n_given ? c.grid.n : default_node_count(c.potential);
    num.grid = c.grid.domain_given ? make_grid(c.grid.a, c.grid.b, n) : default_grid(c.potential, bindings, n);
  }
  const ValidationReport r = validate_entry(c.potential, bindings, c.quantum, num);

  std::ostringstream s;
  if (c.format == OutputFormat::csv) {
    write_reports(s, r.states, OutputFormat::csv);
  } else {
    s << "{\"id\":" << json_string(r.id) << ",\"parameters\":" << json_bindings(r.parameters)
      << ",\"quantum\":{\"n\":" << r.quantum.n << ",\"q\":" << r.quantum.q << "}"
      << ",\"grid\":{\"a\":" << json_value(r.grid.a()) << ",\"b\":" << json_value(r.grid.b())
      << ",\"n\":" << r.grid.size() << "}"
      << ",\"exact_energy\":" << json_optional(r.exact_energy) << ",\"energy_error\":" << json_optional(r.energy_error)
      << ",\"wavefunction_residual\":" << json_optional(r.wavefunction_residual)
      << ",\"exact_state_exp_UI\":" << json_optional(r.exact_state_exp_imag)
      << ",\"passed\":" << (r.passed ? "true" : "false") << ",\"states\":";
    write_reports(s, r.states, OutputFormat::json);
    s << "}\n";
  }
  emit(c, out, s.str());
  return r.passed ? 0 : 2;
}

int run_nls(const RunConfig& c, std::ostream& out) {
  const Bindings bindings = effective_bindings(c, c.bindings);
  NlsProblem p{potential_of(c, bindings), c.nls.c, make_potential(c.nls.gain, bindings, c.coordinate),
               c.nls.target_norm, grid_of(c, bindings, false)};
  NlsOptions opts;
  opts.mixing = c.nls.mixing;
  opts.max_iterations = c.nls.max_iterations;
  opts.tolerance = c.nls.tolerance;
  opts.solver = c.solver;
  const NlsSolution sol = solve_stationary(p, default_initial_state(p.grid), opts);

  const GridFunction base = evaluate_on_grid(p.potential, p.grid);
  const GridFunction gain = evaluate_on_grid(p.gain, p.grid);
  std::vector<double> density(sol.psi.size());
  GridFunction total(p.grid);
  for (std::size_t j = 0; j < density.size(); ++j) {
    density[j] = std::norm(sol.psi.values[j]);
    total.values[j] = base.values[j] + cplx(p.nonlinearity * density[j], gain.values[j].real());
  }
  const ComplexMatrix heff = effective_hamiltonian(p, base, gain, density);
  EigenPair pair;
  pair.value = sol.energy;
  pair.vector = sol.psi.values;
  pair.residual = residual_norm(heff, pair);
  pair.converged = sol.converged;
  const DiagnosticsReport report = diagnose_state(heff, pair, total, c.reality_tol, 0);
  emit(c, out, reports_text({report}, c.format));

  if (!c.out_path.empty()) {
    std::ostringstream log;
    log << "iteration,re_E,im_E,delta_psi,delta_E\n";
    for (const NlsIterate& it : sol.log) {
      log << it.iteration << ',' << format_double(it.energy.real()) << ',' << format_double(it.energy.imag()) << ','
          << format_double(it.delta_psi) << ',' << format_double(it.delta_energy) << '\n';
    }
    write_file(c.out_path + ".iterations.csv", log.str());

    double norm = 0.0;
    for (double d : density) norm += d;
    norm *= p.grid.spacing();
    std::ostringstream summary;
    summary << "{\"converged\":" << (sol.converged ? "true" : "false") << ",\"iterations\":" << sol.iterations
            << ",\"re_E\":" << json_value(sol.energy.real()) << ",\"im_E\":" << json_value(sol.energy.imag())
            << ",\"residual\":" << json_value(sol.residual) << ",\"exp_gain\":" << json_value(sol.exp_gain)
            << ",\"norm\":" << json_value(norm) << "}\n";
    write_file(c.out_path + ".summary.json", summary.str());
  }
  return sol.converged ? 0 : 3;
}

}  // namespace

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_convergence:
    case ErrorCode::divergence: return 3;
    case ErrorCode::io_failure: return 1;
    default: return 2;
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::solve: return run_solve(config, out);
      case Command::scan: return run_scan(config, out);
      case Command::check: return run_check(config, out);
      case Command::catalog: return run_catalog(config, out);
      case Command::nls: return run_nls(config, out);
    }
  } catch (const SchemaError& e) {
    err << "{\"error\":{\"code\":\"" << error_code_name(e.code()) << "\",\"path\":" << json_string(e.path())
        << ",\"message\":" << json_string(e.what()) << "}}\n";
    return exit_status(e.code());
  } catch (const Error& e) {
    err << "{\"error\":{\"code\":\"" << error_code_name(e.code()) << "\",\"message\":" << json_string(e.what())
        << "}}\n";
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "{\"error\":{\"code\":\"internal\",\"message\":" << json_string(e.what()) << "}}\n";
    return 1;
  }
  return 1;
}

}  // namespace spectra::cli
