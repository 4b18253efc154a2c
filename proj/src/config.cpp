#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spectra/cli.hpp"
#include "spectra/error.hpp"

namespace spectra::cli {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw SchemaError(path, message);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require(obj.is_object(), path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == key;
    require(ok, path + "/" + key, "unknown field");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  require(v.is_number(), path + "/" + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& path, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  require(v.is_number_integer() && v.get<long long>() >= 0, path + "/" + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  require(v.is_string(), path + "/" + key, "expected a string");
  return v.get<std::string>();
}

Command parse_command(const std::string& s) {
  if (s == "solve") return Command::solve;
  if (s == "scan") return Command::scan;
  if (s == "check") return Command::check;
  if (s == "catalog") return Command::catalog;
  if (s == "nls") return Command::nls;
  throw SchemaError("/command", "expected one of solve, scan, check, catalog, nls");
}

OutputFormat parse_format(const std::string& s, const std::string& path) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw SchemaError(path, "expected csv or json");
}

void parse_grid(const json& doc, RunConfig& c) {
  require(!(doc.contains("grid") && doc.contains("box")), "/box", "give either grid or box, not both");
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    only_keys(g, "/grid", {"a", "b", "n"});
    if (g.contains("a") || g.contains("b")) {
      require(g.contains("a") && g.contains("b"), "/grid", "a and b must be given together");
      c.grid.a = get_number(g, "a", "/grid", c.grid.a);
      c.grid.b = get_number(g, "b", "/grid", c.grid.b);
      require(c.grid.b > c.grid.a, "/grid/b", "b must exceed a");
      c.grid.domain_given = true;
    }
    if (g.contains("n")) {
      c.grid.n = get_count(g, "n", "/grid", c.grid.n);
      c.grid.n_given = true;
    }
  }
  if (doc.contains("box")) {
    const json& b = doc.at("box");
    only_keys(b, "/box", {"L", "n"});
    require(b.contains("L"), "/box/L", "required");
    c.grid.a = 0.0;
    c.grid.b = get_number(b, "L", "/box", 1.0);
    require(c.grid.b > 0.0, "/box/L", "must be positive");
    c.grid.domain_given = true;
    c.grid.box = true;
    if (b.contains("n")) {
      c.grid.n = get_count(b, "n", "/box", c.grid.n);
      c.grid.n_given = true;
    }
  }
  require(c.grid.n >= 2, c.grid.box ? "/box/n" : "/grid/n", "need at least 2 nodes");
}

void parse_boundary(const json& doc, RunConfig& c) {
  if (!doc.contains("boundary")) return;
  const json& b = doc.at("boundary");
  if (b.is_string()) {
    require(b.get<std::string>() == "dirichlet", "/boundary", "string form must be \"dirichlet\"");
    return;
  }
  only_keys(b, "/boundary", {"type", "theta", "count"});
  const std::string type = get_string(b, "type", "/boundary", "");
  if (type == "dirichlet") return;
  if (type == "bloch") {
    c.boundary.kind = BoundarySpec::Kind::bloch;
    c.boundary.theta = get_number(b, "theta", "/boundary", 0.0);
    return;
  }
  if (type == "bloch_scan") {
    c.boundary.kind = BoundarySpec::Kind::bloch_scan;
    c.boundary.count = get_count(b, "count", "/boundary", 0);
    require(c.boundary.count >= 1, "/boundary/count", "need at least one Bloch phase");
    return;
  }
  throw SchemaError("/boundary/type", "expected dirichlet, bloch or bloch_scan");
}

void parse_solver(const json& doc, RunConfig& c) {
  if (!doc.contains("solver")) return;
  const json& s = doc.at("solver");
  only_keys(s, "/solver", {"max_sweeps", "deflation_tol", "inverse_tol", "seed"});
  c.solver.max_sweeps = static_cast<int>(get_count(s, "max_sweeps", "/solver", c.solver.max_sweeps));
  c.solver.deflation_tol = get_number(s, "deflation_tol", "/solver", c.solver.deflation_tol);
  c.solver.inverse_tol = get_number(s, "inverse_tol", "/solver", c.solver.inverse_tol);
  c.solver.seed = get_count(s, "seed", "/solver", c.solver.seed);
  require(c.solver.max_sweeps > 0, "/solver/max_sweeps", "must be positive");
  require(c.solver.deflation_tol > 0.0, "/solver/deflation_tol", "must be positive");
  require(c.solver.inverse_tol > 0.0, "/solver/inverse_tol", "must be positive");
}

// Every expression parameter other than the scan parameter must be bound.
void check_potential(RunConfig& c) {
  if (c.from_catalog) {
    const CatalogEntry& e = find_entry(c.potential);
    Bindings resolved = resolve_parameters(e, c.bindings);
    if (c.scan) {
      require(resolved.contains(c.scan->param), "/scan/param",
              "'" + c.scan->param + "' is not a parameter of " + e.id);
    }
    c.coordinate = e.coordinate;
    if (e.domain == DomainKind::radial) c.l = static_cast<unsigned>(resolved.at("l"));
    return;
  }
  require(c.command != Command::catalog, "/potential", "catalog command needs a catalog id");
  const Expr e = parse(c.potential);
  const std::set<std::string> params = e.parameters();
  if (c.scan) {
    require(params.contains(c.scan->param) || c.bindings.contains(c.scan->param), "/scan/param",
            "'" + c.scan->param + "' does not occur in the potential");
  }
  for (const std::string& p : params) {
    if (c.scan && p == c.scan->param) continue;
    require(c.bindings.contains(p), "/bindings/" + p, "parameter is not bound");
  }
  if (c.command == Command::nls) {
    const Expr gain = parse(c.nls.gain);
    for (const std::string& p : gain.parameters()) {
      require(c.bindings.contains(p), "/bindings/" + p, "gain parameter is not bound");
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  only_keys(doc, "", {"command", "potential", "catalog", "bindings", "coordinate", "l", "grid", "box", "boundary",
                      "solver", "reality_tol", "symmetry_tol", "scan", "quantum", "nls", "output"});

  RunConfig c;
  require(doc.contains("command"), "/command", "required");
  c.command = parse_command(get_string(doc, "command", "", ""));

  const bool has_expr = doc.contains("potential");
  const bool has_cat = doc.contains("catalog");
  require(has_expr != has_cat, "/potential", "exactly one of potential or catalog is required");
  c.potential = has_expr ? get_string(doc, "potential", "", "") : get_string(doc, "catalog", "", "");
  c.from_catalog = has_cat || is_catalog_id(c.potential);
  if (has_cat) find_entry(c.potential);

  if (doc.contains("bindings")) {
    const json& b = doc.at("bindings");
    require(b.is_object(), "/bindings", "expected an object");
    for (const auto& [key, value] : b.items()) {
      require(value.is_number(), "/bindings/" + key, "expected a number");
      c.bindings[key] = value.get<double>();
    }
  }

  const std::string coord = get_string(doc, "coordinate", "", "x");
  require(coord == "x" || coord == "r", "/coordinate", "expected x or r");
  c.coordinate = coord == "r" ? Coordinate::r : Coordinate::x;
  c.l = static_cast<unsigned>(get_count(doc, "l", "", 0));
  if (c.coordinate == Coordinate::r && !doc.contains("grid") && !doc.contains("box")) {
    c.grid.a = 0.0;
  }

  parse_grid(doc, c);
  if (c.coordinate == Coordinate::r) require(c.grid.a >= 0.0, "/grid/a", "radial grids start at r >= 0");
  parse_boundary(doc, c);
  parse_solver(doc, c);

  c.reality_tol = get_number(doc, "reality_tol", "", c.reality_tol);
  require(c.reality_tol > 0.0, "/reality_tol", "must be positive");
  c.symmetry_tol = get_number(doc, "symmetry_tol", "", c.symmetry_tol);
  require(c.symmetry_tol > 0.0, "/symmetry_tol", "must be positive");

  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    only_keys(s, "/scan", {"param", "values", "states"});
    ScanSpec scan;
    scan.param = get_string(s, "param", "/scan", "");
    require(!scan.param.empty(), "/scan/param", "required");
    require(s.contains("values") && s.at("values").is_array() && !s.at("values").empty(), "/scan/values",
            "expected a non-empty array");
    for (std::size_t i = 0; i < s.at("values").size(); ++i) {
      const json& v = s.at("values")[i];
      require(v.is_number(), "/scan/values/" + std::to_string(i), "expected a number");
      scan.values.push_back(v.get<double>());
    }
    if (s.contains("states")) scan.states = get_count(s, "states", "/scan", 0);
    c.scan = std::move(scan);
  }
  require(c.command != Command::scan || c.scan.has_value(), "/scan", "scan command requires a scan block");

  if (doc.contains("quantum")) {
    const json& q = doc.at("quantum");
    only_keys(q, "/quantum", {"n", "q"});
    if (q.contains("n")) {
      require(q.at("n").is_number_integer() && q.at("n").get<int>() >= 0, "/quantum/n", "expected integer >= 0");
      c.quantum.n = q.at("n").get<int>();
    }
    if (q.contains("q")) {
      require(q.at("q").is_number_integer() && std::abs(q.at("q").get<int>()) == 1, "/quantum/q",
              "expected +1 or -1");
      c.quantum.q = q.at("q").get<int>();
    }
  }

  if (doc.contains("nls")) {
    const json& s = doc.at("nls");
    only_keys(s, "/nls", {"c", "gain", "target_norm", "mixing", "max_iterations", "tolerance"});
    c.nls.c = get_number(s, "c", "/nls", c.nls.c);
    c.nls.gain = get_string(s, "gain", "/nls", c.nls.gain);
    c.nls.target_norm = get_number(s, "target_norm", "/nls", c.nls.target_norm);
    c.nls.mixing = get_number(s, "mixing", "/nls", c.nls.mixing);
    c.nls.max_iterations = static_cast<int>(get_count(s, "max_iterations", "/nls", 500));
    c.nls.tolerance = get_number(s, "tolerance", "/nls", c.nls.tolerance);
    require(c.nls.target_norm > 0.0, "/nls/target_norm", "must be positive");
    require(c.nls.mixing > 0.0 && c.nls.mixing <= 1.0, "/nls/mixing", "must lie in (0, 1]");
    require(c.nls.tolerance > 0.0, "/nls/tolerance", "must be positive");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    only_keys(o, "/output", {"path", "format"});
    c.out_path = get_string(o, "path", "/output", "");
    c.format = parse_format(get_string(o, "format", "/output", "csv"), "/output/format");
  }

  check_potential(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.n) {
    require(*o.n >= 2, "--n", "need at least 2 nodes");
    c.grid.n = *o.n;
    c.grid.n_given = true;
  }
  if (o.domain) {
    require(o.domain->second > o.domain->first, "--domain", "b must exceed a");
    c.grid.a = o.domain->first;
    c.grid.b = o.domain->second;
    c.grid.domain_given = true;
  }
  if (o.tol) {
    require(*o.tol > 0.0, "--tol", "must be positive");
    c.reality_tol = *o.tol;
  }
  if (o.seed) c.solver.seed = *o.seed;
  if (o.out) c.out_path = *o.out;
  if (o.format) c.format = *o.format;
}

}  // namespace spectra::cli
