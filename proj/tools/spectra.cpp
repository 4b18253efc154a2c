#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spectra/cli.hpp"
#include "spectra/error.hpp"

namespace {

std::pair<double, double> parse_domain(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw spectra::SchemaError("--domain", "expected a,b");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string as = s.substr(0, comma), bs = s.substr(comma + 1);
    const double a = std::stod(as, &used_a);
    const double b = std::stod(bs, &used_b);
    if (used_a != as.size() || used_b != bs.size()) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw spectra::SchemaError("--domain", "expected two numbers a,b");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra and diagnostics for complex one-dimensional potentials"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::size_t> n;
  std::optional<std::string> domain, out, format;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  for (const char* name : {"solve", "scan", "check", "catalog", "nls"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "output path (default: standard output)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--n", n, "grid node count");
    sub->add_option("--domain", domain, "domain endpoints a,b");
    sub->add_option("--tol", tol, "reality tolerance");
    sub->add_option("--seed", seed, "start-vector seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    spectra::cli::RunConfig config = spectra::cli::load_config(config_path);
    const std::string actual = config.command == spectra::cli::Command::solve     ? "solve"
                               : config.command == spectra::cli::Command::scan    ? "scan"
                               : config.command == spectra::cli::Command::check   ? "check"
                               : config.command == spectra::cli::Command::catalog ? "catalog"
                                                                                  : "nls";
    if (actual != command) {
      throw spectra::SchemaError("/command", "config command '" + actual + "' does not match '" + command + "'");
    }
    spectra::cli::Overrides o;
    o.n = n;
    o.tol = tol;
    o.seed = seed;
    o.out = out;
    if (domain) o.domain = parse_domain(*domain);
    if (format) o.format = *format == "json" ? spectra::cli::OutputFormat::json : spectra::cli::OutputFormat::csv;
    spectra::cli::apply_overrides(config, o);
    return spectra::cli::run(config, std::cout, std::cerr);
  } catch (const spectra::SchemaError& e) {
    std::cerr << "{\"error\":{\"code\":\"" << spectra::error_code_name(e.code()) << "\",\"path\":\"" << e.path()
              << "\",\"message\":\"" << e.what() << "\"}}\n";
    return spectra::cli::exit_status(e.code());
  } catch (const spectra::Error& e) {
    std::cerr << "{\"error\":{\"code\":\"" << spectra::error_code_name(e.code()) << "\",\"message\":\"" << e.what()
              << "\"}}\n";
    return spectra::cli::exit_status(e.code());
  }
}
