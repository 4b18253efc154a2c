#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "spectra/cli.hpp"
#include "spectra/error.hpp"

namespace spectra::cli {

namespace {

constexpr const char* kHeader = "index,re_E,im_E,exp_UI,theorem_residual,eig_residual,max_flux,parity_dev,class";

// JSON has no literal for non-finite values; they travel as strings.
std::string json_number(double v) {
  if (std::isfinite(v)) return format_double(v);
  if (std::isnan(v)) return "\"nan\"";
  return v > 0 ? "\"inf\"" : "\"-inf\"";
}

double read_number(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaError("/" + key, "expected a number");
}

Reality read_class(const std::string& s) {
  if (s == "real") return Reality::real;
  if (s == "complex") return Reality::complex;
  throw SchemaError("/class", "expected real or complex");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_reports(std::ostream& out, const std::vector<DiagnosticsReport>& reports, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << kHeader << '\n';
    for (const DiagnosticsReport& r : reports) {
      out << r.index << ',' << format_double(r.energy.real()) << ',' << format_double(r.energy.imag()) << ','
          << format_double(r.exp_imag_potential) << ',' << format_double(r.theorem_residual) << ','
          << format_double(r.eig_residual) << ',' << format_double(r.max_flux) << ','
          << (r.density_parity_deviation ? format_double(*r.density_parity_deviation) : "NA") << ','
          << to_string(r.classification) << '\n';
    }
    return;
  }
  out << "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const DiagnosticsReport& r = reports[i];
    out << (i ? ",\n " : "\n ") << "{\"index\":" << r.index << ",\"re_E\":" << json_number(r.energy.real())
        << ",\"im_E\":" << json_number(r.energy.imag()) << ",\"exp_UI\":" << json_number(r.exp_imag_potential)
        << ",\"theorem_residual\":" << json_number(r.theorem_residual)
        << ",\"eig_residual\":" << json_number(r.eig_residual) << ",\"max_flux\":" << json_number(r.max_flux)
        << ",\"parity_dev\":"
        << (r.density_parity_deviation ? json_number(*r.density_parity_deviation) : std::string("null"))
        << ",\"class\":\"" << to_string(r.classification) << "\",\"norm\":" << json_number(r.norm)
        << ",\"identity_holds\":" << (r.identity_holds ? "true" : "false") << "}";
  }
  out << (reports.empty() ? "]\n" : "\n]\n");
}

void write_outputs(const std::vector<DiagnosticsReport>& reports, OutputFormat format, const std::string& path) {
  std::ostringstream text;
  write_reports(text, reports, format);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
  file << text.str();
  if (!file) throw Error(ErrorCode::io_failure, "failed writing '" + path + "'");
}

std::vector<DiagnosticsReport> read_reports_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("/", "expected an array of reports");
  std::vector<DiagnosticsReport> out;
  for (const auto& o : doc) {
    DiagnosticsReport r;
    r.index = o.at("index").get<std::size_t>();
    r.energy = cplx(read_number(o.at("re_E"), "re_E"), read_number(o.at("im_E"), "im_E"));
    r.exp_imag_potential = read_number(o.at("exp_UI"), "exp_UI");
    r.theorem_residual = read_number(o.at("theorem_residual"), "theorem_residual");
    r.eig_residual = read_number(o.at("eig_residual"), "eig_residual");
    r.max_flux = read_number(o.at("max_flux"), "max_flux");
    if (!o.at("parity_dev").is_null()) r.density_parity_deviation = read_number(o.at("parity_dev"), "parity_dev");
    r.classification = read_class(o.at("class").get<std::string>());
    if (o.contains("norm")) r.norm = read_number(o.at("norm"), "norm");
    if (o.contains("identity_holds")) r.identity_holds = o.at("identity_holds").get<bool>();
    out.push_back(r);
  }
  return out;
}

void write_scan(std::ostream& out, const std::vector<ScanRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "value,re_E,im_E,class\n";
    for (const ScanRow& r : rows) {
      out << format_double(r.value) << ',' << format_double(r.energy.real()) << ','
          << format_double(r.energy.imag()) << ',' << to_string(r.classification) << '\n';
    }
    return;
  }
  out << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ScanRow& r = rows[i];
    out << (i ? ",\n " : "\n ") << "{\"value\":" << json_number(r.value) << ",\"re_E\":"
        << json_number(r.energy.real()) << ",\"im_E\":" << json_number(r.energy.imag()) << ",\"class\":\""
        << to_string(r.classification) << "\"}";
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace spectra::cli
