#include "hardymod/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hardymod::cli {

namespace {

bool same_real(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return a == b;
}

bool same_reals(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !same_real(ia->second, ib->second)) return false;
  }
  return true;
}

nlohmann::json real_map(const std::map<std::string, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = encode_real(v);
  return j;
}

std::map<std::string, double> read_real_map(const nlohmann::json& j) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = decode_real(v);
  return out;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string join_caps(const std::vector<int>& caps) {
  std::string out = "(";
  for (std::size_t i = 0; i < caps.size(); ++i) out += (i ? "," : "") + std::to_string(caps[i]);
  return out + ")";
}

}  // namespace

bool operator==(const Report& a, const Report& b) {
  return a.id == b.id && a.command == b.command && a.status == b.status && a.degree == b.degree &&
         same_real(a.tolerance, b.tolerance) && a.seed == b.seed && same_reals(a.residuals, b.residuals) &&
         a.verdicts == b.verdicts && same_reals(a.diagnostics, b.diagnostics) && a.details == b.details &&
         a.expect_failures == b.expect_failures && a.input_error == b.input_error &&
         a.runtime_seconds.has_value() == b.runtime_seconds.has_value() &&
         (!a.runtime_seconds || same_real(*a.runtime_seconds, *b.runtime_seconds)) && a.version == b.version;
}

nlohmann::json encode_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_real(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw nlohmann::json::type_error::create(302, "expected a number or nan/inf, got '" + s + "'", &j);
  }
  return j.get<double>();
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["command"] = r.command;
  j["status"] = r.status;
  j["degree"] = r.degree;
  j["tolerance"] = encode_real(r.tolerance);
  j["seed"] = r.seed;
  j["residuals"] = real_map(r.residuals);
  j["verdicts"] = nlohmann::json::object();
  for (const auto& [k, v] : r.verdicts) j["verdicts"][k] = v;
  j["diagnostics"] = real_map(r.diagnostics);
  j["details"] = r.details;
  j["expect_failures"] = r.expect_failures;
  j["input_error"] = r.input_error;
  if (r.runtime_seconds) j["runtime_seconds"] = encode_real(*r.runtime_seconds);
  j["version"] = r.version;
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.id = j.at("id").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.degree = j.at("degree").get<std::vector<int>>();
  r.tolerance = decode_real(j.at("tolerance"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.residuals = read_real_map(j.at("residuals"));
  for (const auto& [k, v] : j.at("verdicts").items()) r.verdicts[k] = v.get<bool>();
  r.diagnostics = read_real_map(j.at("diagnostics"));
  r.details = j.at("details");
  r.expect_failures = j.at("expect_failures").get<std::vector<std::string>>();
  r.input_error = j.at("input_error").get<bool>();
  if (j.contains("runtime_seconds")) r.runtime_seconds = decode_real(j.at("runtime_seconds"));
  r.version = j.at("version").get<std::string>();
  return r;
}

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";
  std::ostringstream out;
  const char* pass = "✓";
  const char* fail = "✗";
  out << (r.passed() ? pass : fail) << " " << r.id << "  " << r.command << "  caps " << join_caps(r.degree)
      << "  tol " << short_real(r.tolerance) << "  seed " << r.seed << "\n";
  out << "  status " << r.status << "\n";
  for (const auto& [name, v] : r.residuals) {
    const auto it = r.verdicts.find(name);
    const char* glyph = it == r.verdicts.end() ? " " : it->second ? pass : fail;
    out << "  " << glyph << " " << pad(name, 28) << short_real(v) << "\n";
  }
  if (!r.diagnostics.empty()) {
    out << "  diagnostics\n";
    for (const auto& [name, v] : r.diagnostics) out << "    " << pad(name, 28) << short_real(v) << "\n";
  }
  for (const auto& f : r.expect_failures) out << "  " << fail << " expectation: " << f << "\n";
  if (r.runtime_seconds) out << "  runtime " << short_real(*r.runtime_seconds) << " s\n";
  return out.str();
}

std::string emit_reports(const std::vector<Report>& reports, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  std::string out;
  std::size_t passed = 0;
  for (const auto& r : reports) {
    out += emit_report(r, format);
    passed += r.passed() ? 1 : 0;
  }
  out += std::to_string(passed) + "/" + std::to_string(reports.size()) + " scenarios passed\n";
  return out;
}

int exit_code(const std::vector<Report>& reports) {
  bool mismatch = false;
  for (const auto& r : reports) {
    if (r.input_error) return 2;
    mismatch = mismatch || !r.passed();
  }
  return mismatch ? 1 : 0;
}

std::string version_stamp() { return std::string("hardymod ") + HARDYMOD_VERSION; }

}  // namespace hardymod::cli
