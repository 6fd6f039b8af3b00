#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hardymod::cli {

enum class ReportFormat { Json, Text };

/// Outcome of one scenario. `status` is "ok" or "error: <message>".
struct Report {
  std::string id;
  std::string command;
  std::string status = "ok";
  std::vector<int> degree;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> diagnostics;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> expect_failures;
  /// The scenario or a file it references could not be read.
  bool input_error = false;
  std::optional<double> runtime_seconds;
  std::string version;

  bool ok() const { return status == "ok"; }
  /// Expectations met; errors only count when the scenario expects them.
  bool passed() const { return !input_error && expect_failures.empty(); }

  friend bool operator==(const Report& a, const Report& b);
};

/// Keys sorted; non-finite reals written as "nan", "inf", "-inf".
nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Real number with the non-finite encoding above.
nlohmann::json encode_real(double v);
double decode_real(const nlohmann::json& j);

std::string emit_report(const Report& r, ReportFormat format);
/// Several reports: a JSON array, or the text summaries one after another.
std::string emit_reports(const std::vector<Report>& reports, ReportFormat format);

/// 0 when every report passed, 2 when any had an input error, 1 otherwise.
int exit_code(const std::vector<Report>& reports);

std::string version_stamp();

}  // namespace hardymod::cli
