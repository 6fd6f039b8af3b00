#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hardymod/cli/config.hpp"
#include "hardymod/cli/runner.hpp"
#include "hardymod/error.hpp"

namespace fs = std::filesystem;
using namespace hardymod::cli;

namespace {

std::vector<std::string> expand_paths(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".scenario") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

Report input_failure(const std::string& path, const std::string& message) {
  Report r;
  r.id = fs::path(path).stem().string();
  r.command = "unknown";
  r.status = "error: " + message;
  r.input_error = true;
  r.version = version_stamp();
  return r;
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-space module checks driven by scenario files"};
  std::vector<std::string> configs;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string degree;
  unsigned jobs = 1;
  bool timing = false;

  app.add_option("--config", configs, "Scenario file or directory of *.scenario files")
      ->required()
      ->envname("HARDYMOD_CONFIG")
      ->delimiter(',');
  app.add_option("--out", out_path, "Output file, or an existing directory for one file per scenario")
      ->envname("HARDYMOD_OUT");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->envname("HARDYMOD_FORMAT");
  app.add_option("--seed", seed, "Override every scenario's seed")->envname("HARDYMOD_SEED");
  app.add_option("--tol", tol, "Override every scenario's tolerance")->envname("HARDYMOD_TOL");
  app.add_option("--degree", degree, "Override the grid caps, e.g. 6,6")->envname("HARDYMOD_DEGREE");
  app.add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber)->envname("HARDYMOD_JOBS");
  app.add_flag("--timing", timing, "Include runtimes in the reports")->envname("HARDYMOD_TIMING");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Overrides overrides;
  overrides.seed = seed;
  overrides.tol = tol;
  if (!degree.empty()) {
    try {
      overrides.degree = to_int_list(degree, 0, "degree");
    } catch (const hardymod::Error& e) {
      std::cerr << "--degree: " << e.what() << "\n";
      return 2;
    }
  }

  std::vector<Scenario> scenarios;
  std::vector<std::optional<Report>> failures;
  for (const auto& path : expand_paths(configs)) {
    try {
      Scenario s = load_scenario(path);
      apply_overrides(s, overrides);
      scenarios.push_back(std::move(s));
      failures.emplace_back();
    } catch (const hardymod::Error& e) {
      failures.emplace_back(input_failure(path, e.what()));
    }
  }

  RunOptions options;
  options.timing = timing;
  std::vector<Report> ran = run_batch(scenarios, jobs, options);
  std::vector<Report> reports;
  std::size_t next = 0;
  for (auto& f : failures) reports.push_back(f ? std::move(*f) : std::move(ran[next++]));

  const ReportFormat fmt = format == "text" ? ReportFormat::Text : ReportFormat::Json;
  if (!out_path.empty() && fs::is_directory(out_path)) {
    const std::string ext = fmt == ReportFormat::Json ? ".json" : ".txt";
    for (const auto& r : reports) {
      if (!write_file(fs::path(out_path) / (r.id + ext), emit_report(r, fmt))) {
        std::cerr << "cannot write " << (fs::path(out_path) / (r.id + ext)).string() << "\n";
        return 2;
      }
    }
  } else if (!out_path.empty()) {
    if (!write_file(out_path, emit_reports(reports, fmt))) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
  } else {
    std::cout << emit_reports(reports, fmt);
  }
  return exit_code(reports);
}
