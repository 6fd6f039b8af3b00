#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "hardymod/cli/config.hpp"
#include "hardymod/cli/report.hpp"
#include "hardymod/cli/runner.hpp"
#include "hardymod/cli/scenario.hpp"
#include "hardymod/error.hpp"

using namespace hardymod;
using namespace hardymod::cli;

namespace {

std::string parse_error(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    return e.what();
  }
  return "";
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hardymod-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(StructuredText, EntriesBlocksAndComments) {
  const auto doc = parse_structured_text("# header\na = 1\n\nbegin T1\n 0 1  # row\n1 0\nend\nb=  x y \n");
  ASSERT_EQ(doc.entries.size(), 2u);
  EXPECT_EQ(doc.find("b")->value, "x y");
  EXPECT_EQ(doc.find("b")->line, 8);
  ASSERT_NE(doc.block("T1"), nullptr);
  EXPECT_EQ(doc.block("T1")->lines.size(), 2u);
  EXPECT_EQ(doc.block("T1")->lines[0].second, "0 1");
  EXPECT_EQ(doc.find("missing"), nullptr);
}

TEST(StructuredText, Errors) {
  EXPECT_THROW(parse_structured_text("a = 1\na = 2\n"), ParseError);
  EXPECT_THROW(parse_structured_text("begin x\nbegin y\nend\nend\n"), ParseError);
  EXPECT_THROW(parse_structured_text("begin x\n"), ParseError);
  EXPECT_THROW(parse_structured_text("end\n"), ParseError);
  EXPECT_THROW(parse_structured_text("just words\n"), ParseError);
}

TEST(StructuredText, StrictNumbers) {
  EXPECT_EQ(to_double("1e-8", 1, "tol"), 1e-8);
  EXPECT_THROW(to_double("1e-8x", 1, "tol"), ParseError);
  EXPECT_EQ(to_int_list("3, 4", 1, "degree"), (std::vector<int>{3, 4}));
  EXPECT_THROW(to_int_list("3,,4", 1, "degree"), ParseError);
}

TEST(ScenarioParse, Defaults) {
  const Scenario s = parse_scenario("command = check-beurling\ndegree = 3,3\nsymbol = z1*z2\n");
  EXPECT_EQ(s.command, Command::CheckBeurling);
  EXPECT_EQ(s.variables, 2u);
  EXPECT_EQ(s.tol, 1e-8);
  EXPECT_EQ(s.seed, 0u);
  EXPECT_EQ(s.id, "check-beurling");
  ASSERT_TRUE(s.symbol);
  EXPECT_EQ(s.symbol->factors.size(), 2u);

  const Scenario e = parse_scenario("command = example42\n");
  EXPECT_EQ(e.command, Command::ConstantsQuotient);
  EXPECT_EQ(e.degree, (std::vector<int>{20, 20}));
  EXPECT_EQ(e.torus_samples, 64);
}

TEST(ScenarioParse, FieldErrorsCarryLineAndField) {
  EXPECT_EQ(parse_error("command = check-beurling\ndegree = 3,3\ntol = -1\nsymbol = z1\n"),
            "line 3, field 'tol': must be positive");
  EXPECT_NE(parse_error("command = nope\n").find("field 'command'"), std::string::npos);
  EXPECT_NE(parse_error("command = check-beurling\ndegree = 3,3\nsymbol = z3\n").find("field 'symbol'"),
            std::string::npos);
  EXPECT_NE(parse_error("command = check-beurling\ndegree = 3,3\nsymbol = blaschke(1,1.5)\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(parse_error("command = check-beurling\ndegree = 3,3\n").find("symbol"), std::string::npos);
  EXPECT_NE(parse_error("command = check-beurling\ndegree = 3,3\nsymbol = z1\nunknown = 1\n").find("line 4"),
            std::string::npos);
  EXPECT_FALSE(parse_error("command = dilate\ntuple = zero\nradius = 2\n").empty());
}

TEST(ScenarioParse, MissingFileIsDeferredToTheRun) {
  const Scenario s = parse_scenario("command = check-beurling\ndegree = 3,3\nsymbol_file = nowhere.sym\n");
  const Report r = run_scenario(s);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.input_error);
  EXPECT_EQ(exit_code({r}), 2);
}

TEST(ScenarioParse, SymbolFileRoundTrip) {
  const auto dir = scratch_dir("symbol");
  std::ofstream(dir / "theta.sym") << "begin coefficients\n1 1 1 0\nend\n";
  std::ofstream(dir / "s.scenario") << "command = check-beurling\ndegree = 3,3\nsymbol_file = theta.sym\n";
  const Scenario s = load_scenario((dir / "s.scenario").string());
  EXPECT_EQ(s.id, "s");
  const Report r = run_scenario(s);
  EXPECT_TRUE(r.ok()) << r.status;
  EXPECT_TRUE(r.verdicts.at("beurling"));
}

TEST(ScenarioOverrides, Validate) {
  Scenario s = parse_scenario("command = check-beurling\ndegree = 3,3\nsymbol = z1\n");
  apply_overrides(s, {7, 1e-6, std::vector<int>{4, 4}});
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.tol, 1e-6);
  EXPECT_THROW(apply_overrides(s, {std::nullopt, -1.0, std::nullopt}), Error);
  EXPECT_THROW(apply_overrides(s, {std::nullopt, std::nullopt, std::vector<int>{4}}), Error);
}

TEST(Reports, JsonRoundTrip) {
  Report r;
  r.id = "x";
  r.command = "check-beurling";
  r.degree = {3, 3};
  r.tolerance = 1e-8;
  r.residuals = {{"beurling", 0.1 + 0.2}, {"odd", std::numeric_limits<double>::quiet_NaN()},
                 {"big", std::numeric_limits<double>::infinity()}};
  r.verdicts = {{"beurling", false}};
  r.diagnostics = {{"neg", -std::numeric_limits<double>::infinity()}};
  r.details = {{"k", 1}};
  r.runtime_seconds = 0.25;
  r.version = version_stamp();
  const auto j = to_json(r);
  EXPECT_EQ(j["residuals"]["odd"], "nan");
  EXPECT_EQ(j["residuals"]["big"], "inf");
  EXPECT_EQ(j["diagnostics"]["neg"], "-inf");
  EXPECT_EQ(report_from_json(nlohmann::json::parse(j.dump())), r);
  EXPECT_NE(j.dump().find("0.30000000000000004"), std::string::npos);
}

TEST(Reports, EmptyMapsStayObjects) {
  Report r;
  r.id = "e";
  const auto j = to_json(r);
  EXPECT_TRUE(j["residuals"].is_object());
  EXPECT_TRUE(j["verdicts"].is_object());
  EXPECT_EQ(report_from_json(j), r);
  EXPECT_EQ(j.count("runtime_seconds"), 0u);
}

TEST(Reports, ExitCodes) {
  Report good;
  Report bad;
  bad.expect_failures.push_back("verdict 'x' is false, expected true");
  Report input;
  input.status = "error: cannot open file";
  input.input_error = true;
  EXPECT_EQ(exit_code({good}), 0);
  EXPECT_EQ(exit_code({good, bad}), 1);
  EXPECT_EQ(exit_code({bad, input}), 2);
}

TEST(Reports, TextSummary) {
  const Scenario s = parse_scenario("id = t\ncommand = check-beurling\ndegree = 3,3\nsymbol = z1*z2\n");
  const std::string text = emit_reports({run_scenario(s)}, ReportFormat::Text);
  EXPECT_NE(text.find("beurling"), std::string::npos);
  EXPECT_NE(text.find("1/1 scenarios passed"), std::string::npos);
}

TEST(Runner, ExpectationsAndErrors) {
  const Scenario s = parse_scenario(
      "command = check-beurling\ndegree = 3,3\nsubspace = vanishing\nbegin expect\nbeurling = true\nend\n");
  const Report r = run_scenario(s);
  ASSERT_EQ(r.expect_failures.size(), 1u);
  EXPECT_EQ(exit_code({r}), 1);

  const Scenario d = parse_scenario(
      "command = dilate\ndegree = 3,3\ntuple = scalars 1 0\n");
  const Report e = run_scenario(d);
  EXPECT_EQ(e.status.rfind("error: ", 0), 0u);
  EXPECT_FALSE(e.input_error);
  EXPECT_TRUE(e.residuals.empty());
  EXPECT_EQ(exit_code({e}), 1);
}

TEST(Runner, BatchIsDeterministicAcrossJobCounts) {
  std::vector<Scenario> batch;
  for (int seed = 0; seed < 6; ++seed) {
    Scenario s = parse_scenario("command = dilate\ntuple = random-nilpotent\n");
    s.seed = static_cast<std::uint64_t>(seed);
    s.id = "pair-" + std::to_string(seed);
    batch.push_back(s);
  }
  batch.push_back(parse_scenario("command = check-brehmer\ndegree = 4,4\nsymbol = z1^2*z2\n"));
  const std::string one = emit_reports(run_batch(batch, 1), ReportFormat::Json);
  const std::string four = emit_reports(run_batch(batch, 4), ReportFormat::Json);
  EXPECT_EQ(one, four);
  EXPECT_EQ(emit_reports(run_batch(batch, 3), ReportFormat::Json), one);
}

TEST(Runner, TimingOnlyOnRequest) {
  const Scenario s = parse_scenario("command = dilate\ntuple = zero\ndimension = 1\n");
  EXPECT_FALSE(run_scenario(s).runtime_seconds);
  EXPECT_TRUE(run_scenario(s, {true}).runtime_seconds);
}
