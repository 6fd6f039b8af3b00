#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardymod/dilation.hpp"
#include "hardymod/subspace.hpp"
#include "hardymod/symbol.hpp"

namespace hardymod::cli {

enum class Command { CheckBeurling, CheckBrehmer, Dilate, Factor, ConstantsQuotient, IdentitySuite };

std::string to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

/// One factor of a symbol expression such as `z1^2*blaschke(2,0.5)`.
struct SymbolFactor {
  enum class Kind { Monomial, Blaschke, Phi, Unimodular, Rotation, Scalar };
  Kind kind = Kind::Scalar;
  std::size_t variable = 0;  ///< 0-based
  int power = 1;
  Complex value = 1.0;       ///< Blaschke zero or scalar
  double angle = 0.0;
};

/// Coefficients k -> Theta_k of a polynomial table.
struct CoefficientTable {
  Index rows = 1;
  Index cols = 1;
  std::map<MultiIndex, Matrix> coefficients;
};

struct SymbolSource {
  enum class Kind { Expression, Inline, File };
  Kind kind = Kind::Expression;
  std::string text;  ///< expression text or file path
  int line = 0;
  std::vector<SymbolFactor> factors;
  std::optional<CoefficientTable> numerator;
  std::optional<ScalarPolynomial> denominator;
};

struct SubspaceSource {
  enum class Kind { Vanishing, Ideal, Basis, BasisFile };
  Kind kind = Kind::Vanishing;
  int line = 0;
  std::vector<MultiIndex> generators;
  std::string path;
  int channels = 1;
  /// Sparse columns: (k, channel) -> value.
  std::vector<std::map<std::pair<MultiIndex, int>, Complex>> columns;
};

struct TupleSource {
  enum class Kind { Zero, RandomNilpotent, Scalars, Inline, File };
  Kind kind = Kind::Zero;
  int line = 0;
  Index dimension = 4;
  std::vector<Complex> scalars;
  std::vector<Matrix> operators;
  std::string path;
};

/// Optional asserted outcome. `status` is "ok", "error" or an error prefix.
struct Expectation {
  std::map<std::string, bool> verdicts;
  std::optional<std::string> status;
};

struct Scenario {
  std::string id;
  Command command = Command::CheckBeurling;
  std::size_t variables = 2;
  std::vector<int> degree;
  double tol = 1e-8;
  std::vector<int> margin;
  std::uint64_t seed = 0;
  std::optional<SymbolSource> symbol;
  std::optional<SymbolSource> theta;
  std::optional<SymbolSource> phi;
  std::optional<SubspaceSource> subspace;
  std::optional<TupleSource> tuple;
  std::size_t samples = 20;
  double radius = 0.6;
  std::size_t budget = 2000;
  double search_radius = 0.9;
  unsigned jobs = 1;
  int torus_samples = 32;
  std::optional<Expectation> expect;
  /// Directory against which file references resolve.
  std::string base_dir = ".";
  std::string origin = "<text>";
};

/// Parses and validates a scenario; defaults applied. File references are
/// recorded and loaded when the scenario runs. Throws ParseError.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = ".");
/// Reads a scenario file; a missing `id` defaults to the file stem.
Scenario load_scenario(const std::string& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::vector<int>> degree;
};

/// Throws Error(Parse) when an override violates the scenario invariants.
void apply_overrides(Scenario& s, const Overrides& o);

/// Factors joined by '*'. Throws ParseError(line, field).
std::vector<SymbolFactor> parse_symbol_expression(std::string_view text, std::size_t variables, int line,
                                                  const std::string& field);

AnalyticSymbol build_symbol(const SymbolSource& src, std::size_t variables, const std::string& base_dir);
SubspaceData build_subspace(const SubspaceSource& src, const TruncationGrid& grid, const std::string& base_dir);
ContractionTuple build_tuple(const TupleSource& src, std::size_t variables, std::uint64_t seed,
                             const std::string& base_dir);

SubmoduleOptions submodule_options(const Scenario& s);
MultiIndex caps(const Scenario& s);

}  // namespace hardymod::cli
