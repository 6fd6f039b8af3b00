#include "hardymod/cli/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "hardymod/cli/config.hpp"
#include "hardymod/error.hpp"

namespace hardymod::cli {

namespace {

constexpr std::string_view kCommandNames[] = {"check-beurling", "check-brehmer", "dilate",
                                              "factor",         "example42",     "identity-suite"};

const std::set<std::string> kKeys = {
    "id",        "command", "variables", "degree",      "tol",     "margin",    "seed",
    "symbol",    "theta",   "phi",       "symbol_file", "theta_file", "phi_file", "subspace",
    "basis_file", "tuple",  "tuple_file", "dimension",  "samples", "radius",    "budget",
    "search_radius", "jobs", "torus_samples"};

bool is_tuple_block(const std::string& label) {
  return std::regex_match(label, std::regex(R"(T[1-9][0-9]*)"));
}

bool is_symbol_block(const std::string& label) {
  static const std::set<std::string> allowed = {
      "symbol", "symbol.numerator", "symbol.denominator", "theta", "theta.numerator",
      "theta.denominator", "phi", "phi.numerator", "phi.denominator"};
  return allowed.count(label) > 0;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

MultiIndex read_exponents(const std::vector<std::string>& t, std::size_t offset, std::size_t n, int line,
                          const std::string& field) {
  std::vector<int> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long long v = to_integer(t[offset + i], line, field);
    if (v < 0) throw ParseError(line, field, "negative exponent");
    k[i] = static_cast<int>(v);
  }
  return MultiIndex(std::move(k));
}

/// Block body: optional `rows = r` / `cols = c`, then rows of
/// `k_1 .. k_n re im` (scalar) or `k_1 .. k_n row col re im`.
CoefficientTable parse_coefficients(const ConfigBlock& b, std::size_t n) {
  CoefficientTable table;
  std::vector<std::pair<int, std::vector<std::string>>> data;
  for (const auto& [line, text] : b.lines) {
    if (const auto eq = text.find('='); eq != std::string::npos) {
      const std::string key = trim(std::string_view(text).substr(0, eq));
      const long long v = to_integer(text.substr(eq + 1), line, b.label + "." + key);
      if (v < 1) throw ParseError(line, b.label + "." + key, "must be at least 1");
      if (key == "rows") {
        table.rows = v;
      } else if (key == "cols") {
        table.cols = v;
      } else {
        throw ParseError(line, b.label + "." + key, "unknown setting");
      }
      continue;
    }
    data.emplace_back(line, tokens(text));
  }
  std::set<std::tuple<MultiIndex, Index, Index>> seen;
  for (const auto& [line, t] : data) {
    const bool scalar_row = t.size() == n + 2;
    if (!scalar_row && t.size() != n + 4) {
      throw ParseError(line, b.label, "malformed coefficient row: expected " + std::to_string(n + 2) + " or " +
                                          std::to_string(n + 4) + " values");
    }
    if (scalar_row && (table.rows != 1 || table.cols != 1)) {
      throw ParseError(line, b.label, "matrix symbol rows need row and column indices");
    }
    const MultiIndex k = read_exponents(t, 0, n, line, b.label);
    Index r = 0;
    Index c = 0;
    if (!scalar_row) {
      r = to_integer(t[n], line, b.label);
      c = to_integer(t[n + 1], line, b.label);
      if (r < 0 || r >= table.rows || c < 0 || c >= table.cols) {
        throw ParseError(line, b.label, "entry index outside " + std::to_string(table.rows) + "x" +
                                            std::to_string(table.cols));
      }
    }
    const Complex v(to_double(t[t.size() - 2], line, b.label), to_double(t.back(), line, b.label));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ParseError(line, b.label, "non-finite coefficient");
    if (!seen.insert({k, r, c}).second) throw ParseError(line, b.label, "duplicate coefficient");
    auto [it, inserted] = table.coefficients.try_emplace(k, Matrix::Zero(table.rows, table.cols));
    it->second(r, c) = v;
  }
  if (table.coefficients.empty()) throw ParseError(b.line, b.label, "no coefficients");
  return table;
}

ScalarPolynomial parse_denominator(const ConfigBlock& b, std::size_t n) {
  ScalarPolynomial p;
  for (const auto& [line, text] : b.lines) {
    const auto t = tokens(text);
    if (t.size() != n + 2 && t.size() != n + 4) {
      throw ParseError(line, b.label, "malformed coefficient row: expected " + std::to_string(n + 2) + " or " +
                                          std::to_string(n + 4) + " values");
    }
    if (t.size() == n + 4 && (to_integer(t[n], line, b.label) != 0 || to_integer(t[n + 1], line, b.label) != 0)) {
      throw ParseError(line, b.label, "denominators are scalar: row and column must be 0");
    }
    const MultiIndex k = read_exponents(t, 0, n, line, b.label);
    if (p.count(k)) throw ParseError(line, b.label, "duplicate coefficient");
    p[k] = Complex(to_double(t[t.size() - 2], line, b.label), to_double(t.back(), line, b.label));
  }
  if (p.empty()) throw ParseError(b.line, b.label, "no coefficients");
  return p;
}

/// Inline blocks `<name>` or `<name>.numerator` + `<name>.denominator`.
std::optional<SymbolSource> symbol_from_blocks(const ConfigDocument& doc, const std::string& poly,
                                               const std::string& num, const std::string& den, std::size_t n) {
  const ConfigBlock* p = doc.block(poly);
  const ConfigBlock* nu = doc.block(num);
  const ConfigBlock* de = doc.block(den);
  if (!p && !nu && !de) return std::nullopt;
  SymbolSource src;
  src.kind = SymbolSource::Kind::Inline;
  if (p) {
    if (nu || de) throw ParseError(p->line, poly, "give either a coefficient block or numerator and denominator");
    src.line = p->line;
    src.numerator = parse_coefficients(*p, n);
    return src;
  }
  if (!nu || !de) {
    const ConfigBlock* b = nu ? nu : de;
    throw ParseError(b->line, b->label, "rational symbols need both numerator and denominator blocks");
  }
  src.line = nu->line;
  src.numerator = parse_coefficients(*nu, n);
  src.denominator = parse_denominator(*de, n);
  return src;
}

std::vector<std::map<std::pair<MultiIndex, int>, Complex>> parse_basis(const ConfigBlock& b, std::size_t n,
                                                                       int& channels) {
  std::map<long long, std::map<std::pair<MultiIndex, int>, Complex>> cols;
  for (const auto& [line, text] : b.lines) {
    if (const auto eq = text.find('='); eq != std::string::npos) {
      const std::string key = trim(std::string_view(text).substr(0, eq));
      if (key != "channels") throw ParseError(line, b.label + "." + key, "unknown setting");
      const long long v = to_integer(text.substr(eq + 1), line, "channels");
      if (v < 1) throw ParseError(line, "channels", "must be at least 1");
      channels = static_cast<int>(v);
      continue;
    }
    const auto t = tokens(text);
    if (t.size() != n + 4) {
      throw ParseError(line, b.label, "malformed basis row: expected column, " + std::to_string(n) +
                                          " exponents, channel, re, im");
    }
    const long long col = to_integer(t[0], line, b.label);
    if (col < 0) throw ParseError(line, b.label, "negative column");
    const MultiIndex k = read_exponents(t, 1, n, line, b.label);
    const long long ch = to_integer(t[n + 1], line, b.label);
    if (ch < 0 || ch >= channels) throw ParseError(line, b.label, "channel out of range");
    auto& c = cols[col];
    const auto key = std::make_pair(k, static_cast<int>(ch));
    if (c.count(key)) throw ParseError(line, b.label, "duplicate entry");
    c[key] = Complex(to_double(t[n + 2], line, b.label), to_double(t[n + 3], line, b.label));
  }
  if (cols.empty()) throw ParseError(b.line, b.label, "no basis entries");
  std::vector<std::map<std::pair<MultiIndex, int>, Complex>> out;
  for (auto& [_, c] : cols) out.push_back(std::move(c));
  return out;
}

std::vector<Matrix> parse_tuple_blocks(const ConfigDocument& doc, std::size_t n, Index dim, int line) {
  std::vector<Matrix> ops;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string label = "T" + std::to_string(i);
    const ConfigBlock* b = doc.block(label);
    if (!b) throw ParseError(line, label, "missing operator block");
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [l, text] : b->lines) {
      const auto t = tokens(text);
      if (t.size() != 4) throw ParseError(l, label, "malformed entry: expected row, col, re, im");
      const long long r = to_integer(t[0], l, label);
      const long long c = to_integer(t[1], l, label);
      if (r < 0 || r >= dim || c < 0 || c >= dim) throw ParseError(l, label, "entry index outside the dimension");
      m(r, c) = Complex(to_double(t[2], l, label), to_double(t[3], l, label));
    }
    ops.push_back(std::move(m));
  }
  for (const auto& b : doc.blocks) {
    if (is_tuple_block(b.label) && std::stoul(b.label.substr(1)) > n) {
      throw ParseError(b.line, b.label, "more operator blocks than variables");
    }
  }
  return ops;
}

Index read_dimension(const ConfigDocument& doc, Index fallback) {
  const ConfigEntry* e = doc.find("dimension");
  if (!e) return fallback;
  const long long d = to_integer(e->value, e->line, "dimension");
  if (d < 1) throw ParseError(e->line, "dimension", "must be at least 1");
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AnalyticSymbol lift(const AnalyticSymbol& s, Index m) {
  if (m == 1) return s;
  const Matrix eye = Matrix::Identity(m, m);
  if (s.is_polynomial()) {
    AnalyticSymbol::CoefficientMap coeffs;
    for (const auto& [k, c] : s.coefficients()) coeffs[k] = c(0, 0) * eye;
    return AnalyticSymbol::polynomial(s.variables(), m, m, std::move(coeffs));
  }
  const auto& form = *s.rational_form();
  return AnalyticSymbol::rational(lift(*form.numerator, m), form.denominator);
}

AnalyticSymbol times(const AnalyticSymbol& a, const AnalyticSymbol& b) {
  const bool a_scalar = a.rows() == 1 && a.cols() == 1;
  const bool b_scalar = b.rows() == 1 && b.cols() == 1;
  if (a_scalar && !b_scalar) return lift(a, b.rows()) * b;
  if (b_scalar && !a_scalar) return a * lift(b, a.cols());
  return a * b;
}

AnalyticSymbol factor_symbol(const SymbolFactor& f, std::size_t n) {
  switch (f.kind) {
    case SymbolFactor::Kind::Monomial: {
      std::vector<int> k(n, 0);
      k[f.variable] = f.power;
      return AnalyticSymbol::monomial(MultiIndex(std::move(k)));
    }
    case SymbolFactor::Kind::Blaschke:
      return AnalyticSymbol::blaschke(n, f.variable, f.value);
    case SymbolFactor::Kind::Phi:
      return phi_symbol();
    case SymbolFactor::Kind::Unimodular:
      return AnalyticSymbol::constant(n, Matrix::Constant(1, 1, std::polar(1.0, f.angle)));
    case SymbolFactor::Kind::Rotation: {
      Matrix r(2, 2);
      r << std::cos(f.angle), -std::sin(f.angle), std::sin(f.angle), std::cos(f.angle);
      return AnalyticSymbol::constant(n, r);
    }
    case SymbolFactor::Kind::Scalar:
      return AnalyticSymbol::constant(n, Matrix::Constant(1, 1, f.value));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown symbol factor");
}

AnalyticSymbol from_table(const CoefficientTable& num, const std::optional<ScalarPolynomial>& den, std::size_t n) {
  AnalyticSymbol p = AnalyticSymbol::polynomial(n, num.rows, num.cols, num.coefficients);
  if (!den) return p;
  return AnalyticSymbol::rational(p, *den);
}

void check_positive(double v, int line, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(line, field, "must be positive");
}

void check_radius(double v, int line, const std::string& field) {
  if (!(v > 0.0 && v < 1.0)) throw ParseError(line, field, "must lie in (0, 1)");
}

int line_of(const ConfigDocument& doc, std::string_view key) {
  const ConfigEntry* e = doc.find(key);
  return e ? e->line : 0;
}

void validate(const Scenario& s, const ConfigDocument& doc) {
  check_positive(s.tol, line_of(doc, "tol"), "tol");
  if (s.degree.size() != s.variables) {
    throw ParseError(line_of(doc, "degree"), "degree",
                     "expected " + std::to_string(s.variables) + " caps, got " + std::to_string(s.degree.size()));
  }
  for (int d : s.degree) {
    if (d < 1) throw ParseError(line_of(doc, "degree"), "degree", "caps must be at least 1");
  }
  if (!s.margin.empty()) {
    if (s.margin.size() != s.variables) throw ParseError(line_of(doc, "margin"), "margin", "one entry per variable");
    for (int m : s.margin) {
      if (m < 0) throw ParseError(line_of(doc, "margin"), "margin", "must be non-negative");
    }
  }
  if (s.samples < 1) throw ParseError(line_of(doc, "samples"), "samples", "must be at least 1");
  check_radius(s.radius, line_of(doc, "radius"), "radius");
  check_radius(s.search_radius, line_of(doc, "search_radius"), "search_radius");
  if (s.budget < 1) throw ParseError(line_of(doc, "budget"), "budget", "must be at least 1");
  if (s.jobs < 1) throw ParseError(line_of(doc, "jobs"), "jobs", "must be at least 1");
  if (s.torus_samples < 1) throw ParseError(line_of(doc, "torus_samples"), "torus_samples", "must be at least 1");

  const int cmd_line = line_of(doc, "command");
  const bool has_symbol = s.symbol.has_value();
  const bool has_subspace = s.subspace.has_value();
  const bool has_tuple = s.tuple.has_value();
  switch (s.command) {
    case Command::CheckBeurling:
    case Command::IdentitySuite:
      if (has_symbol == has_subspace) throw ParseError(cmd_line, "symbol", "give exactly one of symbol or subspace");
      if (has_tuple) throw ParseError(line_of(doc, "tuple"), "tuple", "not used by " + to_string(s.command));
      break;
    case Command::CheckBrehmer:
      if (int(has_symbol) + int(has_subspace) + int(has_tuple) != 1) {
        throw ParseError(cmd_line, "tuple", "give exactly one of tuple, symbol or subspace");
      }
      break;
    case Command::Dilate:
      if (!has_tuple) throw ParseError(cmd_line, "tuple", "missing tuple source");
      break;
    case Command::Factor:
      if (!s.theta) throw ParseError(cmd_line, "theta", "missing symbol source");
      if (!s.phi) throw ParseError(cmd_line, "phi", "missing symbol source");
      break;
    case Command::ConstantsQuotient:
      if (s.variables != 2) throw ParseError(line_of(doc, "variables"), "variables", "example42 needs 2 variables");
      break;
  }
}

std::optional<SymbolSource> read_symbol(const ConfigDocument& doc, const std::string& name, std::size_t n) {
  const ConfigEntry* expr = doc.find(name);
  const ConfigEntry* file = doc.find(name + "_file");
  auto inline_src = symbol_from_blocks(doc, name, name + ".numerator", name + ".denominator", n);
  const int given = int(expr != nullptr) + int(file != nullptr) + int(inline_src.has_value());
  if (given > 1) {
    const int line = expr ? expr->line : file ? file->line : inline_src->line;
    throw ParseError(line, name, "give one source: expression, file or inline block");
  }
  if (expr) {
    SymbolSource src;
    src.kind = SymbolSource::Kind::Expression;
    src.text = expr->value;
    src.line = expr->line;
    src.factors = parse_symbol_expression(expr->value, n, expr->line, name);
    return src;
  }
  if (file) {
    if (file->value.empty()) throw ParseError(file->line, name + "_file", "empty path");
    SymbolSource src;
    src.kind = SymbolSource::Kind::File;
    src.text = file->value;
    src.line = file->line;
    return src;
  }
  return inline_src;
}

std::optional<SubspaceSource> read_subspace(const ConfigDocument& doc, std::size_t n) {
  const ConfigEntry* e = doc.find("subspace");
  const ConfigEntry* file = doc.find("basis_file");
  if (!e && !file) {
    if (const ConfigBlock* b = doc.block("basis")) throw ParseError(b->line, "basis", "block needs 'subspace = basis'");
    return std::nullopt;
  }
  SubspaceSource src;
  if (file) {
    if (e && e->value != "basis_file") throw ParseError(file->line, "basis_file", "conflicts with 'subspace'");
    src.kind = SubspaceSource::Kind::BasisFile;
    src.line = file->line;
    src.path = file->value;
    return src;
  }
  src.line = e->line;
  const auto words = tokens(e->value);
  if (words.empty()) throw ParseError(e->line, "subspace", "empty value");
  if (words[0] == "vanishing" && words.size() == 1) {
    src.kind = SubspaceSource::Kind::Vanishing;
  } else if (words[0] == "ideal") {
    src.kind = SubspaceSource::Kind::Ideal;
    const std::string rest = trim(std::string_view(e->value).substr(e->value.find("ideal") + 5));
    for (const auto& g : split(rest, ';')) {
      const auto k = to_int_list(g, e->line, "subspace");
      if (k.size() != n) throw ParseError(e->line, "subspace", "generator '" + g + "' has the wrong length");
      for (int v : k) {
        if (v < 0) throw ParseError(e->line, "subspace", "negative exponent");
      }
      src.generators.emplace_back(k);
    }
  } else if (words[0] == "basis" && words.size() == 1) {
    src.kind = SubspaceSource::Kind::Basis;
    const ConfigBlock* b = doc.block("basis");
    if (!b) throw ParseError(e->line, "basis", "missing basis block");
    src.columns = parse_basis(*b, n, src.channels);
  } else {
    throw ParseError(e->line, "subspace", "unknown subspace '" + e->value + "'");
  }
  return src;
}

std::optional<TupleSource> read_tuple(const ConfigDocument& doc, std::size_t n) {
  const ConfigEntry* e = doc.find("tuple");
  const ConfigEntry* file = doc.find("tuple_file");
  if (!e && !file) {
    for (const auto& b : doc.blocks) {
      if (is_tuple_block(b.label)) throw ParseError(b.line, b.label, "operator blocks need 'tuple = inline'");
    }
    return std::nullopt;
  }
  TupleSource src;
  if (file) {
    if (e) throw ParseError(file->line, "tuple_file", "conflicts with 'tuple'");
    src.kind = TupleSource::Kind::File;
    src.line = file->line;
    src.path = file->value;
    return src;
  }
  src.line = e->line;
  const auto words = tokens(e->value);
  if (words.empty()) throw ParseError(e->line, "tuple", "empty value");
  if (words[0] == "zero" && words.size() == 1) {
    src.kind = TupleSource::Kind::Zero;
    src.dimension = read_dimension(doc, 4);
  } else if (words[0] == "random-nilpotent" && words.size() == 1) {
    src.kind = TupleSource::Kind::RandomNilpotent;
    src.dimension = read_dimension(doc, 4);
  } else if (words[0] == "scalars") {
    src.kind = TupleSource::Kind::Scalars;
    src.dimension = 1;
    for (std::size_t i = 1; i < words.size(); ++i) src.scalars.emplace_back(to_double(words[i], e->line, "tuple"));
    if (src.scalars.size() != n) throw ParseError(e->line, "tuple", "one scalar per variable");
  } else if (words[0] == "inline" && words.size() == 1) {
    src.kind = TupleSource::Kind::Inline;
    src.dimension = read_dimension(doc, 0);
    if (src.dimension == 0) throw ParseError(e->line, "dimension", "inline tuples need a dimension");
    src.operators = parse_tuple_blocks(doc, n, src.dimension, e->line);
  } else {
    throw ParseError(e->line, "tuple", "unknown tuple '" + e->value + "'");
  }
  if (src.kind != TupleSource::Kind::Inline) {
    for (const auto& b : doc.blocks) {
      if (is_tuple_block(b.label)) throw ParseError(b.line, b.label, "operator blocks need 'tuple = inline'");
    }
  }
  return src;
}

std::optional<Expectation> read_expect(const ConfigDocument& doc) {
  const ConfigBlock* b = doc.block("expect");
  if (!b) return std::nullopt;
  Expectation ex;
  for (const auto& [line, text] : b->lines) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expect", "expected 'name = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key == "status") {
      if (value != "ok" && value.rfind("error", 0) != 0) {
        throw ParseError(line, "expect.status", "expected 'ok' or 'error[: message]'");
      }
      ex.status = value;
    } else if (value == "true" || value == "false") {
      if (ex.verdicts.count(key)) throw ParseError(line, "expect." + key, "duplicate expectation");
      ex.verdicts[key] = value == "true";
    } else {
      throw ParseError(line, "expect." + key, "expected true or false");
    }
  }
  return ex;
}

}  // namespace

std::string to_string(Command c) { return std::string(kCommandNames[static_cast<int>(c)]); }

std::optional<Command> command_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i) {
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  }
  return std::nullopt;
}

std::vector<SymbolFactor> parse_symbol_expression(std::string_view text, std::size_t variables, int line,
                                                  const std::string& field) {
  static const std::regex monomial(R"(z([0-9]+)(\^([0-9]+))?)");
  static const std::regex call(R"(([a-z]+)\((.*)\))");
  std::vector<SymbolFactor> out;
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (compact.empty()) throw ParseError(line, field, "empty symbol expression");
  for (const auto& term : split(compact, '*')) {
    SymbolFactor f;
    std::smatch m;
    if (term.empty()) throw ParseError(line, field, "empty factor");
    if (std::regex_match(term, m, monomial)) {
      const long long v = to_integer(m[1].str(), line, field);
      if (v < 1 || static_cast<std::size_t>(v) > variables) {
        throw ParseError(line, field, "variable z" + m[1].str() + " out of range");
      }
      f.kind = SymbolFactor::Kind::Monomial;
      f.variable = static_cast<std::size_t>(v - 1);
      f.power = m[3].matched ? static_cast<int>(to_integer(m[3].str(), line, field)) : 1;
    } else if (term == "phi") {
      if (variables != 2) throw ParseError(line, field, "phi needs 2 variables");
      f.kind = SymbolFactor::Kind::Phi;
    } else if (std::regex_match(term, m, call)) {
      const std::string name = m[1].str();
      const auto args = split(m[2].str(), ',');
      if (name == "blaschke") {
        if (args.size() != 2 && args.size() != 3) throw ParseError(line, field, "blaschke(variable, re[, im])");
        const long long v = to_integer(args[0], line, field);
        if (v < 1 || static_cast<std::size_t>(v) > variables) {
          throw ParseError(line, field, "blaschke variable out of range");
        }
        const Complex a(to_double(args[1], line, field), args.size() == 3 ? to_double(args[2], line, field) : 0.0);
        if (!(std::abs(a) < 1.0)) throw ParseError(line, field, "Blaschke zero must lie in the open disc");
        f.kind = SymbolFactor::Kind::Blaschke;
        f.variable = static_cast<std::size_t>(v - 1);
        f.value = a;
      } else if (name == "unimodular" || name == "rotation") {
        if (args.size() != 1) throw ParseError(line, field, name + "(angle)");
        f.kind = name == "unimodular" ? SymbolFactor::Kind::Unimodular : SymbolFactor::Kind::Rotation;
        f.angle = to_double(args[0], line, field);
      } else {
        throw ParseError(line, field, "unknown factor '" + name + "'");
      }
    } else {
      f.kind = SymbolFactor::Kind::Scalar;
      try {
        f.value = to_double(term, line, field);
      } catch (const ParseError&) {
        throw ParseError(line, field, "unrecognized factor '" + term + "'");
      }
    }
    out.push_back(f);
  }
  return out;
}

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
  const ConfigDocument doc = parse_structured_text(text);
  for (const auto& e : doc.entries) {
    if (!kKeys.count(e.key)) throw ParseError(e.line, e.key, "unknown field");
  }
  for (const auto& b : doc.blocks) {
    if (b.label != "expect" && b.label != "basis" && !is_symbol_block(b.label) && !is_tuple_block(b.label)) {
      throw ParseError(b.line, b.label, "unknown block");
    }
  }

  Scenario s;
  s.base_dir = base_dir;
  if (const auto* e = doc.find("id")) {
    if (e->value.empty()) throw ParseError(e->line, "id", "empty id");
    s.id = e->value;
  }
  const auto* cmd = doc.find("command");
  if (!cmd) throw ParseError(0, "command", "missing command");
  const auto c = command_from_string(cmd->value);
  if (!c) throw ParseError(cmd->line, "command", "unknown command '" + cmd->value + "'");
  s.command = *c;

  const auto* deg = doc.find("degree");
  if (const auto* e = doc.find("variables")) {
    const long long v = to_integer(e->value, e->line, "variables");
    if (v < 1 || v > 8) throw ParseError(e->line, "variables", "must lie in 1..8");
    s.variables = static_cast<std::size_t>(v);
  } else if (deg) {
    s.variables = to_int_list(deg->value, deg->line, "degree").size();
  }
  if (deg) {
    s.degree = to_int_list(deg->value, deg->line, "degree");
  } else if (s.command == Command::ConstantsQuotient) {
    s.degree = {20, 20};
  } else if (s.command == Command::Dilate) {
    s.degree.assign(s.variables, 4);
  } else {
    throw ParseError(0, "degree", "missing grid caps");
  }
  if (const auto* e = doc.find("tol")) s.tol = to_double(e->value, e->line, "tol");
  if (const auto* e = doc.find("margin")) s.margin = to_int_list(e->value, e->line, "margin");
  if (const auto* e = doc.find("seed")) {
    const long long v = to_integer(e->value, e->line, "seed");
    if (v < 0) throw ParseError(e->line, "seed", "must be non-negative");
    s.seed = static_cast<std::uint64_t>(v);
  }
  auto count = [&](const char* key, auto& target) {
    if (const auto* e = doc.find(key)) {
      const long long v = to_integer(e->value, e->line, key);
      if (v < 1) throw ParseError(e->line, key, "must be at least 1");
      target = static_cast<std::remove_reference_t<decltype(target)>>(v);
    }
  };
  count("samples", s.samples);
  count("budget", s.budget);
  count("jobs", s.jobs);
  s.torus_samples = s.command == Command::ConstantsQuotient ? 64 : 32;
  count("torus_samples", s.torus_samples);
  if (const auto* e = doc.find("radius")) s.radius = to_double(e->value, e->line, "radius");
  if (const auto* e = doc.find("search_radius")) s.search_radius = to_double(e->value, e->line, "search_radius");

  s.symbol = read_symbol(doc, "symbol", s.variables);
  s.theta = read_symbol(doc, "theta", s.variables);
  s.phi = read_symbol(doc, "phi", s.variables);
  s.subspace = read_subspace(doc, s.variables);
  s.tuple = read_tuple(doc, s.variables);
  if (doc.find("dimension") && !(s.tuple && (s.tuple->kind == TupleSource::Kind::Zero ||
                                              s.tuple->kind == TupleSource::Kind::RandomNilpotent ||
                                              s.tuple->kind == TupleSource::Kind::Inline))) {
    throw ParseError(line_of(doc, "dimension"), "dimension", "only used by zero, random-nilpotent and inline tuples");
  }
  s.expect = read_expect(doc);
  validate(s, doc);
  if (s.id.empty()) s.id = to_string(s.command);
  return s;
}

Scenario load_scenario(const std::string& path) {
  const std::string text = read_file(path);
  const std::filesystem::path p(path);
  Scenario s;
  try {
    s = parse_scenario(text, p.parent_path().empty() ? "." : p.parent_path().string());
  } catch (const ParseError& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  if (!parse_structured_text(text).find("id")) s.id = p.stem().string();
  s.origin = path;
  return s;
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.seed) s.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0.0) || !std::isfinite(*o.tol)) throw Error(ErrorKind::Parse, "tol override must be positive");
    s.tol = *o.tol;
  }
  if (o.degree) {
    if (o.degree->size() != s.variables) {
      throw Error(ErrorKind::Parse, s.id + ": degree override has " + std::to_string(o.degree->size()) +
                                        " caps, scenario has " + std::to_string(s.variables) + " variables");
    }
    for (int d : *o.degree) {
      if (d < 1) throw Error(ErrorKind::Parse, "degree override caps must be at least 1");
    }
    s.degree = *o.degree;
  }
}

AnalyticSymbol build_symbol(const SymbolSource& src, std::size_t variables, const std::string& base_dir) {
  switch (src.kind) {
    case SymbolSource::Kind::Expression: {
      AnalyticSymbol out = factor_symbol(src.factors.front(), variables);
      for (std::size_t i = 1; i < src.factors.size(); ++i) out = times(out, factor_symbol(src.factors[i], variables));
      return out;
    }
    case SymbolSource::Kind::Inline:
      return from_table(*src.numerator, src.denominator, variables);
    case SymbolSource::Kind::File: {
      const std::string path = resolve(base_dir, src.text);
      const ConfigDocument doc = load_structured_text(path);
      try {
        if (!doc.entries.empty()) throw ParseError(doc.entries.front().line, doc.entries.front().key, "unexpected field");
        auto inline_src = symbol_from_blocks(doc, "coefficients", "numerator", "denominator", variables);
        if (!inline_src) throw ParseError(0, "coefficients", "no coefficient block");
        return from_table(*inline_src->numerator, inline_src->denominator, variables);
      } catch (const ParseError& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
      }
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown symbol source");
}

SubspaceData build_subspace(const SubspaceSource& src, const TruncationGrid& grid, const std::string& base_dir) {
  switch (src.kind) {
    case SubspaceSource::Kind::Vanishing:
      return vanishing_at_origin(grid);
    case SubspaceSource::Kind::Ideal:
      return monomial_ideal(grid, src.generators);
    case SubspaceSource::Kind::Basis:
    case SubspaceSource::Kind::BasisFile: {
      auto columns = src.columns;
      int channels = src.channels;
      if (src.kind == SubspaceSource::Kind::BasisFile) {
        const std::string path = resolve(base_dir, src.path);
        const ConfigDocument doc = load_structured_text(path);
        try {
          const ConfigBlock* b = doc.block("basis");
          if (!b) throw ParseError(0, "basis", "no basis block");
          columns = parse_basis(*b, grid.variables(), channels);
        } catch (const ParseError& e) {
          throw Error(ErrorKind::Parse, path + ": " + e.what());
        }
      }
      const TruncationGrid g = grid.with_coeff_dim(channels);
      Matrix m = Matrix::Zero(g.size(), static_cast<Index>(columns.size()));
      for (std::size_t c = 0; c < columns.size(); ++c) {
        for (const auto& [key, v] : columns[c]) {
          if (!g.contains(key.first)) {
            throw Error(ErrorKind::InvalidArgument, "basis entry z^" + key.first.to_string() + " lies outside the grid");
          }
          m(g.index(key.first, key.second), static_cast<Index>(c)) = v;
        }
      }
      return make_subspace(g, m);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown subspace source");
}

ContractionTuple build_tuple(const TupleSource& src, std::size_t variables, std::uint64_t seed,
                             const std::string& base_dir) {
  switch (src.kind) {
    case TupleSource::Kind::Zero:
      return ContractionTuple(std::vector<Matrix>(variables, Matrix::Zero(src.dimension, src.dimension)));
    case TupleSource::Kind::RandomNilpotent:
      if (variables != 2) throw Error(ErrorKind::InvalidArgument, "random-nilpotent tuples are pairs");
      return random_nilpotent_brehmer_pair(seed, src.dimension);
    case TupleSource::Kind::Scalars: {
      std::vector<Matrix> ops;
      for (const auto& a : src.scalars) ops.push_back(Matrix::Constant(1, 1, a));
      return ContractionTuple(std::move(ops));
    }
    case TupleSource::Kind::Inline:
      return ContractionTuple(src.operators);
    case TupleSource::Kind::File: {
      const std::string path = resolve(base_dir, src.path);
      const ConfigDocument doc = load_structured_text(path);
      std::vector<Matrix> ops;
      try {
        for (const auto& e : doc.entries) {
          if (e.key != "dimension") throw ParseError(e.line, e.key, "unexpected field");
        }
        const Index dim = read_dimension(doc, 0);
        if (dim == 0) throw ParseError(0, "dimension", "missing dimension");
        ops = parse_tuple_blocks(doc, variables, dim, 0);
      } catch (const ParseError& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
      }
      return ContractionTuple(std::move(ops));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown tuple source");
}

SubmoduleOptions submodule_options(const Scenario& s) {
  SubmoduleOptions o;
  o.tol = s.tol;
  if (!s.margin.empty()) o.rational_margin = MultiIndex(s.margin);
  o.torus_samples = s.torus_samples;
  return o;
}

MultiIndex caps(const Scenario& s) { return MultiIndex(s.degree); }

}  // namespace hardymod::cli
