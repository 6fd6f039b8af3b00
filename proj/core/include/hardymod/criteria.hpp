#pragma once

#include <map>
#include <string>

#include "hardymod/operators.hpp"

namespace hardymod {

/// Named residuals with a verdict each (verdict = residual <= tolerance),
/// plus free-form numeric diagnostics that carry no verdict.
struct CriterionReport {
  double tolerance = kDefaultTolerance;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> diagnostics;

  void add(const std::string& name, double residual) {
    residuals[name] = residual;
    verdicts[name] = residual <= tolerance;
  }
  bool verdict(const std::string& name) const { return verdicts.at(name); }
  double residual(const std::string& name) const { return residuals.at(name); }
  /// All verdicts true.
  bool all() const;
  /// Folds another report's entries in under `prefix`.
  void merge(const CriterionReport& other, const std::string& prefix = "");
};

}  // namespace hardymod
