#pragma once

#include <vector>

#include "hardymod/cli/report.hpp"
#include "hardymod/cli/scenario.hpp"

namespace hardymod::cli {

struct RunOptions {
  /// Adds runtime_seconds; off by default so reports stay byte-stable.
  bool timing = false;
};

/// Never throws: domain errors end up in `status`, unreadable inputs set
/// `input_error`, expectations are checked last.
Report run_scenario(const Scenario& s, const RunOptions& options = {});

/// Runs independent scenarios on `jobs` workers; reports keep input order.
std::vector<Report> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs,
                              const RunOptions& options = {});

}  // namespace hardymod::cli
