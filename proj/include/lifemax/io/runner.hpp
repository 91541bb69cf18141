#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifemax/io/config.hpp"
#include "lifemax/io/report.hpp"

namespace lifemax::io {

// Process exit codes, fixed contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInapplicable = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitInternal = 5;

/// Relative disagreement between closed form and LP above which a
/// solver=both run is declared inapplicable.
inline constexpr double kGapLimit = 1e-7;

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;            // human-readable status or error
  std::optional<Report> report;   // set on success
};

/// Solves one config and writes its report. Never throws; failures map
/// onto the exit-code contract.
RunOutcome run_config(const RunConfig& cfg, bool rational);

struct SweepSpec {
  std::string param;  // N, a, lambda_scale, P0_over_N0 or k
  std::vector<double> values;
};

/// One run per value, emitted as a CSV table to the configured output.
RunOutcome run_sweep(const RunConfig& cfg, const SweepSpec& spec, bool rational);

/// Parse plus validation only; reports what would run.
RunOutcome validate_only(const RunConfig& cfg);

}  // namespace lifemax::io
