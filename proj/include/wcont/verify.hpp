#ifndef WCONT_VERIFY_HPP
#define WCONT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcont/rng.hpp"

namespace wcont {

enum class Family { ppr, w2lip, best, cor_best, jpt, dbar_props, marton_chain, fc, gic_corner, discrete_corner };

std::string to_string(Family f);
Family parse_family(const std::string& text);
const std::vector<Family>& all_families();

struct TrialConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  Family family = Family::jpt;
  /// Worker threads; 0 picks the hardware concurrency. Results never depend
  /// on it.
  std::size_t threads = 0;
  /// Test-only hook: every right-hand side is multiplied by this factor.
  double rhs_scale = 1.0;
};

/// One evaluated inequality lhs <= rhs. `error` is the numeric uncertainty
/// charged against the slack; `allowance` is slack granted by construction
/// (for example the envelope grid error).
struct CheckOutcome {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;
  double allowance = 0.0;
  bool certified = true;

  double slack(double rhs_scale = 1.0) const { return rhs * rhs_scale + allowance - lhs - error; }
};

struct Failure {
  std::size_t trial = 0;
  std::string check;
  std::uint64_t digest = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct CheckSummary {
  std::string check;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  double min_slack = 0.0;
};

struct VerifyReport {
  Family family = Family::jpt;
  std::uint64_t seed = 0;
  std::size_t trials_run = 0;
  double tolerance = 0.0;
  std::vector<Failure> failures;
  double min_slack = 0.0;
  bool certified = true;
  double total_error = 0.0;
  std::vector<CheckSummary> checks;
  /// Sanity observations that are not theorem-backed (for example
  /// monotonicity of the outer bound); never counted as failures.
  std::vector<std::string> warnings;
};

/// A check fails when its slack drops below -family_tolerance. Quadrature
/// and closed-form rate families use 1e-9, exact discrete families 1e-10,
/// and the discrete corner identity 1e-12.
double family_tolerance(Family f);

/// Everything a single trial produced.
struct TrialResult {
  std::uint64_t digest = 0;
  std::vector<CheckOutcome> outcomes;
  std::vector<std::string> warnings;
};

/// Runs one trial of a family from its derived seed (see trial_seed).
TrialResult run_trial(Family family, std::uint64_t seed, std::size_t index);

/// Runs all trials concurrently and assembles the report in trial order.
VerifyReport run_family(const TrialConfig& config);

nlohmann::json to_json(const VerifyReport& report);
/// Pretty-printed JSON with a trailing newline; byte-identical for identical
/// (seed, family, trials).
std::string report_text(const VerifyReport& report);

}  // namespace wcont

#endif  // WCONT_VERIFY_HPP
