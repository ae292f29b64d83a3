#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qse/random.hpp"
#include "qse/state.hpp"

namespace qse::verify {

// Configuration of one randomized property suite. Trials cycle through the
// epsilon list; the dims profile is suite-specific (Hilbert dimensions or an
// A/B/C split). Zero/empty fields select suite defaults.
struct SuiteConfig {
  std::string name;
  int trials = 0;
  uint64_t seed = 42;
  std::vector<int> dims;
  std::vector<double> epsilons;
  int threads = 0;                 // 0 = auto (QSE_THREADS env, then hardware)
  bool per_trial_margins = false;  // include raw per-trial slacks in the report
};

struct CheckReport {
  std::string name;
  double tolerance = 0.0;
  bool informational = false;  // never counts as failure (witness searches)
  double worst_slack = -1e300;
  int worst_trial = -1;
  int failures = 0;
  std::vector<int> near_violations;  // trial indices with slack >= tolerance/10
};

// Per-suite result. A trial's slack for a check is the amount by which the
// property is violated (negative = holds with margin); a trial fails a check
// when slack > tolerance. worst_slack at the report level is normalized
// (slack / tolerance) so suites that mix tolerance tiers stay comparable.
// wall_time_ms is intentionally excluded from both serializations.
struct VerificationReport {
  std::string suite;
  uint64_t seed = 0;
  std::vector<int> dims;
  std::vector<double> epsilons;
  int trials_run = 0;
  int failures = 0;
  int sdp_failures = 0;
  double worst_slack = 0.0;  // normalized, > 1 means some check failed
  int worst_seed = -1;       // trial index achieving worst_slack
  std::vector<CheckReport> checks;
  std::vector<std::string> notes;
  std::vector<std::vector<double>> per_trial;  // [trial][check], optional
  bool per_trial_included = false;
  double wall_time_ms = 0.0;

  std::string to_text() const;
  std::string to_json_text() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
VerificationReport run_suite(const SuiteConfig& config);

// The default battery (used by "verify all"): every suite at its default
// trial counts, including the second duality profile.
std::vector<SuiteConfig> default_battery(uint64_t seed);

int default_thread_count();

// Nested search oracle for the smooth max-entropy: minimizes the non-smooth
// max-entropy over the eps-ball via coordinate descent on rotated, rescaled
// purifications (inner evaluations are plain hmax SDP solves).
double smooth_hmax_ball_oracle(const State& rho_ab,
                               const std::vector<std::string>& target,
                               const std::vector<std::string>& conditioning,
                               double eps, uint64_t seed, int budget = 500);

// Same machinery maximizing the non-smooth min-entropy over the ball.
double smooth_hmin_ball_oracle(const State& rho_ab,
                               const std::vector<std::string>& target,
                               const std::vector<std::string>& conditioning,
                               double eps, uint64_t seed, int budget = 500);

// Draws a uniform-ish member of the eps-ball around rho (marginal of a
// rotated, rescaled purification; exact membership is re-checked).
State random_ball_member(const State& rho, double eps, SplitStream& g,
                         bool force_normalized = false);

}  // namespace qse::verify
