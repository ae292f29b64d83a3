#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qse/sdp.hpp"
#include "qse/state.hpp"

namespace qse {

// A conditional-entropy question: which factors form the target system A and
// which condition it (B). Factors outside the union are traced out first.
// All values are in bits (binary logarithm).
struct EntropyQuery {
  State state;
  std::vector<std::string> target;
  std::vector<std::string> conditioning;
  double epsilon = 0.0;
};

struct EntropyResult {
  double value = 0.0;
  bool is_neg_infinity = false;
  std::optional<State> optimizer_sigma;   // normalized sigma_B witness
  std::optional<State> smoothed_state;    // rho-tilde witness for smooth queries
  double sdp_gap = 0.0;
  sdp::ResidualReport residuals;          // independent post-hoc audit
};

// Phi(rho) = inf { tr sigma : rho <= I_A (x) sigma_B } for a Hermitian
// operator on A (x) B; equals 2^(-Hmin) on states. sigma_out, if given,
// receives the (unnormalized) optimizer.
double phi(const CMat& rho, int dim_a, int dim_b, CMat* sigma_out = nullptr,
           sdp::Solution* solution_out = nullptr);

EntropyResult hmin(const EntropyQuery& q);
EntropyResult hmax(const EntropyQuery& q);

// Smooth entropies accept only normalized inputs (tr = 1 within 1e-9) and
// epsilon < 1. epsilon = 0 reduces exactly to the non-smooth quantity.
EntropyResult smooth_hmin(const EntropyQuery& q);
EntropyResult smooth_hmax(const EntropyQuery& q);

struct BoundsMargin {
  std::string name;
  double margin;  // >= 0 when the inequality holds
};

// Dimension sandwiches for Hmin/Hmax plus the ordering inequalities; all
// margins should be >= -1e-7.
std::vector<BoundsMargin> hmin_hmax_bounds_check(const State& rho,
                                                 const std::vector<std::string>& target,
                                                 const std::vector<std::string>& conditioning);

struct ContinuityBound {
  double lhs;  // |Hmin(rho) - Hmin(tau)|
  double rhs;  // dA * dmin * Dbar / (ln2 * min tr)
};

ContinuityBound continuity_bound(const State& rho, const State& tau,
                                 const std::vector<std::string>& target,
                                 const std::vector<std::string>& conditioning);

// Count of entropy-level SDP solves certified by the independent residual
// checker since process start (each solve is audited; failures throw).
long entropy_solves_certified();

}  // namespace qse
