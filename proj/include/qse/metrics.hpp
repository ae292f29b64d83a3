#pragma once

#include <string>

#include "qse/state.hpp"

namespace qse {

// max{ tr{rho-tau}_+, tr{tau-rho}_+ }. Computes both that expression and the
// Schatten-1 form and insists they agree.
double gen_trace_distance(const State& rho, const State& tau);

// ||sqrt(a) sqrt(b)||_1 for raw PSD operators.
double fidelity_operators(const CMat& a, const CMat& b,
                          const Tolerances& tol = Tolerances::standard());
double fidelity(const State& rho, const State& tau);

// F(rho, tau) + sqrt((1 - tr rho)(1 - tr tau)).
double gen_fidelity(const State& rho, const State& tau);

// sqrt(1 - gen_fidelity^2), with the fidelity clamped into [0, 1] first.
double purified_distance(const State& rho, const State& tau);

struct BallCheck {
  bool inside;
  double slack;  // eps - P(tau, rho); negative means outside
};

// Membership in the eps-ball around rho. Requires sqrt(tr rho) > eps.
BallCheck in_ball(const State& tau, const State& rho, double eps,
                  const Tolerances& tol = Tolerances::standard());

// Given a purification phi of rho (purifier = the factors of phi absent from
// rho's layout), constructs a purification of tau in the same space whose
// purified distance to phi equals P(rho, tau).
PureState uhlmann_match(const State& rho, const State& tau, const PureState& phi);

// Given an extension rho_bar of rho on H (x) H', produces an extension of tau
// with P(rho_bar, tau_bar) = P(rho, tau).
State extension_match(const State& rho, const State& tau, const State& rho_bar);

}  // namespace qse
