#pragma once

namespace qse {

// Numerical tolerances used across the library, collected in one record so
// tests can tighten or loosen them uniformly.
struct Tolerances {
  double hermiticity = 1e-12;       // max |M(i,j) - conj(M(j,i))| <= hermiticity * (1 + max|entry|)
  double eig_residual = 1e-10;      // ||V D V^dag - M||_F <= eig_residual * (1 + ||M||_F)
  double psd_clamp = 1e-12;         // eigenvalues in (-psd_clamp, psd_clamp) count as zero
  double state_negativity = 1e-10;  // most negative eigenvalue a State may carry before rejection
  double trace_upper_slack = 1e-12; // allowed overshoot of a state trace above 1
  double isometry_residual = 1e-10; // ||V^dag V - I|| bound
  double kraus_residual = 1e-10;    // ||sum K^dag K - I|| bound for trace-preserving channels
  double purify_roundtrip = 1e-9;   // partial trace of a purification must give back the state

  static const Tolerances& standard();
};

}  // namespace qse
