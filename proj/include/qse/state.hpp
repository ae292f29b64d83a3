#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qse/linalg.hpp"

namespace qse {

// Sub-normalized density operator: PSD within tolerance, 0 < tr <= 1.
// Small negative eigenvalues are clamped to zero on construction.
class State {
 public:
  State(SystemLayout layout, CMat matrix, const Tolerances& tol = Tolerances::standard());

  const SystemLayout& layout() const { return layout_; }
  const CMat& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double trace() const { return mat_.trace().real(); }
  int rank(const Tolerances& tol = Tolerances::standard()) const { return herm_rank(mat_, tol); }

 private:
  SystemLayout layout_;
  CMat mat_;
};

class PureState {
 public:
  PureState(SystemLayout layout, CVec amplitudes,
            const Tolerances& tol = Tolerances::standard());

  const SystemLayout& layout() const { return layout_; }
  const CVec& amplitudes() const { return amps_; }
  double norm_squared() const { return amps_.squaredNorm(); }
  State to_state() const { return State(layout_, amps_ * amps_.adjoint()); }

 private:
  SystemLayout layout_;
  CVec amps_;
};

State partial_trace(const State& s, const std::vector<std::string>& traced);
// Keeps only the named factors (traces out the rest), preserving layout order.
State marginal(const State& s, const std::vector<std::string>& kept);
State permute_factors(const State& s, const std::vector<std::string>& new_order);
PureState permute_factors(const PureState& s, const std::vector<std::string>& new_order);

// Convex/linear combination helper: p*a + (1-p)*b on matching layouts.
State mix(const State& a, const State& b, double p);

}  // namespace qse
