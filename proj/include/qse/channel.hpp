#pragma once

#include <string>
#include <vector>

#include "qse/state.hpp"

namespace qse {

// Isometry V: source -> target with V^dag V = I.
class Isometry {
 public:
  Isometry(CMat matrix, SystemLayout source, SystemLayout target,
           const Tolerances& tol = Tolerances::standard());
  const CMat& matrix() const { return mat_; }
  const SystemLayout& source() const { return source_; }
  const SystemLayout& target() const { return target_; }

 private:
  CMat mat_;
  SystemLayout source_, target_;
};

// Completely positive map in Kraus form. Trace non-increasing always
// (sum K^dag K <= I + tol); equality to I when trace_preserving.
class Channel {
 public:
  Channel(SystemLayout input, SystemLayout output, std::vector<CMat> kraus,
          bool trace_preserving, const Tolerances& tol = Tolerances::standard());

  const SystemLayout& input_layout() const { return in_; }
  const SystemLayout& output_layout() const { return out_; }
  const std::vector<CMat>& kraus() const { return kraus_; }
  bool trace_preserving() const { return tp_; }

 private:
  SystemLayout in_, out_;
  std::vector<CMat> kraus_;
  bool tp_;
};

Channel identity_channel(const SystemLayout& layout);
Channel completely_depolarizing(const SystemLayout& layout);

// Decohering channel rho -> P rho P + (I-P) rho (I-P) for a projector P.
Channel pinching(const CMat& projector, const SystemLayout& layout,
                 const Tolerances& tol = Tolerances::standard());

// Projective measurement of the input system in the given orthonormal basis
// (columns), written to a classical register with the given output label.
Channel projective_measurement_map(const CMat& basis, const SystemLayout& input,
                                   const std::string& output_label,
                                   const Tolerances& tol = Tolerances::standard());

// Applies E to the named factors of rho; the acted factors are replaced by the
// channel's output factors at the position of the first acted factor.
State apply_channel(const Channel& e, const State& rho,
                    const std::vector<std::string>& acting);

// Embeds rho into a layout with the same labels/order but enlarged dims
// (top-left block embedding per factor).
State embed(const State& rho, const SystemLayout& target);

// Applies an isometry acting on the named factors, analogous to apply_channel.
State apply_isometry(const Isometry& v, const State& rho,
                     const std::vector<std::string>& acting);

// Canonical purification with the purifier appended as the last factor.
// purifier_dim = 0 selects the minimal dimension rank(rho); smaller values
// raise ContractError, larger ones pad.
PureState purify(const State& rho, const std::string& purifier_label,
                 int purifier_dim = 0, const Tolerances& tol = Tolerances::standard());

}  // namespace qse
