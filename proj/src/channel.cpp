#include "qse/channel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qse {

Isometry::Isometry(CMat matrix, SystemLayout source, SystemLayout target, const Tolerances& tol)
    : mat_(std::move(matrix)), source_(std::move(source)), target_(std::move(target)) {
  if (mat_.rows() != target_.total_dim() || mat_.cols() != source_.total_dim())
    throw ContractError("Isometry: matrix must be target_dim x source_dim");
  if (mat_.rows() < mat_.cols())
    throw ContractError("Isometry: target dimension must be >= source dimension");
  double res = (mat_.adjoint() * mat_ - CMat::Identity(mat_.cols(), mat_.cols())).norm();
  if (res > tol.isometry_residual)
    throw ContractError("Isometry: V^dag V != I (residual " + std::to_string(res) + ")");
}

Channel::Channel(SystemLayout input, SystemLayout output, std::vector<CMat> kraus,
                 bool trace_preserving, const Tolerances& tol)
    : in_(std::move(input)), out_(std::move(output)), kraus_(std::move(kraus)),
      tp_(trace_preserving) {
  if (kraus_.empty()) throw ContractError("Channel: needs at least one Kraus operator");
  const int din = in_.total_dim(), dout = out_.total_dim();
  CMat total = CMat::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din)
      throw ContractError("Channel: Kraus operator must be output_dim x input_dim");
    total += k.adjoint() * k;
  }
  if (tp_) {
    double res = (total - CMat::Identity(din, din)).cwiseAbs().maxCoeff();
    if (res > tol.kraus_residual)
      throw ContractError("Channel: sum K^dag K != I for trace-preserving map (residual " +
                          std::to_string(res) + ")");
  } else {
    Eigen::SelfAdjointEigenSolver<CMat> es(total);
    if (es.eigenvalues().maxCoeff() > 1.0 + tol.kraus_residual)
      throw ContractError("Channel: map increases trace (max eigenvalue of sum K^dag K is " +
                          std::to_string(es.eigenvalues().maxCoeff()) + ")");
  }
}

Channel identity_channel(const SystemLayout& layout) {
  int d = layout.total_dim();
  return Channel(layout, layout, {CMat::Identity(d, d)}, true);
}

Channel completely_depolarizing(const SystemLayout& layout) {
  const int d = layout.total_dim();
  std::vector<CMat> kraus;
  kraus.reserve(static_cast<size_t>(d) * d);
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMat k = CMat::Zero(d, d);
      k(i, j) = w;
      kraus.push_back(std::move(k));
    }
  return Channel(layout, layout, std::move(kraus), true);
}

Channel pinching(const CMat& projector, const SystemLayout& layout, const Tolerances& tol) {
  const int d = layout.total_dim();
  if (projector.rows() != d || projector.cols() != d)
    throw ContractError("pinching: projector does not match layout");
  require_hermitian(projector, "pinching", tol.hermiticity);
  if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10)
    throw ContractError("pinching: matrix is not a projector");
  CMat comp = CMat::Identity(d, d) - projector;
  return Channel(layout, layout, {projector, comp}, true);
}

Channel projective_measurement_map(const CMat& basis, const SystemLayout& input,
                                   const std::string& output_label, const Tolerances& tol) {
  const int d = input.total_dim();
  if (basis.rows() != d || basis.cols() != d)
    throw ContractError("projective_measurement_map: basis must be square over the input");
  if ((basis.adjoint() * basis - CMat::Identity(d, d)).cwiseAbs().maxCoeff() >
      tol.isometry_residual)
    throw ContractError("projective_measurement_map: basis columns are not orthonormal");
  std::vector<CMat> kraus;
  kraus.reserve(d);
  for (int i = 0; i < d; ++i) {
    CMat k = CMat::Zero(d, d);
    k.row(i) = basis.col(i).adjoint();  // |i><b_i|
    kraus.push_back(std::move(k));
  }
  SystemLayout out({Factor{output_label, d}});
  return Channel(input, out, std::move(kraus), true);
}

namespace {

// Flat offsets of a factor subset (shared with linalg's partial_trace logic).
std::vector<long> subset_offsets(const SystemLayout& layout, const std::vector<int>& idx) {
  auto strides = layout_strides(layout);
  long total = 1;
  for (int i : idx) total *= layout[i].dim;
  std::vector<long> off(static_cast<size_t>(total), 0);
  long repeat = 1;
  for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
    const int dim = layout[idx[k]].dim;
    const long stride = strides[idx[k]];
    long block = repeat * dim;
    for (long t = 0; t < total; ++t) off[t] += ((t % block) / repeat) * stride;
    repeat = block;
  }
  return off;
}

struct LiftPlan {
  SystemLayout new_layout;
  std::vector<long> old_acting;    // offsets of acting factors in the old layout
  std::vector<long> old_passive;   // offsets of passive factors in the old layout
  std::vector<long> new_acting;    // offsets of output factors in the new layout
  std::vector<long> new_passive;   // offsets of passive factors in the new layout
};

LiftPlan make_lift_plan(const SystemLayout& layout, const std::vector<std::string>& acting,
                        const SystemLayout& channel_in, const SystemLayout& channel_out) {
  if (acting.empty()) throw ContractError("apply_channel: no acting factors given");
  auto acting_idx = layout.indices_of(acting);
  if (static_cast<int>(acting.size()) != channel_in.count())
    throw ContractError("apply_channel: acting factor count does not match channel input");
  for (int k = 0; k < channel_in.count(); ++k) {
    if (layout[acting_idx[k]].dim != channel_in[k].dim)
      throw ContractError("apply_channel: factor '" + acting[k] + "' has dim " +
                          std::to_string(layout[acting_idx[k]].dim) + ", channel expects " +
                          std::to_string(channel_in[k].dim));
  }
  std::vector<int> passive_idx;
  for (int i = 0; i < layout.count(); ++i)
    if (std::find(acting_idx.begin(), acting_idx.end(), i) == acting_idx.end())
      passive_idx.push_back(i);

  // Output factors are spliced at the position of the first acting factor.
  int splice_at = *std::min_element(acting_idx.begin(), acting_idx.end());
  std::vector<Factor> new_factors;
  for (int i = 0; i < layout.count(); ++i) {
    if (i == splice_at)
      for (const auto& f : channel_out.factors()) new_factors.push_back(f);
    if (std::find(acting_idx.begin(), acting_idx.end(), i) == acting_idx.end())
      new_factors.push_back(layout[i]);
  }
  SystemLayout new_layout(new_factors);

  std::vector<int> new_out_idx, new_passive_idx;
  for (const auto& f : channel_out.factors()) new_out_idx.push_back(new_layout.index_of(f.label));
  for (int i : passive_idx) new_passive_idx.push_back(new_layout.index_of(layout[i].label));

  LiftPlan plan{new_layout,
                subset_offsets(layout, acting_idx),
                subset_offsets(layout, passive_idx),
                subset_offsets(new_layout, new_out_idx),
                subset_offsets(new_layout, new_passive_idx)};
  return plan;
}

CMat lift_operator(const CMat& k, const LiftPlan& plan, long old_dim, long new_dim) {
  CMat full = CMat::Zero(new_dim, old_dim);
  for (size_t p = 0; p < plan.old_passive.size(); ++p)
    for (long o = 0; o < k.rows(); ++o)
      for (long i = 0; i < k.cols(); ++i)
        full(plan.new_passive[p] + plan.new_acting[o], plan.old_passive[p] + plan.old_acting[i]) =
            k(o, i);
  return full;
}

}  // namespace

State apply_channel(const Channel& e, const State& rho, const std::vector<std::string>& acting) {
  // Output labels must not collide with the untouched factors.
  for (const auto& f : e.output_layout().factors()) {
    if (rho.layout().has(f.label) &&
        std::find(acting.begin(), acting.end(), f.label) == acting.end())
      throw ContractError("apply_channel: output label '" + f.label + "' collides with layout");
  }
  LiftPlan plan = make_lift_plan(rho.layout(), acting, e.input_layout(), e.output_layout());
  const long old_dim = rho.layout().total_dim();
  const long new_dim = plan.new_layout.total_dim();
  CMat out = CMat::Zero(new_dim, new_dim);
  for (const auto& k : e.kraus()) {
    CMat full = lift_operator(k, plan, old_dim, new_dim);
    out += full * rho.matrix() * full.adjoint();
  }
  out = 0.5 * (out + out.adjoint().eval());
  return State(plan.new_layout, std::move(out));
}

State apply_isometry(const Isometry& v, const State& rho,
                     const std::vector<std::string>& acting) {
  for (const auto& f : v.target().factors()) {
    if (rho.layout().has(f.label) &&
        std::find(acting.begin(), acting.end(), f.label) == acting.end())
      throw ContractError("apply_isometry: output label '" + f.label + "' collides with layout");
  }
  LiftPlan plan = make_lift_plan(rho.layout(), acting, v.source(), v.target());
  const long old_dim = rho.layout().total_dim();
  const long new_dim = plan.new_layout.total_dim();
  CMat full = lift_operator(v.matrix(), plan, old_dim, new_dim);
  CMat out = full * rho.matrix() * full.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return State(plan.new_layout, std::move(out));
}

State embed(const State& rho, const SystemLayout& target) {
  const SystemLayout& src = rho.layout();
  if (target.count() != src.count())
    throw ContractError("embed: target layout must have the same factors");
  for (int i = 0; i < src.count(); ++i) {
    if (target[i].label != src[i].label)
      throw ContractError("embed: factor labels/order must match (got '" + target[i].label +
                          "', expected '" + src[i].label + "')");
    if (target[i].dim < src[i].dim)
      throw ContractError("embed: factor '" + src[i].label + "' would shrink");
  }
  auto src_strides = layout_strides(src);
  auto tgt_strides = layout_strides(target);
  const long ds = src.total_dim();
  std::vector<long> map(static_cast<size_t>(ds), 0);
  for (long f = 0; f < ds; ++f) {
    long rem = f, tgt = 0;
    for (int i = 0; i < src.count(); ++i) {
      long pos = rem / src_strides[i];
      rem %= src_strides[i];
      tgt += pos * tgt_strides[i];
    }
    map[f] = tgt;
  }
  CMat out = CMat::Zero(target.total_dim(), target.total_dim());
  for (long r = 0; r < ds; ++r)
    for (long c = 0; c < ds; ++c) out(map[r], map[c]) = rho.matrix()(r, c);
  return State(target, std::move(out));
}

PureState purify(const State& rho, const std::string& purifier_label, int purifier_dim,
                 const Tolerances& tol) {
  if (rho.layout().has(purifier_label))
    throw ContractError("purify: purifier label '" + purifier_label + "' already in layout");
  HermEig eig = herm_eig(rho.matrix(), tol);
  int rank = 0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) >= tol.psd_clamp) ++rank;
  rank = std::max(rank, 1);
  if (purifier_dim == 0) purifier_dim = rank;
  if (purifier_dim < rank)
    throw ContractError("purify: purifier dimension " + std::to_string(purifier_dim) +
                        " is below rank " + std::to_string(rank));
  const int d = rho.dim();
  CVec amps = CVec::Zero(static_cast<long>(d) * purifier_dim);
  for (int i = 0; i < rank; ++i) {
    if (eig.values(i) <= 0.0) continue;
    double w = std::sqrt(eig.values(i));
    for (int r = 0; r < d; ++r) amps(static_cast<long>(r) * purifier_dim + i) += w * eig.vectors(r, i);
  }
  SystemLayout lay = rho.layout().tensor(SystemLayout({Factor{purifier_label, purifier_dim}}));
  PureState phi(lay, std::move(amps), tol);
  CMat back = partial_trace(phi.to_state().matrix(), lay, {purifier_label});
  if ((back - rho.matrix()).norm() > tol.purify_roundtrip * (1.0 + rho.matrix().norm()))
    throw NumericalError("purify: partial-trace round trip failed");
  return phi;
}

}  // namespace qse
