#include "qse/state.hpp"

namespace qse {

State::State(SystemLayout layout, CMat matrix, const Tolerances& tol)
    : layout_(std::move(layout)), mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() != layout_.total_dim())
    throw ContractError("State: matrix dimension does not match layout " + layout_.str());
  require_hermitian(mat_, "State", tol.hermiticity);
  HermEig eig = herm_eig(mat_, tol);
  double lo = eig.values.minCoeff();
  if (lo < -tol.state_negativity)
    throw ContractError("State: not PSD (min eigenvalue " + std::to_string(lo) + ")");
  if (lo < 0.0) {
    RVec clamped = eig.values.cwiseMax(0.0);
    mat_ = eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  }
  double tr = mat_.trace().real();
  if (!(tr > 0.0))
    throw ContractError("State: trace must be positive (got " + std::to_string(tr) + ")");
  if (tr > 1.0 + tol.trace_upper_slack)
    throw ContractError("State: trace exceeds 1 (got " + std::to_string(tr) + ")");
}

PureState::PureState(SystemLayout layout, CVec amplitudes, const Tolerances& tol)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.total_dim())
    throw ContractError("PureState: amplitude vector does not match layout " + layout_.str());
  double n2 = amps_.squaredNorm();
  if (!(n2 > 0.0))
    throw ContractError("PureState: norm must be positive");
  if (n2 > 1.0 + tol.trace_upper_slack)
    throw ContractError("PureState: squared norm exceeds 1 (got " + std::to_string(n2) + ")");
}

State partial_trace(const State& s, const std::vector<std::string>& traced) {
  CMat reduced = partial_trace(s.matrix(), s.layout(), traced);
  return State(s.layout().drop(traced), std::move(reduced));
}

State marginal(const State& s, const std::vector<std::string>& kept) {
  std::vector<std::string> traced;
  for (const auto& f : s.layout().factors()) {
    bool keep = false;
    for (const auto& k : kept) keep = keep || (k == f.label);
    if (!keep) traced.push_back(f.label);
  }
  for (const auto& k : kept) (void)s.layout().index_of(k);
  if (traced.empty()) return s;
  return partial_trace(s, traced);
}

State permute_factors(const State& s, const std::vector<std::string>& new_order) {
  CMat m = permute_factors(s.matrix(), s.layout(), new_order);
  std::vector<Factor> fs;
  for (const auto& l : new_order) fs.push_back(s.layout()[s.layout().index_of(l)]);
  return State(SystemLayout(fs), std::move(m));
}

PureState permute_factors(const PureState& s, const std::vector<std::string>& new_order) {
  const SystemLayout& layout = s.layout();
  if (static_cast<int>(new_order.size()) != layout.count())
    throw ContractError("permute_factors: order must list every factor exactly once");
  auto perm = layout.indices_of(new_order);
  auto old_strides = layout_strides(layout);
  std::vector<Factor> fs;
  for (int p : perm) fs.push_back(layout[p]);
  SystemLayout new_layout(fs);
  auto new_strides = layout_strides(new_layout);
  CVec out(s.amplitudes().size());
  for (long f = 0; f < out.size(); ++f) {
    long rem = f, old_flat = 0;
    for (int p = 0; p < new_layout.count(); ++p) {
      long pos = rem / new_strides[p];
      rem %= new_strides[p];
      old_flat += pos * old_strides[perm[p]];
    }
    out(f) = s.amplitudes()(old_flat);
  }
  return PureState(new_layout, std::move(out));
}

State mix(const State& a, const State& b, double p) {
  if (!(a.layout() == b.layout()))
    throw ContractError("mix: layouts differ (" + a.layout().str() + " vs " + b.layout().str() + ")");
  if (p < 0.0 || p > 1.0) throw ContractError("mix: weight must be in [0,1]");
  return State(a.layout(), p * a.matrix() + (1.0 - p) * b.matrix());
}

}  // namespace qse
