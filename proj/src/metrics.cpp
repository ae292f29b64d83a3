#include "qse/metrics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qse/channel.hpp"

namespace qse {

namespace {

void require_same_layout(const State& a, const State& b, const char* who) {
  if (!(a.layout() == b.layout()))
    throw ContractError(std::string(who) + ": layouts differ (" + a.layout().str() + " vs " +
                        b.layout().str() + ")");
}

}  // namespace

double gen_trace_distance(const State& rho, const State& tau) {
  require_same_layout(rho, tau, "gen_trace_distance");
  CMat diff = rho.matrix() - tau.matrix();
  double plus = positive_part_trace(diff);
  double minus = positive_part_trace(-diff);
  double direct = std::max(plus, minus);
  double via_norm = 0.5 * trace_norm(diff) + 0.5 * std::abs(rho.trace() - tau.trace());
  if (std::abs(direct - via_norm) > 1e-10 * (1.0 + direct))
    throw NumericalError("gen_trace_distance: positive-part and 1-norm formulas disagree (" +
                         std::to_string(direct) + " vs " + std::to_string(via_norm) + ")");
  return direct;
}

namespace {

bool lex_less(const CMat& a, const CMat& b) {
  for (long i = 0; i < a.size(); ++i) {
    const cxd &x = a(i), &y = b(i);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

double fidelity_operators(const CMat& a, const CMat& b, const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("fidelity: dimension mismatch");
  // Identical arguments short-circuit to tr: the generic route would lose
  // sqrt(machine-eps) here and P(rho, rho) must come out exactly zero.
  if ((a - b).cwiseAbs().maxCoeff() == 0.0) return std::max(0.0, a.trace().real());
  // Canonical argument order makes F (and everything derived from it)
  // symmetric bit-for-bit.
  const CMat& x = lex_less(b, a) ? b : a;
  const CMat& y = lex_less(b, a) ? a : b;

  HermEig ex = herm_eig(x, tol);
  double top = std::max(ex.values(0), 0.0);
  int rank = 0;
  for (int i = 0; i < ex.values.size(); ++i)
    if (ex.values(i) > top * 1e-13) ++rank;
  if (rank <= 1) {
    // ||sqrt(lam uu^dag) sqrt(y)||_1 = sqrt(lam <u|y|u>), exact for rank one
    if (top <= 0.0) return 0.0;
    double quad = std::max(0.0, (ex.vectors.col(0).adjoint() * y * ex.vectors.col(0))(0).real());
    return std::sqrt(top * quad);
  }

  RVec root = ex.values.cwiseMax(0.0).cwiseSqrt();
  CMat sx = ex.vectors * root.asDiagonal() * ex.vectors.adjoint();
  CMat inner = sx * y * sx;
  inner = 0.5 * (inner + inner.adjoint().eval());
  HermEig eig = herm_eig(inner, tol);
  // Eigenvalues below the relative noise floor are clipped so that exact zero
  // overlaps do not pick up sqrt(machine-eps) contributions.
  double floor = std::max(eig.values(0), 0.0) * 1e-13;
  double f = 0.0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > floor) f += std::sqrt(eig.values(i));
  return f;
}

double fidelity(const State& rho, const State& tau) {
  require_same_layout(rho, tau, "fidelity");
  return fidelity_operators(rho.matrix(), tau.matrix());
}

double gen_fidelity(const State& rho, const State& tau) {
  require_same_layout(rho, tau, "gen_fidelity");
  double f = fidelity_operators(rho.matrix(), tau.matrix());
  double a = std::max(0.0, 1.0 - rho.trace());
  double b = std::max(0.0, 1.0 - tau.trace());
  return f + std::sqrt(a * b);
}

double purified_distance(const State& rho, const State& tau) {
  double fbar = std::clamp(gen_fidelity(rho, tau), 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - fbar * fbar));
}

BallCheck in_ball(const State& tau, const State& rho, double eps, const Tolerances& tol) {
  if (eps < 0.0 || eps >= 1.0) throw ContractError("in_ball: eps must lie in [0, 1)");
  if (!(std::sqrt(rho.trace()) > eps))
    throw ContractError("in_ball: requires sqrt(tr rho) > eps");
  double p = purified_distance(tau, rho);
  double slack = eps - p;
  return BallCheck{p <= eps + tol.psd_clamp, slack};
}

namespace {

// Coefficient matrix of a pure bipartite vector ordered (system, purifier):
// amps(flat) with flat = h * d_purifier + p.
CMat coefficient_matrix(const CVec& amps, int d_sys, int d_pur) {
  CMat m(d_sys, d_pur);
  for (int h = 0; h < d_sys; ++h)
    for (int p = 0; p < d_pur; ++p) m(h, p) = amps(static_cast<long>(h) * d_pur + p);
  return m;
}

CVec flatten_coefficients(const CMat& m) {
  CVec v(m.rows() * m.cols());
  for (int h = 0; h < m.rows(); ++h)
    for (int p = 0; p < m.cols(); ++p) v(static_cast<long>(h) * m.cols() + p) = m(h, p);
  return v;
}

}  // namespace

PureState uhlmann_match(const State& rho, const State& tau, const PureState& phi) {
  if (!(rho.layout() == tau.layout()))
    throw ContractError("uhlmann_match: rho and tau layouts differ");
  std::vector<std::string> sys_labels, pur_labels;
  for (const auto& f : rho.layout().factors()) {
    if (!phi.layout().has(f.label))
      throw ContractError("uhlmann_match: purification lacks factor '" + f.label + "'");
    if (phi.layout()[phi.layout().index_of(f.label)].dim != f.dim)
      throw ContractError("uhlmann_match: factor '" + f.label + "' dim mismatch");
    sys_labels.push_back(f.label);
  }
  for (const auto& f : phi.layout().factors())
    if (!rho.layout().has(f.label)) pur_labels.push_back(f.label);
  if (pur_labels.empty())
    throw ContractError("uhlmann_match: purification has no purifier factors");

  // Bring phi to (system..., purifier...) order.
  std::vector<std::string> order = sys_labels;
  for (const auto& l : pur_labels) order.push_back(l);
  PureState phi_sorted = permute_factors(phi, order);

  const int d = rho.dim();
  int d_pur = 1;
  for (const auto& l : pur_labels)
    d_pur *= phi.layout()[phi.layout().index_of(l)].dim;

  CMat phi_coeff = coefficient_matrix(phi_sorted.amplitudes(), d, d_pur);
  {
    CMat marg = phi_coeff * phi_coeff.adjoint();
    if ((marg - rho.matrix()).norm() > 1e-8 * (1.0 + rho.matrix().norm()))
      throw ContractError("uhlmann_match: phi does not purify rho");
  }

  HermEig eig = herm_eig(tau.matrix());
  int rank_tau = 0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) >= Tolerances::standard().psd_clamp) ++rank_tau;
  rank_tau = std::max(rank_tau, 1);
  if (d_pur < rank_tau)
    throw ContractError("uhlmann_match: purifier dimension " + std::to_string(d_pur) +
                        " is below rank(tau) = " + std::to_string(rank_tau));

  // Canonical purification of tau, then rotate the purifier so the overlap
  // with phi becomes the fidelity (polar alignment via SVD).
  CMat theta = CMat::Zero(d, d_pur);
  for (int i = 0; i < rank_tau; ++i) {
    if (eig.values(i) <= 0.0) continue;
    theta.col(i) = std::sqrt(eig.values(i)) * eig.vectors.col(i);
  }
  CMat n = (phi_coeff.adjoint() * theta).transpose();  // d_pur x d_pur
  Eigen::JacobiSVD<CMat> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMat w = svd.matrixV() * svd.matrixU().adjoint();
  CMat theta_coeff = theta * w.transpose();

  PureState vartheta_sorted(phi_sorted.layout(), flatten_coefficients(theta_coeff));
  // Restore phi's original factor order.
  std::vector<std::string> original_order;
  for (const auto& f : phi.layout().factors()) original_order.push_back(f.label);
  PureState vartheta = permute_factors(vartheta_sorted, original_order);

  // Audit at the fidelity level: P has a square-root singularity at F = 1, so
  // comparing distances directly would turn machine noise into 1e-8-scale
  // phantom violations for nearly equal states.
  double f_states = gen_fidelity(rho, tau);
  double f_pure = gen_fidelity(phi.to_state(), vartheta.to_state());
  if (std::abs(f_states - f_pure) > 1e-8)
    throw NumericalError("uhlmann_match: achieved fidelity " + std::to_string(f_pure) +
                         " differs from target " + std::to_string(f_states));
  return vartheta;
}

State extension_match(const State& rho, const State& tau, const State& rho_bar) {
  if (!(rho.layout() == tau.layout()))
    throw ContractError("extension_match: rho and tau layouts differ");
  std::vector<std::string> base_labels;
  for (const auto& f : rho.layout().factors()) {
    if (!rho_bar.layout().has(f.label))
      throw ContractError("extension_match: extension lacks factor '" + f.label + "'");
    base_labels.push_back(f.label);
  }
  {
    State reduced = marginal(rho_bar, base_labels);
    State reduced_sorted = permute_factors(reduced, base_labels);
    if ((reduced_sorted.matrix() - rho.matrix()).norm() > 1e-8 * (1.0 + rho.matrix().norm()))
      throw ContractError("extension_match: rho_bar does not extend rho");
  }
  std::string aux = "__ext";
  while (rho_bar.layout().has(aux)) aux += "_";
  int aux_dim = std::max(rho_bar.rank(), tau.rank());
  PureState phi = purify(rho_bar, aux, aux_dim);
  PureState vartheta = uhlmann_match(rho, tau, phi);
  State tau_bar = partial_trace(vartheta.to_state(), {aux});
  return tau_bar;
}

}  // namespace qse
