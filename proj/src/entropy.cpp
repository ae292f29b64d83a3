#include "qse/entropy.hpp"

#include <atomic>
#include <cstdio>
#include <cmath>
#include <set>

#include "qse/channel.hpp"
#include "qse/metrics.hpp"

namespace qse {

namespace {

std::atomic<long> g_certified_solves{0};

constexpr double kLog2E = 1.4426950408889634;  // 1/ln 2

double log2_checked(double v, bool* neg_inf) {
  if (v < 1e-300) {
    *neg_inf = true;
    return -std::numeric_limits<double>::infinity();
  }
  *neg_inf = false;
  return std::log2(v);
}

struct Prep {
  State ab_state;  // reduced to A u B, permuted with targets first
  int da = 1, db = 1;
  SystemLayout a_layout, b_layout;
};

Prep prepare(const State& s, const std::vector<std::string>& target,
             const std::vector<std::string>& conditioning) {
  if (target.empty()) throw ContractError("entropy: target system set is empty");
  std::set<std::string> seen;
  for (const auto& l : target)
    if (!seen.insert(l).second) throw ContractError("entropy: duplicate target label '" + l + "'");
  for (const auto& l : conditioning)
    if (!seen.insert(l).second)
      throw ContractError("entropy: label '" + l + "' appears twice across target/conditioning");
  std::vector<std::string> keep = target;
  keep.insert(keep.end(), conditioning.begin(), conditioning.end());
  for (const auto& l : keep) (void)s.layout().index_of(l);

  State reduced = marginal(s, keep);
  State permuted = permute_factors(reduced, keep);
  SystemLayout a_layout = permuted.layout().keep(target);
  SystemLayout b_layout = permuted.layout().keep(conditioning);
  Prep prep{std::move(permuted), a_layout.total_dim(), b_layout.total_dim(),
            std::move(a_layout), std::move(b_layout)};
  return prep;
}

CMat corner_tl(int top, int bottom, const CMat& m) {
  CMat out = CMat::Zero(top + bottom, top + bottom);
  out.topLeftCorner(top, top) = m;
  return out;
}

CMat corner_br(int top, int bottom, const CMat& m) {
  CMat out = CMat::Zero(top + bottom, top + bottom);
  out.bottomRightCorner(bottom, bottom) = m;
  return out;
}

CMat offdiag(int top, int bottom, const CMat& b) {
  CMat out = CMat::Zero(top + bottom, top + bottom);
  out.topRightCorner(top, bottom) = b;
  out.bottomLeftCorner(bottom, top) = b.adjoint();
  return out;
}

CMat trace_out_a(const CMat& e, int da, int db) {
  SystemLayout lay({Factor{"a", da}, Factor{"b", db}});
  return partial_trace(e, lay, {"a"});
}

struct Support {
  CMat u;       // d x r isometry onto supp(rho)
  CMat root;    // u * rho_r^(1/2): fidelity blocks are normalized so their
                // pinned corner is the identity, which keeps the interior
                // well-conditioned even when rho is nearly singular
  int r = 0;
};

Support support_of(const CMat& rho) {
  HermEig eig = herm_eig(rho);
  int r = 0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) >= Tolerances::standard().psd_clamp) ++r;
  r = std::max(r, 1);
  Support s;
  s.r = r;
  s.u = eig.vectors.leftCols(r);
  RVec root_vals(r);
  for (int i = 0; i < r; ++i) root_vals(i) = std::sqrt(std::max(eig.values(i), 0.0));
  s.root = s.u * root_vals.asDiagonal();  // d x r, root * root^dag = rho on supp
  return s;
}

sdp::Solution solve_audited(const sdp::Problem& p, const char* what,
                            sdp::ResidualReport* report) {
  // Witness feasibility is certified at 1e-7 per the result invariants; the
  // duality gap only limits value accuracy, so its backstop is looser (the
  // nearly degenerate smoothing programs bottom out around 1e-7 in double
  // precision while their residuals sit below 1e-8).
  sdp::SolveOptions opts;
  opts.optimal_threshold = 1e-6;
  sdp::Solution sol = sdp::solve(p, opts);
  if (sol.status != sdp::SolveStatus::optimal)
    throw NumericalError(std::string(what) + ": SDP solve failed (" +
                         sdp::to_string(sol.status) + "; " + sol.message +
                         "; gap " + std::to_string(sol.gap) + ", primal residual " +
                         std::to_string(sol.primal_residual) + ")");
  sdp::ResidualReport rep = sdp::check_solution(p, sol);
  bool feasible = rep.primal_residual <= 1e-7 && rep.dual_residual <= 1e-7 &&
                  rep.min_eig_X >= -1e-9 && rep.min_eig_S >= -1e-9 && rep.gap <= 1e-6;
  if (!feasible)
    throw NumericalError(std::string(what) + ": independent residual audit failed (primal " +
                         std::to_string(rep.primal_residual) + ", dual " +
                         std::to_string(rep.dual_residual) + ", gap " + std::to_string(rep.gap) +
                         ")");
  ++g_certified_solves;
  if (report) *report = rep;
  return sol;
}

// Midpoint of the primal/dual objective pair: halves the one-sided bias of
// an interior-point optimum estimate.
double midpoint_value(const sdp::Solution& sol) {
  return 0.5 * (sol.primal_value + sol.dual_value);
}

CMat clamp_psd(const CMat& m) {
  HermEig eig = herm_eig(m);
  RVec clamped = eig.values.cwiseMax(0.0);
  CMat out = eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

// Witness blocks from the solver satisfy their trace constraints only to the
// solver tolerance; pull them back inside the state set.
CMat clamp_to_state(const CMat& m) {
  CMat out = clamp_psd(m);
  double tr = out.trace().real();
  if (tr > 1.0) out *= (1.0 - 1e-14) / tr;
  return out;
}

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint().eval()),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

long entropy_solves_certified() { return g_certified_solves.load(); }

namespace {

struct PhiOutcome {
  double value = 0.0;
  CMat sigma;  // unnormalized optimizer
  sdp::Solution sol;
  sdp::ResidualReport rep;
};

// Conic dual of inf{tr sigma : rho <= I (x) sigma}:
//   maximize <rho, X>  s.t.  tr_A X = I_B, X >= 0;
// sigma is recovered exactly from the equality multipliers.
PhiOutcome phi_solve(const CMat& rho, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1) throw ContractError("phi: dimensions must be positive");
  if (rho.rows() != static_cast<long>(dim_a) * dim_b || rho.rows() != rho.cols())
    throw ContractError("phi: operator does not match the A|B split");
  require_hermitian(rho, "phi");

  sdp::Problem p;
  int bx = p.add_block("X", dim_a * dim_b);
  p.add_objective(bx, -rho);
  CMat eye_a = CMat::Identity(dim_a, dim_a);
  auto basis = hermitian_basis(dim_b);
  for (const auto& e : basis) {
    sdp::BlockMatrix a;
    a.add(bx, kron(eye_a, e));
    p.add_eq(std::move(a), e.trace().real());
  }
  PhiOutcome out;
  out.sol = solve_audited(p, "phi", &out.rep);
  out.value = -midpoint_value(out.sol);
  out.sigma = CMat::Zero(dim_b, dim_b);
  for (size_t k = 0; k < basis.size(); ++k)
    out.sigma -= out.sol.y(static_cast<long>(k)) * basis[k];
  out.sigma = 0.5 * (out.sigma + out.sigma.adjoint().eval());
  return out;
}

}  // namespace

double phi(const CMat& rho, int dim_a, int dim_b, CMat* sigma_out,
           sdp::Solution* solution_out) {
  PhiOutcome out = phi_solve(rho, dim_a, dim_b);
  if (sigma_out) *sigma_out = out.sigma;
  if (solution_out) *solution_out = out.sol;
  return out.value;
}

EntropyResult hmin(const EntropyQuery& q) {
  if (q.epsilon != 0.0) throw ContractError("hmin: epsilon must be 0 (use smooth_hmin)");
  Prep prep = prepare(q.state, q.target, q.conditioning);
  PhiOutcome out = phi_solve(prep.ab_state.matrix(), prep.da, prep.db);

  EntropyResult res;
  res.sdp_gap = out.sol.gap;
  res.residuals = out.rep;
  res.value = -log2_checked(out.value, &res.is_neg_infinity);

  // Witness check: I (x) sigma >= rho within tolerance, then store normalized.
  double viol = min_eigenvalue(kron(CMat::Identity(prep.da, prep.da), out.sigma) -
                               prep.ab_state.matrix());
  if (viol < -1e-7)
    throw NumericalError("hmin: witness violates I (x) sigma >= rho by " + std::to_string(-viol));
  CMat sig_psd = clamp_psd(out.sigma);
  double tr = sig_psd.trace().real();
  if (tr > 0) res.optimizer_sigma = State(prep.b_layout, sig_psd / tr);
  return res;
}

namespace {

struct HmaxOutcome {
  double opt = 0.0;  // achieved fidelity F(rho, I (x) sigma*)
  CMat sigma;        // normalized witness
  sdp::Solution sol;
  sdp::ResidualReport rep;
};

// Semidefinite representation of max_{sigma} F(rho, I (x) sigma) with X
// support-restricted to supp(rho) (rows), which keeps the problem strictly
// feasible for singular rho.
HmaxOutcome hmax_sdp(const CMat& rho, int da, int db) {
  const int d = da * db;
  Support sup = support_of(rho);
  const int r = sup.r;

  sdp::Problem p;
  int bh = p.add_block("H", r + d);
  int bs = p.add_block("sigma", db);
  // pin the top-left r x r corner of H to the identity (rho enters through
  // the objective coefficients instead, via its square root)
  for (const auto& f : hermitian_basis(r)) {
    sdp::BlockMatrix a;
    a.add(bh, corner_tl(r, d, f));
    p.add_eq(std::move(a), f.trace().real());
  }
  // bottom-right corner of H equals I (x) sigma
  for (const auto& e : hermitian_basis(d)) {
    sdp::BlockMatrix a;
    a.add(bh, corner_br(r, d, e));
    a.add(bs, -trace_out_a(e, da, db));
    p.add_eq(std::move(a), 0.0);
  }
  {
    sdp::BlockMatrix a;
    a.add(bs, CMat::Identity(db, db));
    p.add_eq(std::move(a), 1.0);
  }
  // maximize Re tr(sqrt(rho) K): off-diagonal coefficient root^dag / 2
  p.add_objective(bh, -offdiag(r, d, CMat(sup.root.adjoint() * 0.5)));

  HmaxOutcome out;
  out.sol = solve_audited(p, "hmax", &out.rep);
  out.opt = -midpoint_value(out.sol);
  CMat sigma = clamp_psd(out.sol.X[bs]);
  double tr = sigma.trace().real();
  if (!(tr > 0)) throw NumericalError("hmax: witness sigma has non-positive trace");
  out.sigma = sigma / tr;

  // Cross-check of the semidefinite fidelity representation against the
  // eigen-decomposition route.
  double f_direct = fidelity_operators(rho, kron(CMat::Identity(da, da), out.sigma));
  if (std::abs(f_direct - out.opt) > 1e-7 * (1.0 + std::abs(out.opt))) {
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "hmax: fidelity cross-check failed (SDP %.12e vs direct %.12e, gap %.2e)",
                  out.opt, f_direct, out.sol.gap);
    throw NumericalError(detail);
  }
  return out;
}

}  // namespace

EntropyResult hmax(const EntropyQuery& q) {
  if (q.epsilon != 0.0) throw ContractError("hmax: epsilon must be 0 (use smooth_hmax)");
  Prep prep = prepare(q.state, q.target, q.conditioning);
  HmaxOutcome out = hmax_sdp(prep.ab_state.matrix(), prep.da, prep.db);

  EntropyResult res;
  res.sdp_gap = out.sol.gap;
  res.residuals = out.rep;
  bool neg_inf = false;
  res.value = 2.0 * log2_checked(out.opt, &neg_inf);
  res.is_neg_infinity = neg_inf;
  res.optimizer_sigma = State(prep.b_layout, out.sigma);
  return res;
}

namespace {

void require_smoothable(const Prep& prep, double eps) {
  double tr = prep.ab_state.trace();
  if (std::abs(tr - 1.0) > 1e-9)
    throw ContractError("smooth entropy: input state must be normalized (tr = " +
                        std::to_string(tr) + ")");
  if (eps < 0.0 || eps >= 1.0) throw ContractError("smooth entropy: epsilon must lie in [0, 1)");
  if (!(std::sqrt(tr) > eps))
    throw ContractError("smooth entropy: requires sqrt(tr rho) > epsilon");
}

}  // namespace

EntropyResult smooth_hmin(const EntropyQuery& q) {
  Prep prep = prepare(q.state, q.target, q.conditioning);
  require_smoothable(prep, q.epsilon);
  if (q.epsilon == 0.0) {
    EntropyQuery plain{q.state, q.target, q.conditioning, 0.0};
    EntropyResult res = hmin(plain);
    res.smoothed_state = prep.ab_state;
    return res;
  }

  const int d = prep.da * prep.db;
  const int da = prep.da, db = prep.db;
  const CMat& rho = prep.ab_state.matrix();
  Support sup = support_of(rho);
  const int r = sup.r;
  const double fid_floor = std::sqrt(std::max(0.0, 1.0 - q.epsilon * q.epsilon));

  // Joint program: minimize tr sigma over rho_tilde in the eps-ball around rho
  // with I (x) sigma >= rho_tilde. G = [[rho_tilde, X],[X^dag, rho_r]].
  sdp::Problem p;
  int bg = p.add_block("G", d + r);
  int bz = p.add_block("Z", d);
  int bs = p.add_block("sigma", db);
  for (const auto& f : hermitian_basis(r)) {
    sdp::BlockMatrix a;
    a.add(bg, corner_br(d, r, f));
    p.add_eq(std::move(a), f.trace().real());
  }
  for (const auto& e : hermitian_basis(d)) {
    sdp::BlockMatrix a;
    a.add(bg, corner_tl(d, r, e));
    a.add(bz, e);
    a.add(bs, -trace_out_a(e, da, db));
    p.add_eq(std::move(a), 0.0);
  }
  {
    sdp::BlockMatrix a;
    a.add(bg, corner_tl(d, r, CMat::Identity(d, d)));
    p.add_leq(std::move(a), 1.0, "s_trace");
  }
  {
    sdp::BlockMatrix a;
    a.add(bg, offdiag(d, r, CMat(sup.root * 0.5)));
    p.add_geq(std::move(a), fid_floor, "s_fid");
  }
  p.add_objective(bs, CMat::Identity(db, db));

  EntropyResult res;
  sdp::Solution sol = solve_audited(p, "smooth_hmin", &res.residuals);
  double opt = midpoint_value(sol);
  res.sdp_gap = sol.gap;
  res.value = -log2_checked(opt, &res.is_neg_infinity);

  CMat sigma_raw = 0.5 * (sol.X[bs] + sol.X[bs].adjoint().eval());
  CMat rho_tilde = clamp_to_state(sol.X[bg].topLeftCorner(d, d));
  State smoothed(prep.ab_state.layout(), rho_tilde);
  BallCheck ball = in_ball(smoothed, prep.ab_state, q.epsilon);
  if (ball.slack < -1e-6)
    throw NumericalError("smooth_hmin: smoothed witness leaves the ball by " +
                         std::to_string(-ball.slack));
  double conic = min_eigenvalue(kron(CMat::Identity(da, da), sigma_raw) - smoothed.matrix());
  if (conic < -1e-6)
    throw NumericalError("smooth_hmin: witness violates I (x) sigma >= rho_tilde by " +
                         std::to_string(-conic));
  res.smoothed_state = smoothed;
  CMat sig_psd = clamp_psd(sigma_raw);
  double tr = sig_psd.trace().real();
  if (tr > 0) res.optimizer_sigma = State(prep.b_layout, sig_psd / tr);
  return res;
}

EntropyResult smooth_hmax(const EntropyQuery& q) {
  Prep prep = prepare(q.state, q.target, q.conditioning);
  require_smoothable(prep, q.epsilon);

  std::string pur = "_P";
  while (prep.ab_state.layout().has(pur)) pur += "_";
  PureState phi = purify(prep.ab_state, pur);
  std::vector<std::string> b_labels;
  for (const auto& f : prep.b_layout.factors()) b_labels.push_back(f.label);
  State rho_ap = partial_trace(phi.to_state(), b_labels);

  EntropyQuery dual_q{rho_ap, q.target, {pur}, q.epsilon};
  EntropyResult inner = smooth_hmin(dual_q);
  if (inner.is_neg_infinity)
    throw NumericalError("smooth_hmax: dual smooth_hmin returned -inf");
  EntropyResult res = inner;
  res.value = -inner.value;
  res.is_neg_infinity = false;
  return res;
}

std::vector<BoundsMargin> hmin_hmax_bounds_check(const State& rho,
                                                 const std::vector<std::string>& target,
                                                 const std::vector<std::string>& conditioning) {
  Prep prep = prepare(rho, target, conditioning);
  double t = prep.ab_state.trace();
  double log_t = std::log2(t);
  double log_da = std::log2(static_cast<double>(prep.da));
  double log_dmin = std::log2(static_cast<double>(std::min(prep.da, prep.db)));

  EntropyQuery q{rho, target, conditioning, 0.0};
  double h_min = hmin(q).value;
  double h_max = hmax(q).value;

  State normalized(prep.ab_state.layout(), prep.ab_state.matrix() / t);
  EntropyQuery qn{normalized, target, conditioning, 0.0};
  double h_min_n = hmin(qn).value;
  double h_max_n = hmax(qn).value;

  return {
      {"hmin_lower", h_min + log_t + log_dmin},
      {"hmin_upper", log_da - (h_min + log_t)},
      {"hmax_lower", h_max - log_t + log_dmin},
      {"hmax_upper", log_da - (h_max - log_t)},
      {"ordering_subnormalized", (h_max - log_t) - (h_min + log_t)},
      {"ordering_normalized", h_max_n - h_min_n},
  };
}

ContinuityBound continuity_bound(const State& rho, const State& tau,
                                 const std::vector<std::string>& target,
                                 const std::vector<std::string>& conditioning) {
  Prep prep_r = prepare(rho, target, conditioning);
  Prep prep_t = prepare(tau, target, conditioning);
  if (!(prep_r.ab_state.layout() == prep_t.ab_state.layout()))
    throw ContractError("continuity_bound: states disagree on the A|B layout");
  double delta = gen_trace_distance(prep_r.ab_state, prep_t.ab_state);
  EntropyQuery qr{rho, target, conditioning, 0.0};
  EntropyQuery qt{tau, target, conditioning, 0.0};
  double lhs = std::abs(hmin(qr).value - hmin(qt).value);
  double dmin = static_cast<double>(std::min(prep_r.da, prep_r.db));
  double rhs = prep_r.da * dmin * delta * kLog2E /
               std::min(prep_r.ab_state.trace(), prep_t.ab_state.trace());
  return ContinuityBound{lhs, rhs};
}

}  // namespace qse
