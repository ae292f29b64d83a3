#include "qse/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

namespace qse::sdp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::primal_infeasible_certificate: return "primal-infeasible-certificate";
    case SolveStatus::dual_infeasible_certificate: return "dual-infeasible-certificate";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

int Problem::add_block(const std::string& label, int dim) {
  if (dim < 1) throw ContractError("sdp: block '" + label + "' has dim < 1");
  for (const auto& b : blocks)
    if (b.label == label) throw ContractError("sdp: duplicate block label '" + label + "'");
  blocks.push_back(BlockSpec{label, dim});
  return static_cast<int>(blocks.size()) - 1;
}

void Problem::add_objective(int block, CMat coeff) {
  objective.add(block, std::move(coeff));
}

void Problem::add_eq(BlockMatrix a, double rhs) {
  constraints.push_back(Constraint{std::move(a), rhs});
}

void Problem::add_leq(BlockMatrix a, double rhs, const std::string& slack_label) {
  int s = add_block(slack_label, 1);
  a.add(s, CMat::Identity(1, 1));
  add_eq(std::move(a), rhs);
}

void Problem::add_geq(BlockMatrix a, double rhs, const std::string& slack_label) {
  int s = add_block(slack_label, 1);
  a.add(s, -CMat::Identity(1, 1));
  add_eq(std::move(a), rhs);
}

int Problem::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

namespace {

double block_inner(const BlockMatrix& a, const BlockMatrix& b) {
  double sum = 0.0;
  for (const auto& [ia, ma] : a.parts)
    for (const auto& [ib, mb] : b.parts)
      if (ia == ib) sum += (ma.adjoint() * mb).trace().real();
  return sum;
}

double block_norm(const BlockMatrix& a) { return std::sqrt(std::max(0.0, block_inner(a, a))); }

void check_parts(const BlockMatrix& bm, const std::vector<BlockSpec>& blocks, const char* who,
                 const Tolerances& tol) {
  for (const auto& [idx, m] : bm.parts) {
    if (idx < 0 || idx >= static_cast<int>(blocks.size()))
      throw ContractError(std::string(who) + ": part references unknown block");
    if (m.rows() != blocks[idx].dim || m.cols() != blocks[idx].dim)
      throw ContractError(std::string(who) + ": part shape does not match block '" +
                          blocks[idx].label + "'");
    require_hermitian(m, who, tol.hermiticity);
  }
}

}  // namespace

void Problem::validate(const Tolerances& tol) const {
  if (blocks.empty()) throw ContractError("sdp: problem has no blocks");
  check_parts(objective, blocks, "sdp objective", tol);
  for (const auto& c : constraints) {
    check_parts(c.a, blocks, "sdp constraint", tol);
    if (!std::isfinite(c.b)) throw ContractError("sdp: constraint rhs is not finite");
  }
  const int m = static_cast<int>(constraints.size());
  if (m == 0) return;
  RVec norms(m);
  for (int i = 0; i < m; ++i) {
    norms(i) = block_norm(constraints[i].a);
    if (norms(i) <= 0.0)
      throw ContractError("sdp: constraint " + std::to_string(i) + " has zero coefficient matrix");
  }
  RMat gram(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double g = block_inner(constraints[i].a, constraints[j].a) / (norms(i) * norms(j));
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < 1e-10)
    throw ContractError("sdp: constraint matrices are linearly dependent (normalized Gram min "
                        "eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) + ")");
}

RealProblem realify(const Problem& p) {
  auto embed = [](const CMat& a) {
    const long n = a.rows();
    RMat out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = a.real();
    out.bottomRightCorner(n, n) = a.real();
    out.topRightCorner(n, n) = -a.imag();
    out.bottomLeftCorner(n, n) = a.imag();
    return out;
  };
  RealProblem rp;
  for (const auto& b : p.blocks) rp.dims.push_back(2 * b.dim);
  rp.objective.resize(p.blocks.size());
  for (size_t i = 0; i < p.blocks.size(); ++i)
    rp.objective[i] = RMat::Zero(rp.dims[i], rp.dims[i]);
  for (const auto& [idx, m] : p.objective.parts) rp.objective[idx] += embed(m);
  rp.b = RVec(p.constraints.size());
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    std::vector<std::pair<int, RMat>> row;
    for (const auto& [idx, m] : p.constraints[j].a.parts) {
      bool merged = false;
      for (auto& [ri, rm] : row)
        if (ri == idx) {
          rm += embed(m);
          merged = true;
          break;
        }
      if (!merged) row.emplace_back(idx, embed(m));
    }
    rp.rows.push_back(std::move(row));
    rp.b(j) = 2.0 * p.constraints[j].b;  // <R(A), R(X)> = 2 <A, X>
  }
  return rp;
}

namespace {

// The interior-point core runs in extended precision: the smoothing programs
// are small but nearly degenerate, and the kappa ~ 1/mu roundoff growth
// exhausts binary64 around a duality gap of 1e-7.
using LD = long double;
using LMat = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

using Blocks = std::vector<LMat>;

LD dot_blocks(const Blocks& a, const Blocks& b) {
  LD s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

LD norm_blocks(const Blocks& a) { return std::sqrt(std::max<LD>(0.0, dot_blocks(a, a))); }

struct RealSolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  Blocks X, S;
  LVec y;
  LD primal_value = 0.0, dual_value = 0.0;
  LD gap = 0.0, primal_residual = 0.0, dual_residual = 0.0;
  int iterations = 0;
  std::string message;
};

class RealSolver {
 public:
  RealSolver(const RealProblem& p, const SolveOptions& opts) : p_(p), opts_(opts) {
    m_ = static_cast<int>(p.rows.size());
    nb_ = static_cast<int>(p.dims.size());
    n_total_ = 0;
    for (int d : p.dims) n_total_ += d;
    for (const auto& c : p.objective) obj_.push_back(c.cast<LD>());
    for (const auto& row : p.rows) {
      std::vector<std::pair<int, LMat>> r;
      for (const auto& [idx, a] : row) r.emplace_back(idx, a.cast<LD>());
      rows_.push_back(std::move(r));
    }
    b_ = p.b.cast<LD>();
    norm_b_ = b_.size() ? b_.norm() : 0.0;
    norm_c_ = 0.0;
    for (const auto& c : obj_) norm_c_ += c.squaredNorm();
    norm_c_ = std::sqrt(norm_c_);
  }

  RealSolveResult run() {
    initialize();
    RealSolveResult best;
    LD best_metric = std::numeric_limits<double>::infinity();
    int slow_count = 0, tiny_step_count = 0;
    LD prev_metric = std::numeric_limits<double>::infinity();

    static const bool trace = std::getenv("QSE_SDP_TRACE") != nullptr;
    for (int iter = 0;; ++iter) {
      compute_residuals();
      LD metric = std::max({relgap_, pres_, dres_});
      if (trace)
        std::fprintf(stderr, "iter %3d gap %.3e pres %.3e dres %.3e mu %.3e ynorm %.3e\n", iter,
                     (double)relgap_, (double)pres_, (double)dres_, (double)mu_,
                     (double)y_.norm());
      if (metric < best_metric) {
        best_metric = metric;
        snapshot(best, iter);
      }
      if (metric <= opts_.tol_target) {
        snapshot(best, iter);
        best.status = SolveStatus::optimal;
        return best;
      }
      if (metric > 0.98 * prev_metric) {
        if (++slow_count >= 15) break;
      } else {
        slow_count = 0;
      }
      // Regressing well past the best point means the numerics are exhausted.
      if (metric > 10.0 * best_metric && best_metric < 1e-6) break;
      prev_metric = metric;
      if (iter >= opts_.max_iterations) break;

      LD size = norm_blocks(X_) + norm_blocks(S_) + y_.norm();
      if (size > opts_.divergence_threshold * eta_) {
        auto cert = infeasibility_certificates();
        if (cert) {
          best.status = *cert;
          best.message = "divergence with improving ray";
          snapshot_raw(best, iter);
          return best;
        }
        best.message = "iterates diverged without certificate";
        break;
      }

      if (!factorize()) {
        best.message = "Cholesky factorization of an iterate failed";
        break;
      }
      if (!assemble_schur()) {
        best.message = "Schur complement not positive definite";
        break;
      }

      // Predictor (affine scaling direction).
      Blocks psi_rd = apply_psi(Rd_);
      LVec rhs1(m_);
      for (int j = 0; j < m_; ++j) rhs1(j) = b_(j) + row_inner(j, psi_rd);
      LVec dy_aff = schur_solve(rhs1);
      Blocks dS_aff = Rd_;
      subtract_adjoint(dS_aff, dy_aff);
      Blocks dX_aff = apply_psi(dS_aff);
      for (int b = 0; b < nb_; ++b) {
        dX_aff[b] = (-X_[b] - dX_aff[b]).eval();
        dX_aff[b] = 0.5 * (dX_aff[b] + dX_aff[b].transpose().eval());
      }
      refine_primal_direction(dX_aff, rp_);

      LD ap_aff = std::min<LD>(1.0, max_step(X_, dX_aff, x_llt_));
      LD ad_aff = std::min<LD>(1.0, max_step(S_, dS_aff, s_llt_));
      LD mu_aff = 0.0;
      for (int b = 0; b < nb_; ++b)
        mu_aff += (X_[b] + ap_aff * dX_aff[b]).cwiseProduct(S_[b] + ad_aff * dS_aff[b]).sum();
      mu_aff = std::max<LD>(0.0, mu_aff / n_total_);
      LD sigma = std::clamp<LD>(std::pow(mu_aff / mu_, (LD)3.0), 0.0, 1.0);

      // Corrector (combined direction with the second-order term). When the
      // combined step collapses against the boundary, retry with a more
      // centering sigma; the last retry drops the second-order term entirely
      // (a pure centering step). The Schur factorization is reused throughout.
      LVec dy;
      Blocks dS, dX;
      LD ap = 0.0, ad = 0.0;
      for (int attempt = 0; attempt < 4; ++attempt) {
        bool pure_center = attempt == 3;
        Blocks rc(nb_);
        for (int b = 0; b < nb_; ++b) {
          rc[b] = sigma * mu_ * s_inv_[b] - X_[b];
          if (!pure_center) {
            LMat second = dX_aff[b] * dS_aff[b] * s_inv_[b];
            rc[b] -= 0.5 * (second + second.transpose().eval());
          }
        }
        LVec rhs2(m_);
        for (int j = 0; j < m_; ++j) rhs2(j) = rp_(j) - row_inner(j, rc) + row_inner(j, psi_rd);
        dy = schur_solve(rhs2);
        dS = Rd_;
        subtract_adjoint(dS, dy);
        dX = apply_psi(dS);
        for (int b = 0; b < nb_; ++b) {
          dX[b] = (rc[b] - dX[b]).eval();
          dX[b] = 0.5 * (dX[b] + dX[b].transpose().eval());
        }
        refine_primal_direction(dX, rp_);
        ap = std::min<LD>(1.0, opts_.step_fraction * max_step(X_, dX, x_llt_));
        ad = std::min<LD>(1.0, opts_.step_fraction * max_step(S_, dS, s_llt_));
        if (trace)
          std::fprintf(stderr,
                       "        try %d sigma %.3e ap_aff %.3e ad_aff %.3e ap %.3e ad %.3e\n",
                       attempt, (double)sigma, (double)ap_aff, (double)ad_aff, (double)ap,
                       (double)ad);
        if (pure_center) break;
        if (std::min(ap, ad) >= 0.2L * std::min({ap_aff, ad_aff, (LD)0.5})) break;
        sigma = std::min<LD>(1.0, 4.0L * sigma + 0.1L);
      }
      if (std::max(ap, ad) < 1e-10) {
        if (++tiny_step_count >= 2) {
          best.message = "step lengths collapsed";
          break;
        }
      } else {
        tiny_step_count = 0;
      }
      for (int b = 0; b < nb_; ++b) {
        X_[b] += ap * dX[b];
        X_[b] = 0.5 * (X_[b] + X_[b].transpose().eval());
        S_[b] += ad * dS[b];
        S_[b] = 0.5 * (S_[b] + S_[b].transpose().eval());
      }
      y_ += ad * dy;
    }

    best.status = best_metric <= opts_.optimal_threshold ? SolveStatus::optimal
                                                         : SolveStatus::numerical_failure;
    if (best.status == SolveStatus::numerical_failure && best.message.empty())
      best.message = "iteration cap reached at residual " + std::to_string(best_metric);
    return best;
  }

 private:
  void initialize() {
    LD amax = 0.0;
    for (const auto& row : rows_) {
      LD n2 = 0.0;
      for (const auto& [idx, a] : row) n2 += a.squaredNorm();
      amax = std::max(amax, std::sqrt(n2));
    }
    LD bmax = b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0;
    eta_ = 1.0 + std::max({norm_c_, amax, bmax});
    X_.clear();
    S_.clear();
    for (int d : p_.dims) {
      X_.push_back(eta_ * LMat::Identity(d, d));
      S_.push_back(eta_ * LMat::Identity(d, d));
    }
    y_ = LVec::Zero(m_);
  }

  void compute_residuals() {
    rp_ = LVec(m_);
    for (int j = 0; j < m_; ++j) {
      LD ax = 0.0;
      for (const auto& [idx, a] : rows_[j]) ax += a.cwiseProduct(X_[idx]).sum();
      rp_(j) = b_(j) - ax;
    }
    Rd_.assign(nb_, LMat());
    for (int b = 0; b < nb_; ++b) Rd_[b] = obj_[b] - S_[b];
    for (int j = 0; j < m_; ++j)
      for (const auto& [idx, a] : rows_[j]) Rd_[idx] -= y_(j) * a;

    pobj_ = 0.0;
    for (int b = 0; b < nb_; ++b) pobj_ += obj_[b].cwiseProduct(X_[b]).sum();
    dobj_ = b_.dot(y_);
    mu_ = std::max<LD>(dot_blocks(X_, S_) / n_total_, 0.0);
    relgap_ = std::abs(pobj_ - dobj_) / (1.0 + std::abs(pobj_) + std::abs(dobj_));
    pres_ = rp_.norm() / (1.0 + norm_b_);
    dres_ = norm_blocks(Rd_) / (1.0 + norm_c_);
  }

  bool factorize() {
    x_llt_.clear();
    s_llt_.clear();
    s_inv_.assign(nb_, LMat());
    w_.assign(nb_, LMat());
    for (int b = 0; b < nb_; ++b) {
      Eigen::LLT<LMat> lx(X_[b]);
      Eigen::LLT<LMat> ls(S_[b]);
      if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
      s_inv_[b] = ls.solve(LMat::Identity(p_.dims[b], p_.dims[b]));
      s_inv_[b] = 0.5 * (s_inv_[b] + s_inv_[b].transpose().eval());
      // Nesterov-Todd scaling point: W S W = X.
      Eigen::SelfAdjointEigenSolver<LMat> es(S_[b]);
      if (es.info() != Eigen::Success) return false;
      LVec sv = es.eigenvalues().cwiseMax(1e-300);
      LMat s_half = es.eigenvectors() * sv.cwiseSqrt().asDiagonal() *
                    es.eigenvectors().transpose();
      LMat s_half_inv = es.eigenvectors() * sv.cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
      LMat t = s_half * X_[b] * s_half;
      t = 0.5 * (t + t.transpose().eval());
      Eigen::SelfAdjointEigenSolver<LMat> et(t);
      if (et.info() != Eigen::Success) return false;
      LMat t_half = et.eigenvectors() * et.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                    et.eigenvectors().transpose();
      LMat w = s_half_inv * t_half * s_half_inv;
      w_[b] = 0.5 * (w + w.transpose().eval());
      x_llt_.push_back(std::move(lx));
      s_llt_.push_back(std::move(ls));
    }
    return true;
  }

  // Psi(U) = W U W with the Nesterov-Todd scaling point, per block.
  Blocks apply_psi(const Blocks& u) const {
    Blocks out(nb_);
    for (int b = 0; b < nb_; ++b) {
      LMat t = w_[b] * u[b] * w_[b];
      out[b] = 0.5 * (t + t.transpose().eval());
    }
    return out;
  }

  LD row_inner(int j, const Blocks& u) const {
    LD s = 0.0;
    for (const auto& [idx, a] : rows_[j]) s += a.cwiseProduct(u[idx]).sum();
    return s;
  }

  void subtract_adjoint(Blocks& target, const LVec& y) const {
    for (int j = 0; j < m_; ++j)
      for (const auto& [idx, a] : rows_[j]) target[idx] -= y(j) * a;
  }

  bool assemble_schur() {
    // W_j = Psi(A_j), stored sparsely per constraint.
    std::vector<std::vector<std::pair<int, LMat>>> w(m_);
    for (int j = 0; j < m_; ++j) {
      for (const auto& [idx, a] : rows_[j]) {
        LMat t = w_[idx] * a * w_[idx];
        w[j].emplace_back(idx, LMat(0.5 * (t + t.transpose().eval())));
      }
    }
    schur_mat_ = LMat::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = i; j < m_; ++j) {
        LD s = 0.0;
        for (const auto& [bi, ai] : rows_[i])
          for (const auto& [bj, wj] : w[j])
            if (bi == bj) s += ai.cwiseProduct(wj).sum();
        schur_mat_(i, j) = s;
        schur_mat_(j, i) = s;
      }
    }
    LD scale = std::max<LD>(1.0, schur_mat_.diagonal().maxCoeff());
    // The extended-precision core affords a far smaller Tikhonov shift than a
    // binary64 design would; this keeps the iterative refinement contractive
    // even when the Schur complement is nearly singular at a degenerate
    // optimum.
    LD reg = std::min<LD>(opts_.schur_regularization, 1e-14L) * scale;
    for (int attempt = 0; attempt < 4; ++attempt) {
      LMat regd = schur_mat_ + reg * LMat::Identity(m_, m_);
      schur_.compute(regd);
      if (schur_.info() == Eigen::Success) return true;
      reg *= 100.0;
      if (reg > 1e-6 * scale) break;
    }
    return false;
  }

  // Cholesky solve with iterative refinement against the unregularized Schur
  // matrix; the regularized factor alone loses too many digits when X and S
  // are strongly ill-conditioned near the optimal face.
  LVec schur_solve(const LVec& rhs) const {
    LVec x = schur_.solve(rhs);
    for (int round = 0; round < 6; ++round) {
      LVec r = rhs - schur_mat_ * x;
      if (r.norm() <= 1e-17L * (1.0 + rhs.norm())) break;
      x += schur_.solve(r);
    }
    return x;
  }

  // The eliminated dX inherits roundoff of order eps*cond(S) from the Psi
  // products, which destroys primal feasibility in the endgame. Project the
  // constraint error back out through the factored Schur complement.
  void refine_primal_direction(Blocks& dx, const LVec& target) const {
    for (int round = 0; round < 2; ++round) {
      LVec e(m_);
      for (int j = 0; j < m_; ++j) e(j) = target(j) - row_inner(j, dx);
      if (e.norm() <= 1e-13 * (1.0 + target.norm())) return;
      LVec lam = schur_solve(e);
      Blocks corr(nb_);
      for (int b = 0; b < nb_; ++b) corr[b] = LMat::Zero(p_.dims[b], p_.dims[b]);
      for (int j = 0; j < m_; ++j)
        for (const auto& [idx, a] : rows_[j]) corr[idx] += lam(j) * a;
      Blocks psi_corr = apply_psi(corr);
      for (int b = 0; b < nb_; ++b) {
        dx[b] += psi_corr[b];
        dx[b] = 0.5 * (dx[b] + dx[b].transpose().eval());
      }
    }
  }

  // Largest alpha with M + alpha D >= 0 (per block, via L^-1 D L^-T).
  LD max_step(const Blocks& /*base*/, const Blocks& dir,
                  const std::vector<Eigen::LLT<LMat>>& llts) const {
    LD alpha = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb_; ++b) {
      const auto& L = llts[b].matrixL();
      LMat t1 = L.solve(dir[b]);
      LMat t = L.solve(t1.transpose()).transpose();
      t = 0.5 * (t + t.transpose().eval());
      Eigen::SelfAdjointEigenSolver<LMat> es(t, Eigen::EigenvaluesOnly);
      LD lmin = es.eigenvalues().minCoeff();
      if (lmin < -1e-14) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
  }

  std::optional<SolveStatus> infeasibility_certificates() const {
    // Dual improving ray: sum y_i A_i <= 0 with b'y > 0 certifies primal
    // infeasibility; A(X) ~ 0 with <C,X> < 0 certifies dual infeasibility.
    LD yn = y_.norm();
    if (yn > 0) {
      LVec yh = y_ / yn;
      Blocks z(nb_);
      for (int b = 0; b < nb_; ++b) z[b] = LMat::Zero(p_.dims[b], p_.dims[b]);
      for (int j = 0; j < m_; ++j)
        for (const auto& [idx, a] : rows_[j]) z[idx] += yh(j) * a;
      LD lmax = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < nb_; ++b) {
        Eigen::SelfAdjointEigenSolver<LMat> es(z[b], Eigen::EigenvaluesOnly);
        lmax = std::max(lmax, es.eigenvalues().maxCoeff());
      }
      if (lmax <= 1e-8 && b_.dot(yh) > 1e-8) return SolveStatus::primal_infeasible_certificate;
    }
    LD xn = norm_blocks(X_);
    if (xn > 0) {
      LD ax = 0.0;
      for (int j = 0; j < m_; ++j) {
        LD v = 0.0;
        for (const auto& [idx, a] : rows_[j]) v += a.cwiseProduct(X_[idx]).sum();
        ax += v * v;
      }
      ax = std::sqrt(ax) / xn;
      LD cx = 0.0;
      for (int b = 0; b < nb_; ++b) cx += obj_[b].cwiseProduct(X_[b]).sum();
      cx /= xn;
      if (ax <= 1e-8 && cx < -1e-8) return SolveStatus::dual_infeasible_certificate;
    }
    return std::nullopt;
  }

  void snapshot(RealSolveResult& out, int iter) {
    snapshot_raw(out, iter);
    out.primal_value = pobj_;
    out.dual_value = dobj_;
    out.gap = relgap_;
    out.primal_residual = pres_;
    out.dual_residual = dres_;
  }

  void snapshot_raw(RealSolveResult& out, int iter) {
    out.X = X_;
    out.S = S_;
    out.y = y_;
    out.iterations = iter;
  }

  const RealProblem& p_;
  std::vector<LMat> obj_;
  std::vector<std::vector<std::pair<int, LMat>>> rows_;
  LVec b_;
  const SolveOptions& opts_;
  int m_ = 0, nb_ = 0, n_total_ = 0;
  LD norm_b_ = 0.0, norm_c_ = 0.0, eta_ = 1.0;
  Blocks X_, S_, Rd_;
  LVec y_, rp_;
  std::vector<Eigen::LLT<LMat>> x_llt_, s_llt_;
  Blocks s_inv_, w_;
  Eigen::LLT<LMat> schur_;
  LMat schur_mat_;
  LD pobj_ = 0.0, dobj_ = 0.0, mu_ = 0.0, relgap_ = 0.0, pres_ = 0.0, dres_ = 0.0;
};

CMat decomplexify(const LMat& r) {
  const long n = r.rows() / 2;
  CMat out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      LD re = 0.5L * (r(i, j) + r(n + i, n + j));
      LD im = 0.5L * (r(n + i, j) - r(i, n + j));
      out(i, j) = cxd(static_cast<double>(re), static_cast<double>(im));
    }
  out = 0.5 * (out + out.adjoint().eval());
  return out;
}

}  // namespace

namespace {
std::mutex g_dump_mutex;
std::string g_dump_prefix;
int g_dump_counter = 0;
}  // namespace

void set_global_dump_prefix(const std::string& prefix) {
  std::lock_guard<std::mutex> lock(g_dump_mutex);
  g_dump_prefix = prefix;
  g_dump_counter = 0;
}

Solution solve(const Problem& p, const SolveOptions& opts) {
  if (opts.check_independence) p.validate();
  RealProblem rp = realify(p);
  if (!opts.sdpa_dump_path.empty()) write_sdpa_sparse(rp, opts.sdpa_dump_path);
  {
    std::lock_guard<std::mutex> lock(g_dump_mutex);
    if (!g_dump_prefix.empty() && opts.sdpa_dump_path.empty())
      write_sdpa_sparse(rp, g_dump_prefix + "." + std::to_string(g_dump_counter++) + ".dat-s");
  }
  RealSolver solver(rp, opts);
  RealSolveResult rr = solver.run();

  Solution out;
  out.status = rr.status;
  out.iterations = rr.iterations;
  out.message = rr.message;
  out.y = rr.y.cast<double>();
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    out.X.push_back(decomplexify(rr.X[b]));
    out.S.push_back(decomplexify(rr.S[b]));
  }
  out.primal_value = 0.5 * rr.primal_value;
  out.dual_value = 0.5 * rr.dual_value;
  ResidualReport audit = check_solution(p, out);
  out.gap = audit.gap;
  out.primal_residual = audit.primal_residual;
  out.dual_residual = audit.dual_residual;
  return out;
}

bool ResidualReport::ok(double tol) const {
  return primal_residual <= tol && dual_residual <= tol && gap <= tol &&
         min_eig_X >= -1e-9 && min_eig_S >= -1e-9;
}

ResidualReport check_solution(const Problem& p, const Solution& s) {
  ResidualReport rep;
  if (s.X.size() != p.blocks.size() || s.S.size() != p.blocks.size())
    throw ContractError("check_solution: block count mismatch");

  double pn2 = 0.0, bn2 = 0.0;
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    double ax = 0.0;
    for (const auto& [idx, a] : p.constraints[j].a.parts)
      ax += (a.adjoint() * s.X[idx]).trace().real();
    double r = p.constraints[j].b - ax;
    pn2 += r * r;
    bn2 += p.constraints[j].b * p.constraints[j].b;
  }
  rep.primal_residual = std::sqrt(pn2) / (1.0 + std::sqrt(bn2));

  std::vector<CMat> rd;
  double cn2 = 0.0;
  for (size_t b = 0; b < p.blocks.size(); ++b)
    rd.push_back(CMat::Zero(p.blocks[b].dim, p.blocks[b].dim));
  for (const auto& [idx, m] : p.objective.parts) {
    rd[idx] += m;
    cn2 += m.squaredNorm();
  }
  for (size_t b = 0; b < p.blocks.size(); ++b) rd[b] -= s.S[b];
  for (size_t j = 0; j < p.constraints.size(); ++j)
    for (const auto& [idx, a] : p.constraints[j].a.parts) rd[idx] -= s.y(j) * a;
  double dn2 = 0.0;
  for (const auto& m : rd) dn2 += m.squaredNorm();
  rep.dual_residual = std::sqrt(dn2) / (1.0 + std::sqrt(cn2));

  double pobj = 0.0;
  for (const auto& [idx, m] : p.objective.parts)
    pobj += (m.adjoint() * s.X[idx]).trace().real();
  double dobj = 0.0;
  for (size_t j = 0; j < p.constraints.size(); ++j) dobj += p.constraints[j].b * s.y(j);
  rep.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

  double min_x = std::numeric_limits<double>::infinity();
  double min_s = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<CMat> ex(s.X[b], Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<CMat> es(s.S[b], Eigen::EigenvaluesOnly);
    min_x = std::min(min_x, ex.eigenvalues().minCoeff());
    min_s = std::min(min_s, es.eigenvalues().minCoeff());
  }
  rep.min_eig_X = min_x;
  rep.min_eig_S = min_s;
  return rep;
}

void write_sdpa_sparse(const RealProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractError("write_sdpa_sparse: cannot open '" + path + "'");
  out << "\"realified block problem; F0 = -C, Fi = Ai, c = b\n";
  out << p.b.size() << "\n";
  out << p.dims.size() << "\n";
  for (size_t i = 0; i < p.dims.size(); ++i) out << p.dims[i] << (i + 1 < p.dims.size() ? " " : "\n");
  for (long i = 0; i < p.b.size(); ++i) out << std::scientific << p.b(i) << (i + 1 < p.b.size() ? " " : "\n");
  auto emit = [&out](int matno, int blk, const RMat& m, double scale) {
    for (long i = 0; i < m.rows(); ++i)
      for (long j = i; j < m.cols(); ++j)
        if (m(i, j) != 0.0)
          out << matno << " " << blk << " " << i + 1 << " " << j + 1 << " "
              << std::scientific << scale * m(i, j) << "\n";
  };
  for (size_t b = 0; b < p.objective.size(); ++b)
    emit(0, static_cast<int>(b) + 1, p.objective[b], -1.0);
  for (size_t j = 0; j < p.rows.size(); ++j)
    for (const auto& [idx, a] : p.rows[j]) emit(static_cast<int>(j) + 1, idx + 1, a, 1.0);
}

}  // namespace qse::sdp
