#include "qse/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace qse {

const Tolerances& Tolerances::standard() {
  static const Tolerances t;
  return t;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void require_hermitian(const CMat& m, const char* who, double tol) {
  if (m.rows() != m.cols())
    throw ContractError(std::string(who) + ": matrix is not square");
  if (!is_hermitian(m, tol))
    throw ContractError(std::string(who) + ": matrix is not Hermitian within tolerance");
}

HermEig herm_eig(const CMat& m, const Tolerances& tol) {
  require_hermitian(m, "herm_eig", tol.hermiticity);
  Eigen::SelfAdjointEigenSolver<CMat> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver did not converge (dim " +
                         std::to_string(m.rows()) + ")");
  }
  const int n = static_cast<int>(m.rows());
  HermEig out;
  out.values = RVec(n);
  out.vectors = CMat(n, n);
  for (int i = 0; i < n; ++i) {  // ascending -> descending
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  double norm = m.norm();
  double rec = (out.vectors * out.values.asDiagonal() * out.vectors.adjoint() - m).norm();
  double uni = (out.vectors.adjoint() * out.vectors - CMat::Identity(n, n)).norm();
  if (rec > tol.eig_residual * (1.0 + norm) || uni > tol.eig_residual) {
    throw NumericalError("herm_eig: residuals out of tolerance (reconstruction " +
                         std::to_string(rec) + ", unitarity " + std::to_string(uni) + ")");
  }
  return out;
}

double positive_part_trace(const CMat& m, const Tolerances& tol) {
  HermEig eig = herm_eig(m, tol);
  double sum = 0.0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) >= tol.psd_clamp) sum += eig.values(i);
  return sum;
}

CMat matrix_sqrt(const CMat& m, const Tolerances& tol) {
  HermEig eig = herm_eig(m, tol);
  RVec root(eig.values.size());
  for (int i = 0; i < eig.values.size(); ++i) {
    double v = eig.values(i);
    if (v < -tol.state_negativity)
      throw ContractError("matrix_sqrt: matrix is not PSD (eigenvalue " + std::to_string(v) + ")");
    root(i) = v > 0 ? std::sqrt(v) : 0.0;
  }
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues().sum();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

int herm_rank(const CMat& m, const Tolerances& tol) {
  HermEig eig = herm_eig(m, tol);
  int r = 0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) >= tol.psd_clamp) ++r;
  return r;
}

namespace {

// Flat index contributions of a factor subset, in the subset's own row-major order.
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
    for (long t = 0; t < total; ++t) {
      long pos = (t % block) / repeat;
      off[t] += pos * stride;
    }
    repeat = block;
  }
  return off;
}

}  // namespace

CMat partial_trace(const CMat& m, const SystemLayout& layout,
                   const std::vector<std::string>& traced) {
  if (m.rows() != m.cols() || m.rows() != layout.total_dim())
    throw ContractError("partial_trace: matrix does not match layout " + layout.str());
  auto traced_idx = layout.indices_of(traced);
  std::vector<int> kept_idx;
  for (int i = 0; i < layout.count(); ++i)
    if (std::find(traced_idx.begin(), traced_idx.end(), i) == traced_idx.end())
      kept_idx.push_back(i);

  auto kept_off = subset_offsets(layout, kept_idx);
  auto traced_off = subset_offsets(layout, traced_idx);
  const long dk = static_cast<long>(kept_off.size());

  CMat out = CMat::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      cxd sum = 0.0;
      for (long t : traced_off) sum += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = sum;
    }
  return out;
}

CMat permute_factors(const CMat& m, const SystemLayout& layout,
                     const std::vector<std::string>& new_order) {
  if (static_cast<int>(new_order.size()) != layout.count())
    throw ContractError("permute_factors: order must list every factor exactly once");
  auto perm = layout.indices_of(new_order);  // new position p holds old factor perm[p]
  {
    auto sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
      if (sorted[i] != i) throw ContractError("permute_factors: order repeats a factor");
  }
  if (m.rows() != m.cols() || m.rows() != layout.total_dim())
    throw ContractError("permute_factors: matrix does not match layout " + layout.str());

  auto old_strides = layout_strides(layout);
  std::vector<Factor> new_factors;
  for (int p : perm) new_factors.push_back(layout[p]);
  SystemLayout new_layout(new_factors);
  auto new_strides = layout_strides(new_layout);

  const long d = layout.total_dim();
  std::vector<long> map(static_cast<size_t>(d), 0);  // new flat -> old flat
  for (long f = 0; f < d; ++f) {
    long rem = f, old_flat = 0;
    for (int p = 0; p < new_layout.count(); ++p) {
      long pos = rem / new_strides[p];
      rem %= new_strides[p];
      old_flat += pos * old_strides[perm[p]];
    }
    map[f] = old_flat;
  }
  CMat out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

std::vector<CMat> hermitian_basis(int d) {
  if (d < 1) throw ContractError("hermitian_basis: dimension must be positive");
  std::vector<CMat> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    CMat e = CMat::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMat s = CMat::Zero(d, d);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(std::move(s));
      CMat a = CMat::Zero(d, d);
      a(i, j) = cxd(0.0, inv_sqrt2);
      a(j, i) = cxd(0.0, -inv_sqrt2);
      basis.push_back(std::move(a));
    }
  return basis;
}

}  // namespace qse
