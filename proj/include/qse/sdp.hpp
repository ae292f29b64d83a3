#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qse/linalg.hpp"

namespace qse::sdp {

// Block-diagonal PSD variable description.
struct BlockSpec {
  std::string label;
  int dim = 0;
};

// Hermitian coefficient matrix stored sparsely over blocks.
struct BlockMatrix {
  std::vector<std::pair<int, CMat>> parts;  // (block index, coefficient)
  BlockMatrix& add(int block, CMat coeff) {
    parts.emplace_back(block, std::move(coeff));
    return *this;
  }
};

struct Constraint {
  BlockMatrix a;
  double b = 0.0;
};

// Standard primal form over complex Hermitian blocks:
//   minimize <C, X>  s.t.  <A_i, X> = b_i,  X >= 0 (block diagonal).
struct Problem {
  std::vector<BlockSpec> blocks;
  BlockMatrix objective;
  std::vector<Constraint> constraints;

  int add_block(const std::string& label, int dim);
  void add_objective(int block, CMat coeff);
  void add_eq(BlockMatrix a, double rhs);
  // Inequalities compile to equalities with a fresh 1x1 slack block.
  void add_leq(BlockMatrix a, double rhs, const std::string& slack_label);
  void add_geq(BlockMatrix a, double rhs, const std::string& slack_label);

  int total_dim() const;
  // Shape/hermiticity/finiteness checks plus detection of linearly dependent
  // constraints via the Gram matrix (rank tolerance 1e-10).
  void validate(const Tolerances& tol = Tolerances::standard()) const;
};

enum class SolveStatus {
  optimal,
  primal_infeasible_certificate,
  dual_infeasible_certificate,
  numerical_failure,
};

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<CMat> X;  // per block
  RVec y;
  std::vector<CMat> S;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // relative duality gap
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string message;
};

struct SolveOptions {
  double tol_target = 1e-10;        // aim for this on gap and residuals
  double optimal_threshold = 1e-8;  // declare optimal only at or below this
  int max_iterations = 200;
  double step_fraction = 0.98;  // fraction-to-boundary
  double schur_regularization = 1e-12;
  double divergence_threshold = 1e8;
  bool check_independence = true;
  std::string sdpa_dump_path;  // when set, dumps the realified problem
};

// Primal-dual path-following interior point (HKM direction, Mehrotra
// predictor-corrector) on the realified problem; deterministic.
Solution solve(const Problem& p, const SolveOptions& opts = {});

// Real symmetric embedding [[Re, -Im],[Im, Re]] per block; constraint values
// are doubled internally and results are halved so callers always see the
// complex-problem value.
struct RealProblem {
  std::vector<int> dims;
  std::vector<RMat> objective;                          // dense per block
  std::vector<std::vector<std::pair<int, RMat>>> rows;  // per constraint
  RVec b;
};

RealProblem realify(const Problem& p);

// Independent feasibility/optimality audit computed from the returned
// solution alone, never from solver internals.
struct ResidualReport {
  double primal_residual = 0.0;  // ||b - A(X)||_2 / (1 + ||b||)
  double dual_residual = 0.0;    // ||C - S - A*(y)||_F / (1 + ||C||)
  double gap = 0.0;              // relative duality gap recomputed
  double min_eig_X = 0.0;
  double min_eig_S = 0.0;
  bool ok(double tol = 1e-7) const;
};

ResidualReport check_solution(const Problem& p, const Solution& s);

// SDPA sparse format writer for cross-checks with external solvers.
void write_sdpa_sparse(const RealProblem& p, const std::string& path);

// Debug hook: when set, every solve dumps its realified problem to
// <prefix>.<n>.dat-s. Empty disables. Not part of the computational path.
void set_global_dump_prefix(const std::string& prefix);

}  // namespace qse::sdp
