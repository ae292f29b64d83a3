#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qse/layout.hpp"
#include "qse/tolerances.hpp"

namespace qse {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

bool is_hermitian(const CMat& m, double tol = Tolerances::standard().hermiticity);
void require_hermitian(const CMat& m, const char* who,
                       double tol = Tolerances::standard().hermiticity);

struct HermEig {
  RVec values;   // descending
  CMat vectors;  // unitary columns; m = V diag(values) V^dag
};

// Eigendecomposition of a complex Hermitian matrix. Validates hermiticity and
// the reconstruction/unitarity residuals before returning.
HermEig herm_eig(const CMat& m, const Tolerances& tol = Tolerances::standard());

// tr of the projection of a Hermitian matrix onto its positive eigenspace;
// eigenvalues inside the psd_clamp window count as zero.
double positive_part_trace(const CMat& m, const Tolerances& tol = Tolerances::standard());

// Hermitian square root of a PSD matrix. Eigenvalues below -state_negativity
// raise ContractError; small negatives are clamped to zero.
CMat matrix_sqrt(const CMat& m, const Tolerances& tol = Tolerances::standard());

// Schatten 1-norm (sum of singular values).
double trace_norm(const CMat& m);

CMat kron(const CMat& a, const CMat& b);

// Numerical rank against the psd_clamp window (eigenvalue magnitude).
int herm_rank(const CMat& m, const Tolerances& tol = Tolerances::standard());

// Partial trace over the named factors; remaining factors keep their order.
CMat partial_trace(const CMat& m, const SystemLayout& layout,
                   const std::vector<std::string>& traced);

// Reorders tensor factors of a square operator to the given complete label order.
CMat permute_factors(const CMat& m, const SystemLayout& layout,
                     const std::vector<std::string>& new_order);

// Orthonormal basis of d x d Hermitian matrices in a fixed deterministic
// order: diagonal units, then symmetric and antisymmetric pairs for i < j.
std::vector<CMat> hermitian_basis(int d);

}  // namespace qse
