#include <cmath>

#include "doctest.h"
#include "qse/linalg.hpp"
#include "qse/random.hpp"

using namespace qse;

namespace {

CMat diag(std::initializer_list<double> vals) {
  CMat m = CMat::Zero(static_cast<long>(vals.size()), static_cast<long>(vals.size()));
  long i = 0;
  for (double v : vals) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST_CASE("herm_eig on simple spectra") {
  auto id = herm_eig(CMat::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));

  auto d = herm_eig(diag({3.0, -1.0}));
  CHECK(d.values(0) == doctest::Approx(3.0));
  CHECK(d.values(1) == doctest::Approx(-1.0));
  // eigenvectors are a permutation of the standard basis
  CHECK(std::abs(d.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(1, 1)) == doctest::Approx(1.0));

  CMat x(2, 2);
  x << 0, 1, 1, 0;
  auto px = herm_eig(x);
  CHECK(px.values(0) == doctest::Approx(1.0));
  CHECK(px.values(1) == doctest::Approx(-1.0));
  CMat rec = px.vectors * px.values.asDiagonal() * px.vectors.adjoint();
  CHECK((rec - x).norm() <= 1e-10 * (1 + x.norm()));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  CMat m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(herm_eig(m), ContractError);
}

TEST_CASE("herm_eig residuals on 1000 seeded random Hermitian matrices") {
  const int dims[] = {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
  SplitStream g(20240901);
  for (int t = 0; t < 1000; ++t) {
    int d = dims[t % (sizeof(dims) / sizeof(dims[0]))];
    CMat m = random_hermitian(d, g);
    auto eig = herm_eig(m);
    CMat rec = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    CHECK((rec - m).norm() <= 1e-10 * (1 + m.norm()));
    CHECK((eig.vectors.adjoint() * eig.vectors - CMat::Identity(d, d)).norm() <= 1e-10);
    for (int i = 1; i < d; ++i) CHECK(eig.values(i - 1) >= eig.values(i));
  }
}

TEST_CASE("positive_part_trace") {
  CHECK(positive_part_trace(diag({0.7, -0.2})) == doctest::Approx(0.7));
  CHECK(positive_part_trace(CMat::Zero(3, 3)) == doctest::Approx(0.0));
  CHECK(positive_part_trace(diag({0.5, 0.5, -1.0})) == doctest::Approx(1.0));
}

TEST_CASE("matrix_sqrt") {
  CHECK((matrix_sqrt(CMat::Identity(3, 3)) - CMat::Identity(3, 3)).norm() < 1e-12);
  CMat r = matrix_sqrt(diag({4.0, 9.0}));
  CHECK(r(0, 0).real() == doctest::Approx(2.0));
  CHECK(r(1, 1).real() == doctest::Approx(3.0));

  CMat plus(2, 2);  // |+><+| is its own square root
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((matrix_sqrt(plus) - plus).norm() < 1e-10);

  SplitStream g(7);
  for (int t = 0; t < 50; ++t) {
    CMat h = random_hermitian(5, g);
    CMat psd = h * h.adjoint();
    CMat s = matrix_sqrt(psd);
    CHECK((s * s - psd).norm() <= 1e-9 * (1 + psd.norm()));
  }
  CHECK_THROWS_AS(matrix_sqrt(diag({1.0, -0.5})), ContractError);
}

TEST_CASE("trace_norm agrees with eigenvalue sums and is a norm") {
  CHECK(trace_norm(diag({0.3, -0.3})) == doctest::Approx(0.6));
  CHECK(trace_norm(CMat::Zero(4, 4)) == doctest::Approx(0.0));

  SplitStream g(99);
  for (int t = 0; t < 200; ++t) {
    CMat h = random_hermitian(3, g);
    auto eig = herm_eig(h);  // independent eigenvalue route
    double via_eigs = eig.values.cwiseAbs().sum();
    CHECK(trace_norm(h) == doctest::Approx(via_eigs).epsilon(0).scale(1).epsilon(1e-10));
  }
  for (int t = 0; t < 200; ++t) {
    int d = 2 + t % 4;
    CMat a = random_hermitian(d, g), b = random_hermitian(d, g);
    double lam = 2.0 * g.next_double() - 1.0;
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10);
    CHECK(trace_norm(lam * a) == doctest::Approx(std::abs(lam) * trace_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("kron multiplies traces") {
  SplitStream g(5);
  for (int t = 0; t < 100; ++t) {
    CMat a = random_hermitian(2 + t % 3, g);
    CMat b = random_hermitian(2 + (t / 2) % 3, g);
    cxd lhs = kron(a, b).trace();
    cxd rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("partial_trace basics") {
  SystemLayout lay({Factor{"A", 2}, Factor{"B", 3}});
  SplitStream g(11);
  CMat a = random_hermitian(2, g);
  CMat b = random_hermitian(3, g);
  CMat prod = kron(a, b);

  CMat ta = partial_trace(prod, lay, {"B"});
  CHECK((ta - b.trace() * a).norm() < 1e-12 * (1 + a.norm()));

  CMat tboth = partial_trace(prod, lay, {"A", "B"});
  CHECK(tboth.rows() == 1);
  CHECK(std::abs(tboth(0, 0) - prod.trace()) < 1e-12);

  // maximally entangled qubit pair reduces to I/2
  SystemLayout qq({Factor{"A", 2}, Factor{"B", 2}});
  CVec psi = CVec::Zero(4);
  psi(0) = 1 / std::sqrt(2.0);
  psi(3) = 1 / std::sqrt(2.0);
  CMat red = partial_trace(psi * psi.adjoint(), qq, {"B"});
  CHECK((red - 0.5 * CMat::Identity(2, 2)).norm() < 1e-12);

  CHECK_THROWS_AS(partial_trace(prod, lay, {"C"}), ContractError);
}

TEST_CASE("partial_trace is linear and trace preserving") {
  SystemLayout lay({Factor{"A", 2}, Factor{"B", 2}, Factor{"C", 3}});
  SplitStream g(13);
  for (int t = 0; t < 50; ++t) {
    CMat m1 = random_hermitian(12, g);
    CMat m2 = random_hermitian(12, g);
    double w = g.next_double();
    CMat lhs = partial_trace(CMat(w * m1 + m2), lay, {"B"});
    CMat rhs = w * partial_trace(m1, lay, {"B"}) + partial_trace(m2, lay, {"B"});
    CHECK((lhs - rhs).norm() < 1e-11 * (1 + lhs.norm()));
    CHECK(std::abs(partial_trace(m1, lay, {"A", "C"}).trace() - m1.trace()) < 1e-12 * 13);
  }
}

TEST_CASE("permute_factors is an isomorphism on operators") {
  SystemLayout lay({Factor{"A", 2}, Factor{"B", 3}, Factor{"C", 2}});
  SplitStream g(17);
  CMat a = random_hermitian(2, g), b = random_hermitian(3, g), c = random_hermitian(2, g);
  CMat m = kron(kron(a, b), c);
  CMat p = permute_factors(m, lay, {"C", "A", "B"});
  CHECK((p - kron(kron(c, a), b)).norm() < 1e-12 * (1 + m.norm()));
  // round trip
  SystemLayout play({Factor{"C", 2}, Factor{"A", 2}, Factor{"B", 3}});
  CHECK((permute_factors(p, play, {"A", "B", "C"}) - m).norm() < 1e-12 * (1 + m.norm()));
}

TEST_CASE("hermitian_basis is orthonormal and complete") {
  for (int d : {2, 3, 4}) {
    auto basis = hermitian_basis(d);
    REQUIRE(static_cast<int>(basis.size()) == d * d);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(is_hermitian(basis[i]));
      for (size_t j = i; j < basis.size(); ++j) {
        double ip = (basis[i].adjoint() * basis[j]).trace().real();
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}
