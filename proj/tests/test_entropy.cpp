#include <cmath>

#include "doctest.h"
#include "qse/channel.hpp"
#include "qse/entropy.hpp"
#include "qse/metrics.hpp"
#include "qse/random.hpp"
#include "qse/verify.hpp"

using namespace qse;

namespace {

SystemLayout qubits2() { return SystemLayout({Factor{"A", 2}, Factor{"B", 2}}); }

State max_entangled() {
  CVec psi = CVec::Zero(4);
  psi(0) = 1 / std::sqrt(2.0);
  psi(3) = 1 / std::sqrt(2.0);
  return State(qubits2(), psi * psi.adjoint());
}

State pure_product() {
  CVec v = CVec::Zero(4);
  v(0) = 1.0;
  return State(qubits2(), v * v.adjoint());
}

State uniform_times(const CMat& tau_b) {
  return State(qubits2(), kron(0.5 * CMat::Identity(2, 2), tau_b));
}

}  // namespace

TEST_CASE("phi analytic values") {
  CHECK(phi(pure_product().matrix(), 2, 2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(phi(max_entangled().matrix(), 2, 2) == doctest::Approx(2.0).epsilon(1e-8));

  SplitStream g(201);
  State rho = random_state(qubits2(), 3, g, 0.6);
  double lam = 0.37;
  CHECK(std::abs(phi(CMat(lam * rho.matrix()), 2, 2) - lam * phi(rho.matrix(), 2, 2)) <= 1e-9);
}

TEST_CASE("phi extends to Hermitian operators") {
  // A trivial (d_A = 1): the constraint pins X = I_B, so the value is tr(rho).
  CMat neg = CMat::Zero(2, 2);
  neg(0, 0) = -1.0;
  CHECK(phi(neg, 1, 2) == doctest::Approx(-1.0).epsilon(1e-8));

  SplitStream g(202);
  CMat herm = random_hermitian(4, g);
  double v = phi(herm, 2, 2);
  CHECK(v >= herm.trace().real() / 2.0 - 1e-7);
  CHECK(v <= 2.0 * positive_part_trace(herm) + 1e-7);
}

TEST_CASE("hmin analytic fixtures") {
  SplitStream g(203);
  CMat tau = random_state(SystemLayout({Factor{"B", 2}}), 2, g).matrix();
  EntropyResult unif = hmin(EntropyQuery{uniform_times(tau), {"A"}, {"B"}, 0.0});
  CHECK(unif.value == doctest::Approx(1.0).epsilon(1e-7));

  CHECK(hmin(EntropyQuery{max_entangled(), {"A"}, {"B"}, 0.0}).value ==
        doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(hmin(EntropyQuery{pure_product(), {"A"}, {"B"}, 0.0}).value ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-7));

  // witness: I (x) sigma dominates rho at the claimed rate
  EntropyResult r = hmin(EntropyQuery{max_entangled(), {"A"}, {"B"}, 0.0});
  REQUIRE(r.optimizer_sigma.has_value());
  CHECK(r.optimizer_sigma->trace() == doctest::Approx(1.0).epsilon(1e-9));
  CMat dom = std::exp2(-r.value) * kron(CMat::Identity(2, 2), r.optimizer_sigma->matrix()) -
             max_entangled().matrix();
  Eigen::SelfAdjointEigenSolver<CMat> es(dom, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-7);
}

TEST_CASE("hmax analytic fixtures") {
  CHECK(hmax(EntropyQuery{pure_product(), {"A"}, {"B"}, 0.0}).value ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(hmax(EntropyQuery{max_entangled(), {"A"}, {"B"}, 0.0}).value ==
        doctest::Approx(-1.0).epsilon(1e-6));

  SplitStream g(204);
  CMat tau = random_state(SystemLayout({Factor{"B", 2}}), 2, g).matrix();
  State prod = uniform_times(tau);
  double direct = hmax(EntropyQuery{prod, {"A"}, {"B"}, 0.0}).value;
  CHECK(direct == doctest::Approx(1.0).epsilon(1e-6));
  // duality route at eps = 0 agrees with the direct semidefinite route
  double dual = smooth_hmax(EntropyQuery{prod, {"A"}, {"B"}, 0.0}).value;
  CHECK(std::abs(direct - dual) <= 1e-6);

  EntropyResult r = hmax(EntropyQuery{max_entangled(), {"A"}, {"B"}, 0.0});
  REQUIRE(r.optimizer_sigma.has_value());
  double f = fidelity_operators(max_entangled().matrix(),
                                kron(CMat::Identity(2, 2), r.optimizer_sigma->matrix()));
  CHECK(f * f == doctest::Approx(std::exp2(r.value)).epsilon(1e-6));
}

TEST_CASE("entropy query preprocessing") {
  SplitStream g(205);
  SystemLayout abc({Factor{"A", 2}, Factor{"B", 2}, Factor{"C", 2}});
  State rho = random_state(abc, 4, g);
  // tracing out C first or letting the query do it must agree
  double direct = hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.0}).value;
  State reduced = partial_trace(rho, {"C"});
  double reduced_v = hmin(EntropyQuery{reduced, {"A"}, {"B"}, 0.0}).value;
  CHECK(direct == doctest::Approx(reduced_v).epsilon(1e-9));

  // factor order in the query, not the layout, defines the split
  double swapped = hmin(EntropyQuery{rho, {"B"}, {"A"}, 0.0}).value;
  CHECK(std::isfinite(swapped));

  CHECK_THROWS_AS(hmin(EntropyQuery{rho, {}, {"B"}, 0.0}), ContractError);
  CHECK_THROWS_AS(hmin(EntropyQuery{rho, {"A"}, {"A"}, 0.0}), ContractError);
  CHECK_THROWS_AS(hmin(EntropyQuery{rho, {"Z"}, {}, 0.0}), ContractError);
  CHECK_THROWS_AS(hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.1}), ContractError);
}

TEST_CASE("unconditional entropies (empty conditioning)") {
  SplitStream g(206);
  State rho = random_state(SystemLayout({Factor{"A", 2}}), 2, g);
  auto eig = herm_eig(rho.matrix());
  CHECK(hmin(EntropyQuery{rho, {"A"}, {}, 0.0}).value ==
        doctest::Approx(-std::log2(eig.values(0))).epsilon(1e-7));
}

TEST_CASE("smooth_hmin preconditions and reduction at eps = 0") {
  SplitStream g(207);
  State rho = random_state(qubits2(), 4, g);
  EntropyResult plain = hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.0});
  EntropyResult smooth0 = smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.0});
  CHECK(std::abs(plain.value - smooth0.value) <= 1e-9);
  REQUIRE(smooth0.smoothed_state.has_value());

  State sub = random_state(qubits2(), 4, g, 0.5);
  if (sub.trace() < 1.0 - 1e-6) {
    CHECK_THROWS_AS(smooth_hmin(EntropyQuery{sub, {"A"}, {"B"}, 0.05}), ContractError);
  }
  CHECK_THROWS_AS(smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, 1.0}), ContractError);
  CHECK_THROWS_AS(smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, -0.1}), ContractError);
}

TEST_CASE("smooth_hmin grows with eps and stays in the ball") {
  SplitStream g(208);
  State rho = random_state(qubits2(), 4, g);
  double v0 = smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.0}).value;
  EntropyResult r1 = smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.05});
  EntropyResult r2 = smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.1});
  CHECK(r1.value >= v0 - 1e-7);
  CHECK(r2.value >= r1.value - 1e-7);
  REQUIRE(r2.smoothed_state.has_value());
  CHECK(in_ball(*r2.smoothed_state, rho, 0.1).slack >= -1e-6);
}

TEST_CASE("smooth_hmin of the maximally entangled state matches the search oracle") {
  State psi = max_entangled();
  double v = smooth_hmin(EntropyQuery{psi, {"A"}, {"B"}, 0.1}).value;
  CHECK(v >= -1.0 - 1e-7);
  double oracle = verify::smooth_hmin_ball_oracle(psi, {"A"}, {"B"}, 0.1, 4242, 500);
  CHECK(v == doctest::Approx(oracle).epsilon(0).scale(1).epsilon(2e-3));
  CHECK(std::abs(v - oracle) <= 1e-3);
}

TEST_CASE("smooth_hmax of a pure product state stays in the expected window") {
  State prod = pure_product();
  for (double eps : {0.05, 0.1, 0.2}) {
    double v = smooth_hmax(EntropyQuery{prod, {"A"}, {"B"}, eps}).value;
    CHECK(v <= 1e-6);
    CHECK(v >= std::log2(1.0 - eps * eps) - 1e-6);
  }
}

TEST_CASE("duality on a random tripartite pure state") {
  SystemLayout abc({Factor{"A", 2}, Factor{"B", 2}, Factor{"C", 2}});
  State psi = random_pure(abc, 777).to_state();
  for (double eps : {0.0, 0.05}) {
    double v1 = smooth_hmin(EntropyQuery{psi, {"A"}, {"B"}, eps}).value;
    double v2 = smooth_hmax(EntropyQuery{psi, {"A"}, {"C"}, eps}).value;
    CHECK(std::abs(v1 + v2) <= 1e-5);
  }
}

TEST_CASE("smooth_hmax matches the ball-minimization oracle at 2x2") {
  SystemLayout abc({Factor{"A", 2}, Factor{"B", 2}, Factor{"C", 2}});
  State psi = random_pure(abc, 31337).to_state();
  double v = smooth_hmax(EntropyQuery{psi, {"A"}, {"B"}, 0.1}).value;
  double oracle = verify::smooth_hmax_ball_oracle(psi, {"A"}, {"B"}, 0.1, 555, 500);
  CHECK(std::abs(v - oracle) <= 1e-3);
}

TEST_CASE("isometry invariance of the smooth entropies") {
  SplitStream g(209);
  State rho = random_state(qubits2(), 3, g);
  Isometry u(random_isometry(2, 3, g).matrix(), SystemLayout({Factor{"A", 2}}),
             SystemLayout({Factor{"C", 3}}));
  State tau = apply_isometry(u, rho, {"A"});
  for (double eps : {0.0, 0.1}) {
    double before = smooth_hmin(EntropyQuery{rho, {"A"}, {"B"}, eps}).value;
    double after = smooth_hmin(EntropyQuery{tau, {"C"}, {"B"}, eps}).value;
    CHECK(std::abs(before - after) <= 1e-6);
  }
}

TEST_CASE("bounds check margins") {
  SplitStream g(210);
  SystemLayout ab({Factor{"A", 2}, Factor{"B", 3}});
  for (int t = 0; t < 5; ++t) {
    State rho = random_state(ab, 1 + t, g, 0.5);
    auto margins = hmin_hmax_bounds_check(rho, {"A"}, {"B"});
    REQUIRE(margins.size() == 6);
    for (const auto& m : margins) CHECK(m.margin >= -1e-7);
  }
}

TEST_CASE("ordering holds on sub-normalized states") {
  SplitStream g(211);
  for (int t = 0; t < 10; ++t) {
    State rho = random_state(qubits2(), 1 + t % 4, g, 0.4);
    double lt = std::log2(rho.trace());
    double mn = hmin(EntropyQuery{rho, {"A"}, {"B"}, 0.0}).value;
    double mx = hmax(EntropyQuery{rho, {"A"}, {"B"}, 0.0}).value;
    CHECK(mn + lt <= mx - lt + 1e-6);
  }
}

TEST_CASE("continuity bound and its tightness family") {
  SplitStream g(212);
  State rho = random_state(qubits2(), 4, g, 0.8);
  ContinuityBound same = continuity_bound(rho, rho, {"A"}, {"B"});
  CHECK(same.lhs <= 1e-7);
  CHECK(same.rhs <= 1e-9);

  State pert = random_state(qubits2(), 4, g);
  State tau(qubits2(), 0.99 * rho.matrix() + 0.01 * rho.trace() * pert.matrix());
  ContinuityBound cb = continuity_bound(rho, tau, {"A"}, {"B"});
  CHECK(cb.lhs <= cb.rhs + 1e-7);

  // rho = I/2 (x) rho_B' on B = A' (+) B', tau = rho + delta psi
  SystemLayout ab({Factor{"A", 2}, Factor{"B", 4}});
  const double delta = 1e-3;
  CMat rb = CMat::Zero(4, 4);
  rb(2, 2) = 0.55;
  rb(3, 3) = 0.35;
  CMat rho_m = kron(0.5 * CMat::Identity(2, 2), rb);
  CVec psi = CVec::Zero(8);
  psi(0) = 1 / std::sqrt(2.0);  // |0>_A |0>_B
  psi(5) = 1 / std::sqrt(2.0);  // |1>_A |1>_B
  CMat tau_m = rho_m + delta * (psi * psi.adjoint());
  ContinuityBound tight = continuity_bound(State(ab, rho_m), State(ab, tau_m), {"A"}, {"B"});
  CHECK(tight.lhs / tight.rhs >= 0.9);
  CHECK(tight.lhs <= tight.rhs + 1e-7);
}

TEST_CASE("hmax concavity on a random mixture") {
  SplitStream g(213);
  State r1 = random_state(qubits2(), 2, g, 0.6);
  State r2 = random_state(qubits2(), 3, g, 0.6);
  State mixstate = mix(r1, r2, 0.3);
  double lhs = hmax(EntropyQuery{mixstate, {"A"}, {"B"}, 0.0}).value;
  double rhs = 0.3 * hmax(EntropyQuery{r1, {"A"}, {"B"}, 0.0}).value +
               0.7 * hmax(EntropyQuery{r2, {"A"}, {"B"}, 0.0}).value;
  CHECK(lhs >= rhs - 1e-6);
}

TEST_CASE("entropy solves are audited") {
  long before = entropy_solves_certified();
  (void)hmin(EntropyQuery{max_entangled(), {"A"}, {"B"}, 0.0});
  CHECK(entropy_solves_certified() > before);
}
