#include <cmath>

#include "doctest.h"
#include "qse/channel.hpp"
#include "qse/random.hpp"
#include "qse/state.hpp"

using namespace qse;

namespace {

SystemLayout qubit() { return SystemLayout({Factor{"A", 2}}); }

State diag_state(const SystemLayout& lay, std::initializer_list<double> vals) {
  CMat m = CMat::Zero(lay.total_dim(), lay.total_dim());
  long i = 0;
  for (double v : vals) m(i, i) = v, ++i;
  return State(lay, m);
}

}  // namespace

TEST_CASE("State construction clamps and rejects") {
  CMat m = CMat::Identity(2, 2) * 0.5;
  m(0, 0) = 0.5 + 1e-12;
  State ok(qubit(), m);
  CHECK(ok.trace() == doctest::Approx(1.0).epsilon(1e-9));

  CMat neg = CMat::Identity(2, 2) * 0.5;
  neg(1, 1) = -1e-11;  // inside the clamp window
  State clamped(qubit(), neg);
  CHECK(clamped.matrix()(1, 1).real() >= 0.0);

  neg(1, 1) = -1e-6;
  CHECK_THROWS_AS(State(qubit(), neg), ContractError);

  CMat big = CMat::Identity(2, 2);  // trace 2
  CHECK_THROWS_AS(State(qubit(), big), ContractError);
  CHECK_THROWS_AS(State(qubit(), CMat::Zero(2, 2)), ContractError);
}

TEST_CASE("purify round-trips, including sub-normalized states") {
  SplitStream g(31);
  SystemLayout lay({Factor{"S", 3}});
  for (int t = 0; t < 25; ++t) {
    State rho = random_state(lay, 1 + t % 3, g, 0.5);
    PureState phi = purify(rho, "P");
    CHECK(phi.norm_squared() == doctest::Approx(rho.trace()).epsilon(1e-9));
    State back = partial_trace(phi.to_state(), {"P"});
    CHECK((back.matrix() - rho.matrix()).norm() <= 1e-9 * (1 + rho.matrix().norm()));
  }

  // pure input: purifier is one-dimensional by default
  PureState psi = random_pure(lay, g);
  PureState phi = purify(psi.to_state(), "P");
  CHECK(phi.layout()[phi.layout().index_of("P")].dim == 1);

  // maximally mixed qubit purifies to a maximally entangled pair
  State mixed = diag_state(qubit(), {0.5, 0.5});
  PureState bell = purify(mixed, "P");
  State marg = partial_trace(bell.to_state(), {"P"});
  CHECK((marg.matrix() - 0.5 * CMat::Identity(2, 2)).norm() < 1e-10);

  State sub = diag_state(qubit(), {0.5, 0.25});
  PureState sp = purify(sub, "P");
  CHECK(sp.norm_squared() == doctest::Approx(0.75).epsilon(1e-10));
  CHECK_THROWS_AS(purify(mixed, "P", 1), ContractError);
}

TEST_CASE("apply_channel basics") {
  SystemLayout ab({Factor{"A", 2}, Factor{"B", 2}});
  SplitStream g(37);
  State rho = random_state(ab, 4, g);

  State same = apply_channel(identity_channel(SystemLayout({Factor{"B", 2}})), rho, {"B"});
  CHECK((same.matrix() - rho.matrix()).norm() < 1e-12);

  State depol = apply_channel(completely_depolarizing(SystemLayout({Factor{"B", 2}})), rho, {"B"});
  State expect(ab, kron(partial_trace(rho.matrix(), ab, {"B"}), 0.5 * CMat::Identity(2, 2)));
  CHECK((depol.matrix() - expect.matrix()).norm() < 1e-10);

  // pinching a qubit onto |0><0| keeps the diagonal in that basis
  CMat proj = CMat::Zero(2, 2);
  proj(0, 0) = 1;
  State pinched = apply_channel(pinching(proj, qubit()), random_state(qubit(), 2, g), {"A"});
  CHECK(std::abs(pinched.matrix()(0, 1)) < 1e-12);
}

TEST_CASE("projective measurement map") {
  SplitStream g(41);
  State dstate = diag_state(qubit(), {0.7, 0.3});
  Channel comp = projective_measurement_map(CMat::Identity(2, 2), qubit(), "X");
  State out = apply_channel(comp, dstate, {"A"});
  CHECK(out.layout().has("X"));
  CHECK((out.matrix() - dstate.matrix()).norm() < 1e-12);

  CMat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  State plus_state(qubit(), plus);
  State meas = apply_channel(comp, plus_state, {"A"});
  CHECK((meas.matrix() - 0.5 * CMat::Identity(2, 2)).norm() < 1e-12);

  CMat had(2, 2);
  had << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  State meas2 = apply_channel(projective_measurement_map(had, qubit(), "X"), plus_state, {"A"});
  CMat e00 = CMat::Zero(2, 2);
  e00(0, 0) = 1;
  CHECK((meas2.matrix() - e00).norm() < 1e-12);

  // M(I_A) = I_X, exactly up to 1e-12
  CMat basis = random_unitary(3, g);
  SystemLayout l3({Factor{"A", 3}});
  Channel m3 = projective_measurement_map(basis, l3, "X");
  CMat total = CMat::Zero(3, 3);
  for (const auto& k : m3.kraus()) total += k * CMat::Identity(3, 3) * k.adjoint();
  CHECK((total - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("apply_channel on interleaved factors") {
  SystemLayout abc({Factor{"A", 2}, Factor{"B", 3}, Factor{"C", 2}});
  SplitStream g(43);
  State rho = random_state(abc, 6, g);
  // act on the middle factor with a TP channel into a 2-dim output
  Channel e = random_channel(SystemLayout({Factor{"B", 3}}), SystemLayout({Factor{"D", 2}}), 2, g);
  State out = apply_channel(e, rho, {"B"});
  CHECK(out.layout().str() == "A:2*D:2*C:2");
  CHECK(out.trace() == doctest::Approx(rho.trace()).epsilon(1e-10));
}

TEST_CASE("embed keeps the top-left block and the trace") {
  SystemLayout ab({Factor{"A", 2}, Factor{"B", 2}});
  SystemLayout big({Factor{"A", 3}, Factor{"B", 2}});
  SplitStream g(47);
  State rho = random_state(ab, 3, g, 0.7);
  State emb = embed(rho, big);
  CHECK(emb.trace() == doctest::Approx(rho.trace()).epsilon(1e-12));
  // matrix elements survive at remapped positions
  CHECK(std::abs(emb.matrix()(0, 1) - rho.matrix()(0, 1)) < 1e-14);
  CHECK_THROWS_AS(embed(emb, ab), ContractError);
}

TEST_CASE("random generators are deterministic in the seed") {
  SystemLayout lay({Factor{"A", 2}, Factor{"B", 2}});
  State a = random_state(lay, 2, 123);
  State b = random_state(lay, 2, 123);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
  State c = random_state(lay, 2, 124);
  CHECK((a.matrix() - c.matrix()).norm() > 1e-3);

  PureState p1 = random_pure(lay, 9);
  PureState p2 = random_pure(lay, 9);
  CHECK((p1.amplitudes() - p2.amplitudes()).norm() == 0.0);
}

TEST_CASE("random channels satisfy their Kraus invariants") {
  SplitStream g(53);
  SystemLayout in({Factor{"B", 3}});
  SystemLayout out({Factor{"D", 2}});
  for (int t = 0; t < 20; ++t) {
    Channel tp = random_channel(in, out, 2, g, true);
    CMat total = CMat::Zero(3, 3);
    for (const auto& k : tp.kraus()) total += k.adjoint() * k;
    CHECK((total - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);

    Channel tni = random_channel(in, out, 2, g, false);
    CMat t2 = CMat::Zero(3, 3);
    for (const auto& k : tni.kraus()) t2 += k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<CMat> es(t2, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
  }
}

TEST_CASE("random pure state marginal purity stays in range") {
  SystemLayout lay({Factor{"A", 2}, Factor{"B", 2}});
  SplitStream g(59);
  for (int t = 0; t < 50; ++t) {
    PureState psi = random_pure(lay, g);
    CMat red = partial_trace(psi.to_state().matrix(), lay, {"B"});
    double purity = (red * red).trace().real();
    CHECK(purity >= 0.5 - 1e-12);
    CHECK(purity <= 1.0 + 1e-12);
  }
}

TEST_CASE("random isometries and unitaries") {
  SplitStream g(61);
  Isometry v = random_isometry(3, 5, g);
  CHECK((v.matrix().adjoint() * v.matrix() - CMat::Identity(3, 3)).norm() <= 1e-10);
  CHECK_THROWS_AS(random_isometry(5, 3, g), ContractError);
  CMat u = random_unitary(4, g);
  CHECK((u.adjoint() * u - CMat::Identity(4, 4)).norm() <= 1e-10);
}
