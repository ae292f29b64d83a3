#include <cstdlib>

#include "doctest.h"
#include "qse/metrics.hpp"
#include "qse/random.hpp"
#include "qse/verify.hpp"

using namespace qse;
using namespace qse::verify;

namespace {

SuiteConfig small(const std::string& name, int trials, uint64_t seed = 42) {
  SuiteConfig c;
  c.name = name;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("unknown suite is rejected") {
  CHECK_THROWS_AS(run_suite(small("no-such-suite", 5)), ContractError);
  CHECK(is_suite("metric-axioms"));
  CHECK(!is_suite("metricaxioms"));
}

TEST_CASE("random ball members always land in the ball") {
  SplitStream g(401);
  SystemLayout lay({Factor{"S", 3}});
  for (int t = 0; t < 100; ++t) {
    double eps = 0.02 + 0.2 * g.next_double();
    State rho = random_state(lay, 1 + t % 3, g, 0.7);
    State member = random_ball_member(rho, eps, g);
    CHECK(in_ball(member, rho, eps).inside);
  }
  // normalized members of a normalized center
  State rho = random_state(lay, 3, g);
  for (int t = 0; t < 20; ++t) {
    State member = random_ball_member(rho, 0.15, g, true);
    CHECK(member.trace() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(in_ball(member, rho, 0.15).inside);
  }
}

TEST_CASE("pure linear-algebra suites pass at small trial counts") {
  for (const char* name : {"metric-axioms", "metric-bounds", "monotonicity", "uhlmann",
                           "ball-properties", "epsballineq"}) {
    VerificationReport rep = run_suite(small(name, 40));
    INFO(name);
    CHECK(rep.failures == 0);
    CHECK(rep.sdp_failures == 0);
    CHECK(rep.trials_run == 40);
    CHECK(rep.worst_slack <= 1.0);
  }
}

TEST_CASE("SDP-backed suites pass at small trial counts") {
  {
    VerificationReport rep = run_suite(small("phi-properties", 10));
    CHECK(rep.failures == 0);
    CHECK(rep.sdp_failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("bounds", 8));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("continuity", 6));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("concavity", 8));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("sdp-fixtures", 0));
    CHECK(rep.trials_run == 20);
    CHECK(rep.failures == 0);
    CHECK(rep.sdp_failures == 0);
  }
}

TEST_CASE("smooth suites pass at small trial counts") {
  {
    VerificationReport rep = run_suite(small("duality", 3));
    CHECK(rep.failures == 0);
    CHECK(rep.sdp_failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("data-proc-1", 4));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("data-proc-2", 3));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("smooth-continuity", 3));
    CHECK(rep.failures == 0);
  }
  {
    VerificationReport rep = run_suite(small("iso-invariance", 2));
    CHECK(rep.failures == 0);
  }
}

TEST_CASE("nonconvexity witness search reports findings or inconclusive") {
  VerificationReport rep = run_suite(small("hmin-nonconvexity", 800));
  CHECK(rep.failures == 0);  // informational checks never fail
  bool has_note = false;
  for (const auto& n : rep.notes)
    if (n.find("violated") != std::string::npos || n.find("inconclusive") != std::string::npos)
      has_note = true;
  CHECK(has_note);
}

TEST_CASE("reports are byte-stable across reruns and thread counts") {
  SuiteConfig c = small("metric-bounds", 60, 7);
  VerificationReport r1 = run_suite(c);
  VerificationReport r2 = run_suite(c);
  CHECK(r1.to_text() == r2.to_text());
  CHECK(r1.to_json_text() == r2.to_json_text());

  SuiteConfig one = c;
  one.threads = 1;
  SuiteConfig four = c;
  four.threads = 4;
  CHECK(run_suite(one).to_text() == run_suite(four).to_text());

  SuiteConfig other = c;
  other.seed = 8;
  CHECK(run_suite(other).to_text() != r1.to_text());
}

TEST_CASE("report serialization carries the declared structure") {
  SuiteConfig c = small("metric-bounds", 10, 3);
  c.per_trial_margins = true;
  VerificationReport rep = run_suite(c);
  std::string text = rep.to_text();
  CHECK(text.find("suite metric-bounds") == 0);
  CHECK(text.find("check lower tolerance") != std::string::npos);
  CHECK(text.find("worst_slack_normalized") != std::string::npos);
  CHECK(text.find("trial 0 ") != std::string::npos);
  CHECK(text.find("wall") == std::string::npos);  // timing never serialized
  std::string json = rep.to_json_text();
  CHECK(json.find("\"suite\": \"metric-bounds\"") != std::string::npos);
  CHECK(json.find("per_trial_margins") != std::string::npos);
  CHECK(json.find("wall") == std::string::npos);
}

TEST_CASE("default battery covers every suite") {
  auto battery = default_battery(42);
  for (const auto& name : suite_names()) {
    bool found = false;
    for (const auto& c : battery) found = found || c.name == name;
    INFO(name);
    CHECK(found);
  }
  CHECK(battery.size() >= suite_names().size());
}
