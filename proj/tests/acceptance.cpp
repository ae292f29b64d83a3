// Acceptance battery: one pass/fail line per criterion, exit 0 only when all
// pass. Criterion 11 reruns every suite configuration and demands
// byte-identical reports (timing is never serialized).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qse/entropy.hpp"
#include "qse/linalg.hpp"
#include "qse/random.hpp"
#include "qse/statefile.hpp"
#include "qse/verify.hpp"

using namespace qse;
using verify::SuiteConfig;
using verify::VerificationReport;

namespace {

constexpr uint64_t kMasterSeed = 42;

struct Line {
  int id;
  bool pass;
  std::string text;
};

std::vector<Line> g_lines;
std::vector<std::pair<SuiteConfig, std::string>> g_report_bodies;  // for criterion 11

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VerificationReport run_and_stash(const SuiteConfig& cfg) {
  VerificationReport rep = verify::run_suite(cfg);
  g_report_bodies.emplace_back(cfg, rep.to_text() + rep.to_json_text());
  return rep;
}

SuiteConfig config(const std::string& name, int trials, std::vector<int> dims = {},
                   std::vector<double> eps = {}) {
  SuiteConfig c;
  c.name = name;
  c.seed = kMasterSeed;
  c.trials = trials;
  c.dims = std::move(dims);
  c.epsilons = std::move(eps);
  return c;
}

void report(int id, bool pass, const std::string& detail, double secs, double limit) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%2d] %s  %s  time=%.1fs (limit %.0fs)", id,
                pass ? "PASS" : "FAIL", detail.c_str(), secs, limit);
  std::puts(buf);
  std::fflush(stdout);
  g_lines.push_back(Line{id, pass, buf});
}

bool suite_clean(const VerificationReport& r) { return r.failures == 0 && r.sdp_failures == 0; }

std::string summary(const VerificationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s trials=%d failures=%d sdp_failures=%d worst=%.2e",
                r.suite.c_str(), r.trials_run, r.failures, r.sdp_failures, r.worst_slack);
  return buf;
}

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r = run_and_stash(config("metric-axioms", 2000, {2, 3, 4, 6}));
  double secs = seconds_since(t0);
  report(1, suite_clean(r) && secs <= 30.0,
         "metric axioms, 500 triples per dim in {2,3,4,6}: " + summary(r), secs, 30);
}

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r = run_and_stash(config("metric-bounds", 1000, {2, 3, 4, 6}));
  double secs = seconds_since(t0);
  report(2, suite_clean(r) && secs <= 10.0, "sandwich bounds on 1000 pairs: " + summary(r),
         secs, 10);
}

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r = run_and_stash(config("monotonicity", 200));
  report(3, suite_clean(r), "monotonicity under 200 trace non-increasing channels: " + summary(r),
         seconds_since(t0), 60);
}

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r = run_and_stash(config("uhlmann", 200, {2, 3, 4}));
  report(4, suite_clean(r), "purification matching on 200 pairs: " + summary(r),
         seconds_since(t0), 60);
}

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport a = run_and_stash(config("ball-properties", 200));
  VerificationReport b = run_and_stash(config("epsballineq", 200));
  report(5, suite_clean(a) && suite_clean(b),
         "ball properties iii-vii: " + summary(a) + " | " + summary(b), seconds_since(t0), 120);
}

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  SystemLayout ab({Factor{"A", 2}, Factor{"B", 2}});
  CVec bell = CVec::Zero(4);
  bell(0) = 1 / std::sqrt(2.0);
  bell(3) = 1 / std::sqrt(2.0);
  State max_ent(ab, bell * bell.adjoint());
  CVec e0 = CVec::Zero(4);
  e0(0) = 1.0;
  State product(ab, e0 * e0.adjoint());
  SplitStream g(kMasterSeed);
  State tau_b = random_state(SystemLayout({Factor{"B", 2}}), 2, g);
  State unif(ab, kron(0.5 * CMat::Identity(2, 2), tau_b.matrix()));
  State fixture = load_state_file(std::string(QSE_FIXTURE_DIR) + "/max_entangled_2qubit.json");

  struct Case {
    const char* name;
    double got, want;
  };
  std::vector<Case> cases = {
      {"hmin(I/dA x tau)", hmin(EntropyQuery{unif, {"A"}, {"B"}, 0}).value, 1.0},
      {"hmin(pure product)", hmin(EntropyQuery{product, {"A"}, {"B"}, 0}).value, 0.0},
      {"hmin(max entangled)", hmin(EntropyQuery{max_ent, {"A"}, {"B"}, 0}).value, -1.0},
      {"hmax(pure product)", hmax(EntropyQuery{product, {"A"}, {"B"}, 0}).value, 0.0},
      {"hmax(max entangled)", hmax(EntropyQuery{max_ent, {"A"}, {"B"}, 0}).value, -1.0},
      {"hmin(fixture file)", hmin(EntropyQuery{fixture, {"A"}, {"B"}, 0}).value, -1.0},
  };
  bool pass = true;
  double worst = 0;
  for (const auto& c : cases) {
    double err = std::abs(c.got - c.want);
    worst = std::max(worst, err);
    if (err > 1e-6) pass = false;
  }
  double secs = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "analytic entropy fixtures, worst error %.2e", worst);
  report(6, pass && secs <= 5.0, buf, secs, 5);
}

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport a = run_and_stash(config("duality", 100, {2, 2, 2}, {0.0, 0.05, 0.1}));
  VerificationReport b = run_and_stash(config("duality", 20, {2, 3, 4}, {0.0, 0.05, 0.1}));
  VerificationReport c = run_and_stash(config("maxepsball-oracle", 20, {2, 2, 2}, {0.1}));
  double secs = seconds_since(t0);
  report(7, suite_clean(a) && suite_clean(b) && suite_clean(c) && secs <= 300.0,
         "duality: " + summary(a) + " | " + summary(b) + " | " + summary(c), secs, 300);
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport a = run_and_stash(config("data-proc-1", 100, {}, {0.0, 0.1}));
  VerificationReport b = run_and_stash(config("data-proc-2", 100, {}, {0.0, 0.1}));
  double secs = seconds_since(t0);
  report(8, suite_clean(a) && suite_clean(b) && secs <= 180.0,
         "data processing: " + summary(a) + " | " + summary(b), secs, 180);
}

void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport a = run_and_stash(config("phi-properties", 100));
  VerificationReport b = run_and_stash(config("bounds", 100, {2, 3}));
  VerificationReport b2 = run_and_stash(config("bounds", 100, {3, 2}));
  VerificationReport c = run_and_stash(config("concavity", 100));
  VerificationReport d = run_and_stash(config("continuity", 200));
  double secs = seconds_since(t0);
  bool pass = suite_clean(a) && suite_clean(b) && suite_clean(b2) && suite_clean(c) &&
              suite_clean(d) && secs <= 180.0;
  report(9, pass,
         "appendix battery: " + summary(a) + " | " + summary(b) + " | " + summary(b2) + " | " +
             summary(c) + " | " + summary(d),
         secs, 180);
}

void criterion_10(long solves_before) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r = run_and_stash(config("sdp-fixtures", 0));
  long audited = entropy_solves_certified() - solves_before;
  bool pass = suite_clean(r) && audited > 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sdp engine: %s; %ld entropy solves audited by the independent checker",
                summary(r).c_str(), audited);
  report(10, pass, buf, seconds_since(t0), 60);
}

void criterion_11() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  int mismatches = 0;
  for (const auto& [cfg, body] : g_report_bodies) {
    VerificationReport rerun = verify::run_suite(cfg);
    if (rerun.to_text() + rerun.to_json_text() != body) {
      pass = false;
      ++mismatches;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "reproducibility: %zu suite configurations rerun, %d report mismatches",
                g_report_bodies.size(), mismatches);
  report(11, pass, buf, seconds_since(t0), 600);
}

}  // namespace

int main() {
  std::puts("acceptance battery (master seed 42)");
  long solves_at_start = entropy_solves_certified();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(solves_at_start);
  criterion_11();

  int passed = 0;
  for (const auto& l : g_lines)
    if (l.pass) ++passed;
  std::printf("ACCEPTANCE %d/%zu criteria passed\n", passed, g_lines.size());
  return passed == static_cast<int>(g_lines.size()) ? 0 : 1;
}
