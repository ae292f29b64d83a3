// qse: compute smooth conditional min/max entropies and distance measures of
// explicit quantum states, and run the randomized verification battery.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qse/entropy.hpp"
#include "qse/metrics.hpp"
#include "qse/random.hpp"
#include "qse/statefile.hpp"
#include "qse/verify.hpp"

namespace {

using namespace qse;

constexpr int kExitBadFile = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumerical = 4;

void fail(int code, const std::string& kind, const std::string& reason) {
  std::string r = reason;
  for (auto& ch : r)
    if (ch == '\n') ch = ' ';
  std::cerr << "error code=" << code << " kind=" << kind << " reason=\"" << r << "\"\n";
  std::exit(code);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::string cur;
  for (char c : s + "x") {
    if (c == 'x' || c == ',') {
      if (!cur.empty()) dims.push_back(std::stoi(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      cur += c;
    } else {
      throw ContractError("bad dims profile '" + s + "'");
    }
  }
  if (dims.empty()) throw ContractError("bad dims profile '" + s + "'");
  return dims;
}

SystemLayout layout_from_dims(const std::vector<int>& dims, const std::string& labels_csv) {
  std::vector<std::string> labels = split_labels(labels_csv);
  if (labels.empty()) {
    for (size_t i = 0; i < dims.size(); ++i) labels.push_back(std::string(1, char('A' + i)));
  }
  if (labels.size() != dims.size())
    throw ContractError("label count does not match dims profile");
  std::vector<Factor> fs;
  for (size_t i = 0; i < dims.size(); ++i) fs.push_back(Factor{labels[i], dims[i]});
  return SystemLayout(fs);
}

int cmd_compute(const std::string& quantity, const std::string& path,
                const std::string& target_csv, const std::string& cond_csv, double eps,
                const std::string& second_path, const std::string& sdpa_dump) {
  State state = load_state_file(path);
  const bool two_state = quantity == "fidelity" || quantity == "gen-fidelity" ||
                         quantity == "purified-distance" || quantity == "gen-trace-distance";
  std::cout << "quantity " << quantity << "\n";
  if (two_state) {
    if (second_path.empty())
      throw ContractError(quantity + " needs a second state (--second)");
    State other = load_state_file(second_path);
    double v = 0;
    if (quantity == "fidelity") v = fidelity(state, other);
    else if (quantity == "gen-fidelity") v = gen_fidelity(state, other);
    else if (quantity == "purified-distance") v = purified_distance(state, other);
    else v = gen_trace_distance(state, other);
    std::cout << "value " << num(v) << "\n";
    return 0;
  }

  std::vector<std::string> target = split_labels(target_csv);
  std::vector<std::string> cond = split_labels(cond_csv);
  if (target.empty()) throw ContractError(quantity + " needs --target labels");
  if (!sdpa_dump.empty()) sdp::set_global_dump_prefix(sdpa_dump);

  if (quantity == "phi") {
    std::vector<std::string> keep = target;
    keep.insert(keep.end(), cond.begin(), cond.end());
    State red = permute_factors(marginal(state, keep), keep);
    int da = red.layout().keep(target).total_dim();
    int db = red.layout().keep(cond).total_dim();
    CMat sigma;
    sdp::Solution sol;
    double v = phi(red.matrix(), da, db, &sigma, &sol);
    std::cout << "value " << num(v) << "\n";
    std::cout << "witness_tr_sigma " << num(sigma.trace().real()) << "\n";
    std::cout << "sdp_gap " << sol.gap << "\n";
    return 0;
  }

  EntropyQuery q{state, target, cond, eps};
  EntropyResult res;
  if (quantity == "hmin") res = hmin(q);
  else if (quantity == "hmax") res = hmax(q);
  else if (quantity == "smooth-hmin") res = smooth_hmin(q);
  else if (quantity == "smooth-hmax") res = smooth_hmax(q);
  else throw ContractError("unknown quantity '" + quantity + "'");

  if (res.is_neg_infinity) std::cout << "value -inf\n";
  else std::cout << "value " << num(res.value) << "\n";
  if (res.optimizer_sigma) {
    double raw_tr = quantity == "hmin"   ? std::exp2(-res.value)
                    : quantity == "hmax" ? 1.0
                    : quantity == "smooth-hmin" ? std::exp2(-res.value)
                                                : std::exp2(res.value);
    std::cout << "witness_tr_sigma " << num(raw_tr) << "\n";
  }
  if (res.smoothed_state && eps > 0) {
    std::vector<std::string> keep = target;
    keep.insert(keep.end(), cond.begin(), cond.end());
    if (quantity == "smooth-hmin") {
      State red = permute_factors(marginal(state, keep), keep);
      std::cout << "witness_ball_slack "
                << num(in_ball(*res.smoothed_state, red, eps).slack) << "\n";
    } else {
      std::cout << "witness_ball_slack " << num(eps) << "\n";  // dual-side witness
    }
  }
  std::cout << "sdp_gap " << res.sdp_gap << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, int trials, uint64_t seed, const std::string& dims_s,
               const std::string& eps_csv, const std::string& out_path, int threads,
               bool per_trial) {
  std::vector<verify::SuiteConfig> configs;
  if (suite == "all") {
    configs = verify::default_battery(seed);
  } else {
    if (!verify::is_suite(suite)) throw ContractError("unknown suite '" + suite + "'");
    verify::SuiteConfig c;
    c.name = suite;
    c.seed = seed;
    configs.push_back(c);
  }
  for (auto& c : configs) {
    if (trials > 0) c.trials = trials;
    if (!dims_s.empty()) c.dims = parse_dims(dims_s);
    if (!eps_csv.empty()) {
      c.epsilons.clear();
      for (const auto& tok : split_labels(eps_csv)) c.epsilons.push_back(std::stod(tok));
    }
    c.threads = threads;
    c.per_trial_margins = per_trial;
  }

  std::string text;
  std::string json_all = "[\n";
  int total_failures = 0, total_sdp_failures = 0;
  bool first = true;
  for (const auto& c : configs) {
    verify::VerificationReport rep = verify::run_suite(c);
    total_failures += rep.failures;
    total_sdp_failures += rep.sdp_failures;
    text += rep.to_text();
    if (!first) json_all += ",\n";
    json_all += rep.to_json_text();
    first = false;
    std::printf("%-18s dims=", rep.suite.c_str());
    for (size_t i = 0; i < rep.dims.size(); ++i)
      std::printf("%s%d", i ? "x" : "", rep.dims[i]);
    std::printf(" trials=%d failures=%d sdp_failures=%d worst=%.3e", rep.trials_run,
                rep.failures, rep.sdp_failures, rep.worst_slack);
    std::printf("  time %.1fs\n", rep.wall_time_ms / 1000.0);
  }
  json_all += "\n]\n";
  if (!out_path.empty()) {
    std::ofstream t(out_path + ".txt");
    if (!t) throw ContractError("cannot write '" + out_path + ".txt'");
    t << text;
    std::ofstream j(out_path + ".json");
    j << json_all;
    std::cout << "reports written to " << out_path << ".txt and " << out_path << ".json\n";
  }
  std::printf("total failures=%d sdp_failures=%d\n", total_failures, total_sdp_failures);
  return (total_failures == 0 && total_sdp_failures == 0) ? 0 : 1;
}

int cmd_random(const std::string& kind, const std::string& dims_s, int rank, uint64_t seed,
               const std::string& out_path, const std::string& labels_csv, int env_dim,
               bool non_tp, double subnorm_min, const std::string& out_dims_s) {
  auto dims = parse_dims(dims_s);
  SystemLayout lay = layout_from_dims(dims, labels_csv);
  if (out_path.empty()) throw ContractError("--out is required");
  if (kind == "pure") {
    PureState psi = random_pure(lay, seed);
    save_state_file(out_path, psi.to_state(), "haar random pure state");
  } else if (kind == "mixed") {
    if (rank <= 0) rank = lay.total_dim();
    State rho = random_state(lay, rank, seed, subnorm_min);
    save_state_file(out_path, rho, "random mixed state");
  } else if (kind == "channel") {
    SystemLayout out_lay = out_dims_s.empty() ? lay : layout_from_dims(parse_dims(out_dims_s), "");
    Channel c = random_channel(lay, out_lay, env_dim, seed, !non_tp);
    save_channel_file(out_path, c, "random channel");
  } else {
    throw ContractError("unknown kind '" + kind + "' (pure|mixed|channel)");
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth conditional min/max entropies of explicit quantum states"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "compute a quantity of a state file");
  std::string quantity, state_path, target_csv, cond_csv, second_path, sdpa_dump;
  double eps = 0.0;
  compute->add_option("quantity", quantity,
                      "hmin|hmax|smooth-hmin|smooth-hmax|phi|fidelity|gen-fidelity|"
                      "purified-distance|gen-trace-distance")
      ->required();
  compute->add_option("state", state_path, "state file (JSON)")->required();
  compute->add_option("--target,-a", target_csv, "target factor labels, comma separated");
  compute->add_option("--conditioning,-b", cond_csv, "conditioning factor labels");
  compute->add_option("--eps,-e", eps, "smoothing parameter");
  compute->add_option("--second", second_path, "second state file for two-state quantities");
  compute->add_option("--sdpa-dump", sdpa_dump, "debug: dump the realified SDP in SDPA format");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  std::string suite, dims_s, eps_csv, out_path;
  int trials = 0, threads = 0;
  uint64_t seed = 42;
  bool per_trial = false;
  verify_cmd->add_option("suite", suite, "suite name or 'all'")->required();
  verify_cmd->add_option("--trials", trials, "trial count override");
  verify_cmd->add_option("--seed", seed, "master seed");
  verify_cmd->add_option("--dims", dims_s, "dimension profile, e.g. 2x2x2");
  verify_cmd->add_option("--eps", eps_csv, "epsilon list, comma separated");
  verify_cmd->add_option("--out", out_path, "report path prefix (.txt and .json)");
  verify_cmd->add_option("--threads", threads, "thread count (default: QSE_THREADS or hardware)");
  verify_cmd->add_flag("--per-trial", per_trial, "include per-trial margins in reports");

  // random
  auto* random_cmd = app.add_subcommand("random", "generate random states and channels");
  std::string kind, rdims = "2x2", rlabels, rout, out_dims;
  int rrank = 0, env_dim = 2;
  uint64_t rseed = 1;
  bool non_tp = false;
  double subnorm_min = 1.0;
  random_cmd->add_option("kind", kind, "pure|mixed|channel")->required();
  random_cmd->add_option("--dims", rdims, "dimension profile (input side for channels)");
  random_cmd->add_option("--labels", rlabels, "factor labels, comma separated (default A,B,...)");
  random_cmd->add_option("--rank", rrank, "rank for mixed states (default: full)");
  random_cmd->add_option("--seed", rseed, "seed");
  random_cmd->add_option("--out", rout, "output file")->required();
  random_cmd->add_option("--env", env_dim, "environment dimension for channels");
  random_cmd->add_flag("--non-tp", non_tp, "make the channel trace non-increasing");
  random_cmd->add_option("--subnorm-min", subnorm_min,
                         "scale mixed states by a uniform factor in (this, 1]");
  random_cmd->add_option("--out-dims", out_dims, "output dimension profile for channels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed())
      return cmd_compute(quantity, state_path, target_csv, cond_csv, eps, second_path, sdpa_dump);
    if (verify_cmd->parsed())
      return cmd_verify(suite, trials, seed, dims_s, eps_csv, out_path, threads, per_trial);
    if (random_cmd->parsed())
      return cmd_random(kind, rdims, rrank, rseed, rout, rlabels, env_dim, non_tp, subnorm_min,
                        out_dims);
  } catch (const FileFormatError& e) {
    fail(kExitBadFile, "file", e.what());
  } catch (const ContractError& e) {
    fail(kExitPrecondition, "precondition", e.what());
  } catch (const NumericalError& e) {
    fail(kExitNumerical, "numerical", e.what());
  }
  return 0;
}
