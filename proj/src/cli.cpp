// Copyright 2026 The FLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fldp/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fldp/accountant.hpp"
#include "fldp/errors.hpp"
#include "fldp/simulator.hpp"
#include "fldp/tradeoff.hpp"
#include "fldp/version.hpp"

namespace fldp::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kEpsilonGrid[] = {0.5, 1.0, 2.0, 4.0, 8.0};
constexpr double kRenyiOrderGrid[] = {2.0, 4.0, 8.0, 16.0, 32.0};

// Fixed 12-significant-digit scientific form for CSV cells.
std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

std::string timestamp() {
  if (const char* pinned = std::getenv("FLDP_TIMESTAMP")) return pinned;
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path.string());
  out << body;
}

// --- flag resolution --------------------------------------------------------

// Parameters gathered from flags and an optional JSON config file;
// explicit flags win over file values. The grid-capable axes are kept as
// strings so sweep can accept comma lists.
struct AccountFlags {
  std::optional<std::string> method;
  std::optional<std::string> schedule;
  std::optional<std::string> mode;
  std::optional<double> mu, smoothness, clip;
  std::optional<std::string> sigma, alpha, rounds, local_steps, clients;
  std::optional<double> c_const, z_const;
  std::string config_path;
};

void add_account_flags(CLI::App* cmd, AccountFlags* flags,
                       bool with_sigma = true) {
  cmd->add_option("--method", flags->method, "fedavg | fedprox");
  cmd->add_option("--schedule", flags->schedule,
                  "constant | cyclic | stagewise | continuous");
  cmd->add_option("--mu", flags->mu, "base learning rate");
  cmd->add_option("--L", flags->smoothness, "gradient smoothness constant");
  cmd->add_option("--V", flags->clip, "gradient clipping norm");
  cmd->add_option("--K", flags->local_steps, "local steps per round");
  cmd->add_option("--T", flags->rounds, "communication rounds");
  cmd->add_option("--m", flags->clients, "client count");
  if (with_sigma) {
    cmd->add_option("--sigma", flags->sigma, "noise standard deviation");
  }
  cmd->add_option("--alpha", flags->alpha, "FedProx proximal coefficient");
  cmd->add_option("--mode", flags->mode, "exact | table (default table)");
  cmd->add_option("--c", flags->c_const, "cyclic constant override");
  cmd->add_option("--z", flags->z_const, "continuous-decay constant override");
  cmd->add_option("--config", flags->config_path,
                  "JSON config file; flags override file values");
}

void fill_string(const json& j, const char* key,
                 std::optional<std::string>* slot) {
  if (slot->has_value() || !j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_string()) {
    *slot = v.get<std::string>();
  } else {
    std::ostringstream os;
    os << v;
    *slot = os.str();
  }
}

void fill_double(const json& j, const char* key, std::optional<double>* slot) {
  if (!slot->has_value() && j.contains(key)) *slot = j.at(key).get<double>();
}

void merge_config_file(AccountFlags* flags) {
  if (flags->config_path.empty()) return;
  std::ifstream in(flags->config_path);
  if (!in) throw config_error("cannot read config file: " + flags->config_path);
  json j = json::parse(in);
  fill_string(j, "method", &flags->method);
  fill_string(j, "schedule", &flags->schedule);
  fill_string(j, "mode", &flags->mode);
  fill_double(j, "mu", &flags->mu);
  fill_double(j, "L", &flags->smoothness);
  fill_double(j, "V", &flags->clip);
  fill_string(j, "sigma", &flags->sigma);
  fill_string(j, "alpha", &flags->alpha);
  fill_double(j, "c", &flags->c_const);
  fill_double(j, "z", &flags->z_const);
  fill_string(j, "K", &flags->local_steps);
  fill_string(j, "T", &flags->rounds);
  fill_string(j, "m", &flags->clients);
  flags->config_path.clear();
}

Method parse_method(const std::string& name) {
  if (name == "fedavg") return Method::kFedAvg;
  if (name == "fedprox") return Method::kFedProx;
  throw config_error("unknown method: " + name);
}

schedules::ScheduleKind parse_schedule(const std::string& name) {
  using schedules::ScheduleKind;
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "cyclic") return ScheduleKind::kCyclicDecay;
  if (name == "stagewise") return ScheduleKind::kStageDecay;
  if (name == "continuous") return ScheduleKind::kContinuousDecay;
  throw config_error("unknown schedule: " + name);
}

CoefficientMode parse_mode(const std::string& name) {
  if (name == "exact") return CoefficientMode::kExact;
  if (name == "table") return CoefficientMode::kTableForm;
  throw config_error("unknown coefficient mode: " + name);
}

template <typename T>
T require(const std::optional<T>& slot, const char* flag) {
  if (!slot) throw config_error(std::string("missing required flag ") + flag);
  return *slot;
}

int to_int(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw config_error(std::string(flag) + ": not an integer: " + text);
  }
}

double to_double(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw config_error(std::string(flag) + ": not a number: " + text);
  }
}

// Only accounting enforces the FedProx precondition alpha > L;
// the simulator legitimately runs any alpha >= 0.
enum class Purpose { kAccounting, kSimulation };

FlConfig resolve_config(AccountFlags flags, bool with_sigma = true,
                        Purpose purpose = Purpose::kAccounting) {
  merge_config_file(&flags);
  FlConfig config;
  config.method.kind = parse_method(require(flags.method, "--method"));
  if (config.method.kind == Method::kFedProx) {
    config.method.proximal_weight =
        to_double(require(flags.alpha, "--alpha"), "--alpha");
  } else if (flags.alpha) {
    throw config_error("--alpha is only meaningful with --method fedprox");
  }
  config.schedule.kind = parse_schedule(flags.schedule.value_or("constant"));
  config.schedule.base_rate = require(flags.mu, "--mu");
  config.schedule.c_const = flags.c_const;
  config.schedule.z_const = flags.z_const;
  config.smoothness = require(flags.smoothness, "--L");
  config.clip_norm = require(flags.clip, "--V");
  config.local_steps = to_int(require(flags.local_steps, "--K"), "--K");
  config.rounds = to_int(require(flags.rounds, "--T"), "--T");
  config.clients = to_int(require(flags.clients, "--m"), "--m");
  config.noise_std =
      with_sigma ? to_double(require(flags.sigma, "--sigma"), "--sigma") : 1.0;
  config.mode = parse_mode(flags.mode.value_or("table"));
  if (purpose == Purpose::kAccounting) {
    validate(config);
  } else {
    if (config.clients < 1 || config.local_steps < 1 || config.rounds < 1 ||
        !(config.clip_norm > 0.0) || !(config.noise_std >= 0.0) ||
        !(config.schedule.base_rate > 0.0)) {
      throw config_error("invalid simulation parameters");
    }
    if (config.method.kind == Method::kFedProx &&
        !(*config.method.proximal_weight >= 0.0)) {
      throw config_error("simulation requires alpha >= 0");
    }
  }
  return config;
}

json config_to_json(const FlConfig& config) {
  json j;
  j["method"] = config.method.kind == Method::kFedAvg ? "fedavg" : "fedprox";
  switch (config.schedule.kind) {
    case schedules::ScheduleKind::kConstant: j["schedule"] = "constant"; break;
    case schedules::ScheduleKind::kCyclicDecay: j["schedule"] = "cyclic"; break;
    case schedules::ScheduleKind::kStageDecay: j["schedule"] = "stagewise"; break;
    case schedules::ScheduleKind::kContinuousDecay:
      j["schedule"] = "continuous";
      break;
  }
  j["mu"] = config.schedule.base_rate;
  j["L"] = config.smoothness;
  j["V"] = config.clip_norm;
  j["K"] = config.local_steps;
  j["T"] = config.rounds;
  j["m"] = config.clients;
  j["sigma"] = config.noise_std;
  if (config.method.proximal_weight) {
    j["alpha"] = *config.method.proximal_weight;
  }
  j["mode"] = config.mode == CoefficientMode::kTableForm ? "table" : "exact";
  if (config.schedule.c_const) j["c"] = *config.schedule.c_const;
  if (config.schedule.z_const) j["z"] = *config.schedule.z_const;
  return j;
}

json manifest_json(const std::string& command, const json& config,
                   std::uint64_t seed) {
  json m;
  m["schema"] = "fldp.manifest.v1";
  m["tool_version"] = kVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["timestamp"] = timestamp();
  m["config"] = config;
  return m;
}

// --- subcommands ------------------------------------------------------------

int cmd_account(const AccountFlags& flags, std::ostream& out) {
  const FlConfig config = resolve_config(flags);
  const accounting::AccountingResult res = accounting::account(config);

  json j;
  j["schema"] = "fldp.account.v1";
  j["gdp_mu"] = res.gdp.mu;
  j["closed_form_mu"] = *res.closed_form_mu;
  j["h0"] = res.h0;
  j["lambda_feasible"] = res.lambda_feasible;
  j["bound_kind"] = res.bound_kind == accounting::BoundKind::kExactEquality
                        ? "exact-equality"
                        : "upper-bound";
  j["eps_delta"] = json::array();
  for (double eps : kEpsilonGrid) {
    const auto ed = tradeoff::gdp_to_eps_delta(res.gdp, eps);
    j["eps_delta"].push_back({{"epsilon", ed.epsilon}, {"delta", ed.delta}});
  }
  j["rdp"] = json::array();
  for (double order : kRenyiOrderGrid) {
    const auto rb = tradeoff::gdp_to_rdp(res.gdp, order);
    j["rdp"].push_back({{"order", rb.order}, {"epsilon", rb.epsilon}});
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_calibrate(const AccountFlags& flags, std::optional<double> target_mu,
                  std::optional<double> target_eps,
                  std::optional<double> target_delta, std::ostream& out) {
  const FlConfig config = resolve_config(flags, /*with_sigma=*/false);
  const bool has_eps_delta = target_eps.has_value() && target_delta.has_value();
  if (target_mu.has_value() == has_eps_delta) {
    throw config_error(
        "calibrate needs either --target-mu or both --epsilon and --delta");
  }
  tradeoff::GdpCurve target;
  if (target_mu) {
    if (!(*target_mu > 0.0)) {
      throw calibration_error("target GDP parameter must be > 0");
    }
    target = tradeoff::GdpCurve{*target_mu};
  } else {
    target = tradeoff::eps_delta_to_gdp(
        tradeoff::EpsDelta{*target_eps, *target_delta});
  }
  const double sigma = accounting::calibrate_sigma(config, target);

  FlConfig achieved_config = config;
  achieved_config.noise_std = sigma;
  const auto achieved = accounting::account(achieved_config);

  json j;
  j["schema"] = "fldp.calibrate.v1";
  j["sigma"] = sigma;
  j["achieved_mu"] = achieved.gdp.mu;
  if (target_eps) {
    j["achieved_delta_at_epsilon"] =
        tradeoff::gdp_to_eps_delta(achieved.gdp, *target_eps).delta;
  } else {
    j["achieved_delta_at_epsilon"] = nullptr;
  }
  out << j.dump(2) << '\n';
  return 0;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Axes iterate rightmost-fastest in fixed column order T, K, m, sigma,
// alpha; any axis may be a comma list.
int cmd_sweep(const AccountFlags& flags, const std::string& out_path,
              std::ostream& out) {
  AccountFlags base = flags;
  merge_config_file(&base);
  const bool fedprox = require(base.method, "--method") == "fedprox";

  auto int_axis = [](const std::optional<std::string>& slot, const char* flag) {
    std::vector<int> vals;
    for (const auto& s : split_list(require(slot, flag))) {
      vals.push_back(to_int(s, flag));
    }
    if (vals.empty()) throw config_error(std::string(flag) + ": empty grid");
    return vals;
  };
  auto double_axis = [](const std::optional<std::string>& slot,
                        const char* flag) {
    std::vector<double> vals;
    for (const auto& s : split_list(require(slot, flag))) {
      vals.push_back(to_double(s, flag));
    }
    if (vals.empty()) throw config_error(std::string(flag) + ": empty grid");
    return vals;
  };

  const std::vector<int> rounds_axis = int_axis(base.rounds, "--T");
  const std::vector<int> steps_axis = int_axis(base.local_steps, "--K");
  const std::vector<int> clients_axis = int_axis(base.clients, "--m");
  const std::vector<double> sigma_axis = double_axis(base.sigma, "--sigma");
  std::vector<double> alpha_axis{0.0};  // placeholder; column left empty
  if (fedprox) {
    alpha_axis = double_axis(base.alpha, "--alpha");
  } else if (base.alpha) {
    throw config_error("--alpha is only meaningful with --method fedprox");
  }

  std::string csv;
  csv += "# schema: fldp.sweep.v1\n";
  csv += "T,K,m,sigma,alpha,gdp_mu,closed_form_mu,baseline_mu\n";
  for (int rounds : rounds_axis) {
    for (int steps : steps_axis) {
      for (int clients : clients_axis) {
        for (double sigma : sigma_axis) {
          for (double alpha : alpha_axis) {
            AccountFlags point = base;
            point.rounds = std::to_string(rounds);
            point.local_steps = std::to_string(steps);
            point.clients = std::to_string(clients);
            point.sigma = fmt_sci(sigma);
            if (fedprox) point.alpha = fmt_sci(alpha);
            const FlConfig config = resolve_config(point);
            const auto res = accounting::account(config);
            const auto baseline =
                accounting::naive_composition_baseline(config);
            csv += std::to_string(rounds) + ',' + std::to_string(steps) + ',' +
                   std::to_string(clients) + ',' + fmt_sci(sigma) + ',' +
                   (fedprox ? fmt_sci(alpha) : std::string()) + ',' +
                   fmt_sci(res.gdp.mu) + ',' + fmt_sci(*res.closed_form_mu) +
                   ',' + fmt_sci(baseline.mu) + '\n';
          }
        }
      }
    }
  }
  if (out_path.empty()) {
    out << csv;
  } else {
    write_file(out_path, csv);
  }
  return 0;
}

int cmd_tradeoff(double mu, int points, std::optional<std::int64_t> mc_samples,
                 std::uint64_t seed, const std::string& out_path,
                 std::ostream& out) {
  if (points < 2) throw config_error("--points must be >= 2");
  if (!(mu >= 0.0)) throw config_error("--mu must be >= 0");
  const tradeoff::GdpCurve curve{mu};
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / (points - 1);
  }
  std::vector<tradeoff::McPoint> mc;
  if (mc_samples) {
    mc = tradeoff::mc_tradeoff_estimate(mu, grid, *mc_samples, seed);
  }
  std::string csv;
  csv += "# schema: fldp.tradeoff.v1\n";
  csv += mc_samples ? "alpha,beta,mc_alpha,mc_beta\n" : "alpha,beta\n";
  for (int i = 0; i < points; ++i) {
    csv +=
        fmt_sci(grid[i]) + ',' + fmt_sci(tradeoff::gdp_tradeoff(curve, grid[i]));
    if (mc_samples) {
      csv += ',' + fmt_sci(mc[i].alpha) + ',' + fmt_sci(mc[i].beta);
    }
    csv += '\n';
  }
  if (out_path.empty()) {
    out << csv;
  } else {
    write_file(out_path, csv);
  }
  return 0;
}

int cmd_simulate(const AccountFlags& flags, std::uint64_t seed,
                 std::string out_dir, int samples_per_client, int dim,
                 double beta, int diff_client, int diff_sample,
                 bool identical_pair, bool debug_pre_noise,
                 const std::string& command, std::ostream& out) {
  if (out_dir.empty()) {
    if (const char* env_dir = std::getenv("FLDP_OUT_DIR")) out_dir = env_dir;
  }
  if (out_dir.empty()) {
    throw config_error("simulate needs --out-dir (or FLDP_OUT_DIR)");
  }

  AccountFlags resolved = flags;
  if (!resolved.smoothness) resolved.smoothness = 1.0;  // measured at run time
  if (!resolved.mu) resolved.mu = 0.02;

  sim::SimConfig config;
  config.fl = resolve_config(resolved, /*with_sigma=*/true,
                             Purpose::kSimulation);
  config.samples_per_client = samples_per_client;
  config.dim = dim;
  config.dirichlet_beta = beta;
  config.debug_pre_noise = debug_pre_noise;

  const auto data = sim::make_heterogeneous_data(
      config.fl.clients, samples_per_client, dim, beta, seed);
  sim::AdjacentPair pair;
  if (identical_pair) {
    pair.base = data;
    pair.modified = data;
    pair.diff_client = diff_client;
    pair.diff_sample = diff_sample;
  } else {
    pair = sim::make_adjacent(data, diff_client, diff_sample, seed);
  }
  const sim::SimRun run = sim::run_adjacent(config, pair, seed);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::string trace;
  trace += "# schema: fldp.trace.v1\n";
  trace += "t,sensitivity,envelope,clip_count\n";
  for (int t = 0; t < config.fl.rounds; ++t) {
    trace += std::to_string(t) + ',' + fmt_sci(run.sensitivity[t]) + ',' +
             fmt_sci(run.envelope[t]) + ',' +
             std::to_string(run.clip_events[t]) + '\n';
  }
  write_file(dir / "trace.csv", trace);

  int clip_total = 0;
  for (int c : run.clip_events) clip_total += c;
  json summary;
  summary["schema"] = "fldp.simulate.v1";
  summary["rounds"] = config.fl.rounds;
  summary["final_sensitivity"] = run.sensitivity.back();
  summary["max_sensitivity"] =
      *std::max_element(run.sensitivity.begin(), run.sensitivity.end());
  summary["envelope_violations"] = run.envelope_violations;
  summary["recursion_violations"] = run.recursion_violations;
  summary["measured_smoothness"] = run.measured_smoothness;
  summary["envelope_smoothness"] = run.envelope_smoothness;
  summary["clip_events_total"] = clip_total;
  if (debug_pre_noise) {
    summary["max_pre_noise_gap"] = run.max_pre_noise_gap;
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  json config_json = config_to_json(config.fl);
  config_json["n_per_client"] = samples_per_client;
  config_json["dim"] = dim;
  config_json["beta"] = beta;
  config_json["diff_client"] = diff_client;
  config_json["diff_sample"] = diff_sample;
  config_json["identical_pair"] = identical_pair;
  config_json["debug_pre_noise"] = debug_pre_noise;
  write_file(dir / "manifest.json",
             manifest_json(command, config_json, seed).dump(2) + "\n");

  out << "wrote trace.csv, summary.json, manifest.json under " << out_dir
      << '\n';
  return 0;
}

std::string canonical_command(const std::vector<std::string>& args) {
  std::string joined;
  for (const auto& a : args) {
    if (!joined.empty()) joined += ' ';
    joined += a;
  }
  return joined;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Convergent f-DP accounting and desk-scale sensitivity "
               "simulation for noisy federated training"};
  app.require_subcommand(1);

  AccountFlags account_flags;
  CLI::App* account = app.add_subcommand(
      "account", "worst-privacy GDP parameter plus conversions");
  add_account_flags(account, &account_flags);

  AccountFlags calibrate_flags;
  std::optional<double> target_mu, target_eps, target_delta;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "smallest sigma meeting a privacy target");
  add_account_flags(calibrate, &calibrate_flags, /*with_sigma=*/false);
  calibrate->add_option("--target-mu", target_mu, "target GDP parameter");
  calibrate->add_option("--epsilon", target_eps, "target epsilon");
  calibrate->add_option("--delta", target_delta, "target delta");

  AccountFlags sweep_flags;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "accounting across a parameter grid (CSV); the T, K, m, "
               "sigma and alpha flags accept comma lists");
  add_account_flags(sweep, &sweep_flags);
  sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

  double tradeoff_mu = 0.0;
  int tradeoff_points = 101;
  std::optional<std::int64_t> mc_samples;
  std::uint64_t tradeoff_seed = 0;
  std::string tradeoff_out;
  CLI::App* tradeoff_cmd = app.add_subcommand(
      "tradeoff", "type-I/type-II curve of a GDP parameter (CSV)");
  tradeoff_cmd->add_option("--mu", tradeoff_mu, "GDP parameter")->required();
  tradeoff_cmd->add_option("--points", tradeoff_points, "alpha grid size");
  tradeoff_cmd->add_option("--mc-samples", mc_samples,
                           "Monte-Carlo draws per distribution");
  tradeoff_cmd->add_option("--seed", tradeoff_seed, "Monte-Carlo seed");
  tradeoff_cmd->add_option("--out", tradeoff_out,
                           "output CSV path (default stdout)");

  AccountFlags sim_flags;
  std::uint64_t sim_seed = 0;
  std::string sim_out_dir;
  int sim_n = 50;
  int sim_dim = 10;
  double sim_beta = 0.1;
  int diff_client = 0;
  int diff_sample = 0;
  bool identical_pair = false;
  bool debug_pre_noise = false;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "adjacent-dataset sensitivity run (CSV + JSON)");
  add_account_flags(simulate, &sim_flags);
  simulate->add_option("--seed", sim_seed, "run seed");
  simulate->add_option("--out-dir", sim_out_dir,
                       "output directory (or FLDP_OUT_DIR)");
  simulate->add_option("--n-per-client", sim_n, "samples per client");
  simulate->add_option("--dim", sim_dim, "feature dimension");
  simulate->add_option("--beta", sim_beta, "Dirichlet heterogeneity");
  simulate->add_option("--diff-client", diff_client, "replaced sample: client");
  simulate->add_option("--diff-sample", diff_sample, "replaced sample: row");
  simulate->add_flag("--identical-pair", identical_pair,
                     "control run with C' = C");
  simulate->add_flag("--debug-pre-noise", debug_pre_noise,
                     "record pre-noise uploads and their agreement");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (account->parsed()) return cmd_account(account_flags, out);
    if (calibrate->parsed()) {
      return cmd_calibrate(calibrate_flags, target_mu, target_eps,
                           target_delta, out);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_out, out);
    if (tradeoff_cmd->parsed()) {
      return cmd_tradeoff(tradeoff_mu, tradeoff_points, mc_samples,
                          tradeoff_seed, tradeoff_out, out);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_flags, sim_seed, sim_out_dir, sim_n, sim_dim,
                          sim_beta, diff_client, diff_sample, identical_pair,
                          debug_pre_noise, canonical_command(args), out);
    }
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const simulation_error& e) {
    err << "simulation error: " << e.what() << '\n';
    return 5;
  } catch (const calibration_error& e) {
    err << "calibration error: " << e.what() << '\n';
    return 4;
  } catch (const numeric_error& e) {
    err << "accounting numeric error: " << e.what() << '\n';
    return 3;
  } catch (const config_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fldp::cli
