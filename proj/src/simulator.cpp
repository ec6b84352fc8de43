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

#include "fldp/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "fldp/errors.hpp"
#include "fldp/rng.hpp"

namespace fldp::sim {

namespace {

constexpr std::uint64_t kNoiseStream = 0x01;
constexpr std::uint64_t kProbeStream = 0x02;
constexpr std::uint64_t kDataStream = 0x03;
constexpr std::uint64_t kPairStream = 0x04;

constexpr double kClusterOffset = 2.0;
constexpr double kSmoothnessSafety = 1.1;
constexpr int kSmoothnessProbes = 1000;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

std::vector<double> vec_sub(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

// Class c clusters at +/- offset * ones/sqrt(d).
void draw_sample(int label, int dim, Rng& rng, double* out) {
  const double center = (label == 0 ? 1.0 : -1.0) * kClusterOffset /
                        std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) out[j] = center + rng.normal();
}

void clip_in_place(std::vector<double>& g, double clip_norm,
                   int* clip_events) {
  const double raw = norm(g);
  if (raw > clip_norm) {
    const double scale = clip_norm / raw;
    for (double& x : g) x *= scale;
    if (clip_events != nullptr) ++*clip_events;
  }
  assert(norm(g) <= clip_norm * (1.0 + 1e-12));
}

struct Trajectory {
  std::vector<std::vector<double>> states;       // w_1..w_T after aggregation
  std::vector<std::vector<double>> pre_noise;    // averaged uploads per round
  std::vector<int> clip_events;                  // per round
};

Trajectory train(const std::vector<ClientDataset>& data, const FlConfig& fl,
                 int dim, std::uint64_t noise_seed, bool keep_pre_noise) {
  const int clients = fl.clients;
  const double alpha = fl.method.kind == Method::kFedProx
                           ? *fl.method.proximal_weight
                           : 0.0;
  Rng noise_rng(noise_seed);
  std::vector<double> w(dim, 0.0);
  Trajectory out;
  out.states.reserve(fl.rounds);
  out.clip_events.assign(fl.rounds, 0);
  for (int t = 0; t < fl.rounds; ++t) {
    std::vector<double> upload_sum(dim, 0.0);
    for (int i = 0; i < clients; ++i) {
      std::vector<double> wi =
          fl.method.kind == Method::kFedProx
              ? local_update_fedprox(w, w, data[i], fl.schedule, t,
                                     fl.local_steps, fl.clip_norm, alpha,
                                     &out.clip_events[t])
              : local_update_fedavg(w, data[i], fl.schedule, t, fl.local_steps,
                                    fl.clip_norm, &out.clip_events[t]);
      for (int j = 0; j < dim; ++j) upload_sum[j] += wi[j];
    }
    std::vector<double> noise_mean(dim, 0.0);
    for (int i = 0; i < clients; ++i) {
      for (int j = 0; j < dim; ++j) {
        noise_mean[j] += noise_rng.normal(0.0, fl.noise_std);
      }
    }
    for (int j = 0; j < dim; ++j) {
      upload_sum[j] /= clients;
      noise_mean[j] /= clients;
    }
    if (keep_pre_noise) out.pre_noise.push_back(upload_sum);
    for (int j = 0; j < dim; ++j) w[j] = upload_sum[j] + noise_mean[j];
    if (!all_finite(w)) {
      throw simulation_error(
          "training diverged: non-finite parameters at round " +
              std::to_string(t),
          t);
    }
    out.states.push_back(w);
  }
  return out;
}

// Empirical gradient-Lipschitz constant: max finite-difference ratio over
// random parameter pairs inside the region the training visited, plus the
// consecutive trajectory states themselves.
double probe_smoothness(const AdjacentPair& pair,
                        const std::vector<std::vector<double>>& visited,
                        int dim, std::uint64_t seed) {
  Rng rng(seed);
  const int clients = static_cast<int>(pair.base.size());
  double radius = 1.0;
  for (const auto& w : visited) radius = std::max(radius, norm(w));

  auto ratio_at = [&](const ClientDataset& data, const std::vector<double>& a,
                      const std::vector<double>& b) {
    const std::vector<double> ga = logistic_gradient(data, a);
    const std::vector<double> gb = logistic_gradient(data, b);
    const double dw = norm(vec_sub(a, b));
    if (dw == 0.0) return 0.0;
    return norm(vec_sub(ga, gb)) / dw;
  };

  double best = 0.0;
  for (int p = 0; p < kSmoothnessProbes; ++p) {
    const auto& anchor = visited[p % visited.size()];
    const ClientDataset& data = (p % 2 == 0)
                                    ? pair.base[p % clients]
                                    : pair.modified[(p / 2) % clients];
    std::vector<double> a(dim), b(dim);
    const double spread = radius * rng.uniform01();
    const double step = radius * std::pow(10.0, -rng.uniform(0.0, 4.0));
    for (int j = 0; j < dim; ++j) {
      a[j] = anchor[j] + spread * rng.normal() / std::sqrt(dim);
      b[j] = a[j] + step * rng.normal() / std::sqrt(dim);
    }
    best = std::max(best, ratio_at(data, a, b));
  }
  for (std::size_t t = 0; t + 1 < visited.size(); ++t) {
    for (int i = 0; i < clients; ++i) {
      best = std::max(best, ratio_at(pair.base[i], visited[t], visited[t + 1]));
    }
  }
  return best;
}

// FedProx per-round recursion coefficients valid for any alpha >= 0 (the
// table-form cap requires alpha > L):
//   rho_t = prod_k (1 - eta_k (alpha - L))
//           + alpha sum_k (prod_{j>k} (1 - eta_j (alpha - L))) eta_k
//   gamma_t = (2V/m) sum_k (prod_{j>k} (1 - eta_j alpha)) eta_k
// At alpha = 0 both reduce to the exact FedAvg recursion forms.
schedules::CoefficientSeries fedprox_general_coefficients(const FlConfig& fl) {
  const double alpha = *fl.method.proximal_weight;
  const int steps = fl.local_steps;
  schedules::CoefficientSeries series;
  series.mode = CoefficientMode::kExact;
  series.rho.reserve(fl.rounds);
  series.gamma.reserve(fl.rounds);
  for (int t = 0; t < fl.rounds; ++t) {
    double rho = 1.0;
    double rho_drive = 0.0;
    double gamma_sum = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double eta = schedules::lr_at(fl.schedule, t, k, steps);
      if (eta * alpha > 1.0) {
        throw config_error(
            "fedprox envelope requires eta * alpha <= 1 at every step");
      }
      const double contract = 1.0 - eta * (alpha - fl.smoothness);
      rho = rho * contract;
      rho_drive = rho_drive * contract + eta * alpha;
      gamma_sum = gamma_sum * (1.0 - eta * alpha) + eta;
    }
    series.rho.push_back(rho + rho_drive);
    series.gamma.push_back(2.0 * fl.clip_norm / fl.clients * gamma_sum);
  }
  return series;
}

schedules::CoefficientSeries envelope_coefficients(const FlConfig& fl) {
  if (fl.method.kind == Method::kFedProx &&
      !(*fl.method.proximal_weight > fl.smoothness)) {
    return fedprox_general_coefficients(fl);
  }
  FlConfig table = fl;
  table.mode = CoefficientMode::kTableForm;
  return schedules::coefficients(table);
}

}  // namespace

std::vector<ClientDataset> make_heterogeneous_data(int clients,
                                                   int samples_per_client,
                                                   int dim,
                                                   double dirichlet_beta,
                                                   std::uint64_t seed) {
  if (clients < 1 || samples_per_client < 1 || dim < 1) {
    throw config_error("make_heterogeneous_data: counts must be >= 1");
  }
  if (!(dirichlet_beta > 0.0)) {
    throw config_error("make_heterogeneous_data: dirichlet beta must be > 0");
  }
  Rng rng(derive_seed(seed, kDataStream));
  std::vector<ClientDataset> out(clients);
  for (int i = 0; i < clients; ++i) {
    ClientDataset& ds = out[i];
    ds.client_id = i;
    ds.dim = dim;
    ds.features.resize(static_cast<std::size_t>(samples_per_client) * dim);
    ds.labels.resize(samples_per_client);
    const double share_class1 = rng.beta(dirichlet_beta, dirichlet_beta);
    const int count_class1 =
        static_cast<int>(std::llround(share_class1 * samples_per_client));
    for (int r = 0; r < samples_per_client; ++r) {
      const int label = r < count_class1 ? 1 : 0;
      ds.labels[r] = label;
      draw_sample(label, dim, rng, &ds.features[static_cast<std::size_t>(r) * dim]);
    }
  }
  return out;
}

AdjacentPair make_adjacent(std::vector<ClientDataset> base, int diff_client,
                           int diff_sample, std::uint64_t seed) {
  if (diff_client < 0 || diff_client >= static_cast<int>(base.size())) {
    throw std::domain_error("make_adjacent: client index out of range");
  }
  if (diff_sample < 0 || diff_sample >= base[diff_client].rows()) {
    throw std::domain_error("make_adjacent: sample index out of range");
  }
  AdjacentPair pair;
  pair.modified = base;
  pair.base = std::move(base);
  pair.diff_client = diff_client;
  pair.diff_sample = diff_sample;
  Rng rng(derive_seed(seed, kPairStream));
  ClientDataset& target = pair.modified[diff_client];
  const int flipped = 1 - target.labels[diff_sample];
  target.labels[diff_sample] = flipped;
  draw_sample(flipped, target.dim, rng,
              &target.features[static_cast<std::size_t>(diff_sample) * target.dim]);
  return pair;
}

std::vector<double> logistic_gradient(const ClientDataset& data,
                                      const std::vector<double>& w) {
  std::vector<double> g(data.dim, 0.0);
  const int n = data.rows();
  for (int r = 0; r < n; ++r) {
    const double* x = &data.features[static_cast<std::size_t>(r) * data.dim];
    double z = 0.0;
    for (int j = 0; j < data.dim; ++j) z += x[j] * w[j];
    const double y = data.labels[r] == 1 ? 1.0 : -1.0;
    // d/dz log(1 + exp(-y z)) = -y / (1 + exp(y z))
    const double weight = -y / (1.0 + std::exp(y * z));
    for (int j = 0; j < data.dim; ++j) g[j] += weight * x[j];
  }
  for (double& v : g) v /= n;
  return g;
}

std::vector<double> local_update_fedavg(std::vector<double> w,
                                        const ClientDataset& data,
                                        const schedules::Schedule& schedule,
                                        int round, int local_steps,
                                        double clip_norm, int* clip_events) {
  if (local_steps < 1) throw config_error("local_update: K must be >= 1");
  if (!(clip_norm > 0.0)) throw config_error("local_update: V must be > 0");
  for (int k = 0; k < local_steps; ++k) {
    std::vector<double> g = logistic_gradient(data, w);
    if (!all_finite(g)) {
      throw simulation_error("non-finite gradient at local step " +
                                 std::to_string(k) + " of round " +
                                 std::to_string(round),
                             round);
    }
    clip_in_place(g, clip_norm, clip_events);
    const double eta = schedules::lr_at(schedule, round, k, local_steps);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * g[j];
  }
  return w;
}

std::vector<double> local_update_fedprox(std::vector<double> w,
                                         const std::vector<double>& anchor,
                                         const ClientDataset& data,
                                         const schedules::Schedule& schedule,
                                         int round, int local_steps,
                                         double clip_norm,
                                         double proximal_weight,
                                         int* clip_events) {
  if (proximal_weight < 0.0) {
    throw config_error("local_update_fedprox: alpha must be >= 0");
  }
  if (proximal_weight == 0.0) {
    return local_update_fedavg(std::move(w), data, schedule, round,
                               local_steps, clip_norm, clip_events);
  }
  if (local_steps < 1) throw config_error("local_update: K must be >= 1");
  if (!(clip_norm > 0.0)) throw config_error("local_update: V must be > 0");
  for (int k = 0; k < local_steps; ++k) {
    std::vector<double> g = logistic_gradient(data, w);
    if (!all_finite(g)) {
      throw simulation_error("non-finite gradient at local step " +
                                 std::to_string(k) + " of round " +
                                 std::to_string(round),
                             round);
    }
    clip_in_place(g, clip_norm, clip_events);
    const double eta = schedules::lr_at(schedule, round, k, local_steps);
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] -= eta * (g[j] + proximal_weight * (w[j] - anchor[j]));
    }
  }
  return w;
}

SimRun run_adjacent(const SimConfig& config, const AdjacentPair& pair,
                    std::uint64_t seed) {
  const FlConfig& fl = config.fl;
  if (static_cast<int>(pair.base.size()) != fl.clients ||
      pair.base.size() != pair.modified.size()) {
    throw config_error("run_adjacent: pair size does not match client count");
  }
  const int dim = pair.base.front().dim;
  const std::uint64_t noise_seed = derive_seed(seed, kNoiseStream);

  const bool debug = config.debug_pre_noise;
  const Trajectory base = train(pair.base, fl, dim, noise_seed, debug);
  const Trajectory modified = train(pair.modified, fl, dim, noise_seed, debug);

  SimRun run;
  run.clip_events = base.clip_events;
  run.sensitivity.reserve(fl.rounds);
  for (int t = 0; t < fl.rounds; ++t) {
    run.sensitivity.push_back(
        norm(vec_sub(base.states[t], modified.states[t])));
  }
  if (debug) {
    for (int t = 0; t < fl.rounds; ++t) {
      const double pre =
          norm(vec_sub(base.pre_noise[t], modified.pre_noise[t]));
      run.max_pre_noise_gap =
          std::max(run.max_pre_noise_gap, std::abs(pre - run.sensitivity[t]));
    }
  }

  // Envelope with the measured smoothness constant; probes include both
  // trajectories' visited states.
  std::vector<std::vector<double>> visited;
  visited.emplace_back(dim, 0.0);
  visited.insert(visited.end(), base.states.begin(), base.states.end());
  visited.insert(visited.end(), modified.states.begin(),
                 modified.states.end());
  run.measured_smoothness =
      probe_smoothness(pair, visited, dim, derive_seed(seed, kProbeStream));
  run.envelope_smoothness = kSmoothnessSafety * run.measured_smoothness;

  FlConfig envelope_config = fl;
  envelope_config.smoothness = run.envelope_smoothness;
  const schedules::CoefficientSeries coeffs =
      envelope_coefficients(envelope_config);

  run.envelope.reserve(fl.rounds);
  double bound = 0.0;
  double previous = 0.0;
  for (int t = 0; t < fl.rounds; ++t) {
    const double step_cap = coeffs.rho[t] * previous + coeffs.gamma[t];
    if (run.sensitivity[t] > step_cap * (1.0 + 1e-12)) {
      ++run.recursion_violations;
    }
    previous = run.sensitivity[t];
    bound = coeffs.rho[t] * bound + coeffs.gamma[t];
    run.envelope.push_back(bound);
    if (run.sensitivity[t] > bound * (1.0 + 1e-12)) {
      ++run.envelope_violations;
    }
  }
  return run;
}

std::vector<SweepRow> sweep_sensitivity(
    const std::vector<std::pair<std::string, SimConfig>>& configs,
    std::uint64_t seed) {
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const auto& [label, config] : configs) {
    const auto data = make_heterogeneous_data(config.fl.clients,
                                              config.samples_per_client,
                                              config.dim,
                                              config.dirichlet_beta, seed);
    const AdjacentPair pair = make_adjacent(data, 0, 0, seed);
    const SimRun run = run_adjacent(config, pair, seed);
    SweepRow row;
    row.label = label;
    row.final_sensitivity = run.sensitivity.back();
    row.max_sensitivity =
        *std::max_element(run.sensitivity.begin(), run.sensitivity.end());
    row.final_envelope = run.envelope.back();
    row.envelope_violations = run.envelope_violations;
    row.recursion_violations = run.recursion_violations;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fldp::sim
