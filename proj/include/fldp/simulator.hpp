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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fldp/coefficients.hpp"
#include "fldp/config.hpp"

namespace fldp::sim {

// One client's private dataset: binary-labelled Gaussian-cluster rows for
// a d-dimensional logistic task.
struct ClientDataset {
  int client_id = 0;
  int dim = 0;
  std::vector<double> features;  // row-major, rows() x dim
  std::vector<int> labels;       // class ids 0/1
  int rows() const { return static_cast<int>(labels.size()); }
};

// Two client unions identical everywhere except one replaced sample.
struct AdjacentPair {
  std::vector<ClientDataset> base;
  std::vector<ClientDataset> modified;
  int diff_client = 0;
  int diff_sample = 0;
};

// Synthetic two-class clusters with per-client class proportions drawn
// from Dirichlet(beta); every client holds exactly samples_per_client
// rows. Byte-identical output for a fixed seed.
std::vector<ClientDataset> make_heterogeneous_data(int clients,
                                                   int samples_per_client,
                                                   int dim,
                                                   double dirichlet_beta,
                                                   std::uint64_t seed);

// Replaces exactly sample (diff_client, diff_sample) with a freshly drawn
// sample of the flipped class; every other byte is shared with the base.
AdjacentPair make_adjacent(std::vector<ClientDataset> base, int diff_client,
                           int diff_sample, std::uint64_t seed);

// Full-batch logistic gradient of one client's loss at w.
std::vector<double> logistic_gradient(const ClientDataset& data,
                                      const std::vector<double>& w);

// K clipped gradient-descent steps from w on the client's loss; every
// applied step has norm at most clip_norm. clip_events, when given,
// accumulates the number of clipped steps.
std::vector<double> local_update_fedavg(std::vector<double> w,
                                        const ClientDataset& data,
                                        const schedules::Schedule& schedule,
                                        int round, int local_steps,
                                        double clip_norm,
                                        int* clip_events = nullptr);

// Proximal variant: each step applies the clipped gradient plus
// proximal_weight * (w - anchor). proximal_weight = 0 reproduces
// local_update_fedavg bit for bit.
std::vector<double> local_update_fedprox(std::vector<double> w,
                                         const std::vector<double>& anchor,
                                         const ClientDataset& data,
                                         const schedules::Schedule& schedule,
                                         int round, int local_steps,
                                         double clip_norm,
                                         double proximal_weight,
                                         int* clip_events = nullptr);

struct SimConfig {
  // smoothness in fl is ignored: the envelope uses the measured constant.
  FlConfig fl;
  int samples_per_client = 50;
  int dim = 10;
  double dirichlet_beta = 0.1;
  bool debug_pre_noise = false;
};

struct SimRun {
  std::vector<double> sensitivity;  // ||w_{t+1} - w'_{t+1}|| per round
  std::vector<double> envelope;     // d_{t+1} = rho_t d_t + gamma_t, d_0 = 0
  std::vector<int> clip_events;     // per round, base-side run
  double measured_smoothness = 0.0;
  double envelope_smoothness = 0.0;  // measured * 1.1 safety factor
  int envelope_violations = 0;
  int recursion_violations = 0;
  // Debug mode: worst gap between the pre-noise upload difference and the
  // post-noise parameter difference (they agree up to rounding because
  // both runs share noise).
  double max_pre_noise_gap = 0.0;
};

// Runs the T-round protocol on both unions with identical noise streams,
// so the per-round parameter difference isolates the one-sample change.
// Deterministic for a fixed (config, pair, seed). Aborts with
// fldp::simulation_error (carrying the round) if parameters leave the
// finite range.
SimRun run_adjacent(const SimConfig& config, const AdjacentPair& pair,
                    std::uint64_t seed);

struct SweepRow {
  std::string label;
  double final_sensitivity = 0.0;
  double max_sensitivity = 0.0;
  double final_envelope = 0.0;
  int envelope_violations = 0;
  int recursion_violations = 0;
};

// One run per labelled config, each on freshly generated data and an
// adjacent pair derived from the shared seed.
std::vector<SweepRow> sweep_sensitivity(
    const std::vector<std::pair<std::string, SimConfig>>& configs,
    std::uint64_t seed);

}  // namespace fldp::sim
