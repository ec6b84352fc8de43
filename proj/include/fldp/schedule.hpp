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

#include <optional>

namespace fldp::schedules {

// Learning-rate policy over rounds t and local steps k:
//   Constant:        mu
//   CyclicDecay:     mu / (k + 1)        (reset every round)
//   StageDecay:      mu / (t + 1)        (constant within a round)
//   ContinuousDecay: mu / (t*K + k + 1)
enum class ScheduleKind { kConstant, kCyclicDecay, kStageDecay, kContinuousDecay };

struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double base_rate = 0.0;  // mu > 0
  // Overrides for the table-form bounding constants; derived from K (and
  // the horizon, for z) when absent.
  std::optional<double> c_const;
  std::optional<double> z_const;
};

// Learning rate eta_{k,t}. local_steps is only consulted by the
// continuous-decay policy.
double lr_at(const Schedule& schedule, int round, int step, int local_steps);

// Exact partial sum sum_{k=0}^{K-1} eta_{k,t} at round t.
double lr_sum(const Schedule& schedule, int round, int local_steps);

// The accumulated learning-rate function
//   eta(K, t) = eta_{0,t} + sum_{k>=1} eta_{k,t} prod_{j<k} (1 + eta_{j,t} L),
// whose product with L is the per-round model-sensitivity expansion minus
// one. For the constant policy it telescopes to ((1+mu L)^K - 1) / L.
double eta_fn(const Schedule& schedule, int round, int local_steps,
              double smoothness);

// Ratio of the K-th harmonic sum to ln(K+1); lies in [1, 1.543) and makes
// the cyclic-decay table coefficients match the true learning-rate sum.
double derive_c(int local_steps);

// Cyclic bounding constant: override when present, derive_c otherwise.
double resolve_c(const Schedule& schedule, int local_steps);

// Per-round continuous-decay matching ratio
//   z_t = (sum_k 1/(tK+k+1)) / ln((t+2)/(t+1)).
// The true ratio depends on the round; z_ratio_at records it exactly.
double z_ratio_at(int local_steps, int round);

// Continuous-decay bounding constant: z_ratio_at maximized over the
// horizon (override wins when present). The ratio peaks at t = 0 and
// decays toward 1, so only an initial window needs scanning.
double resolve_z(const Schedule& schedule, int local_steps, int rounds);

}  // namespace fldp::schedules
