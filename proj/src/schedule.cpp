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

#include "fldp/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "fldp/errors.hpp"

namespace fldp::schedules {

double lr_at(const Schedule& schedule, int round, int step, int local_steps) {
  switch (schedule.kind) {
    case ScheduleKind::kConstant:
      return schedule.base_rate;
    case ScheduleKind::kCyclicDecay:
      return schedule.base_rate / (step + 1);
    case ScheduleKind::kStageDecay:
      return schedule.base_rate / (round + 1);
    case ScheduleKind::kContinuousDecay:
      return schedule.base_rate /
             (static_cast<double>(round) * local_steps + step + 1);
  }
  throw config_error("lr_at: unknown schedule kind");
}

double lr_sum(const Schedule& schedule, int round, int local_steps) {
  switch (schedule.kind) {
    case ScheduleKind::kConstant:
      return schedule.base_rate * local_steps;
    case ScheduleKind::kStageDecay:
      return schedule.base_rate * local_steps / (round + 1);
    default: {
      double sum = 0.0;
      for (int k = 0; k < local_steps; ++k) {
        sum += lr_at(schedule, round, k, local_steps);
      }
      return sum;
    }
  }
}

double eta_fn(const Schedule& schedule, int round, int local_steps,
              double smoothness) {
  double total = lr_at(schedule, round, 0, local_steps);
  double expansion = 1.0;  // prod_{j<k} (1 + eta_{j,t} L)
  for (int k = 1; k < local_steps; ++k) {
    expansion *= 1.0 + lr_at(schedule, round, k - 1, local_steps) * smoothness;
    total += lr_at(schedule, round, k, local_steps) * expansion;
  }
  return total;
}

double derive_c(int local_steps) {
  double harmonic = 0.0;
  for (int k = local_steps; k >= 1; --k) harmonic += 1.0 / k;
  return harmonic / std::log1p(static_cast<double>(local_steps));
}

double resolve_c(const Schedule& schedule, int local_steps) {
  return schedule.c_const.value_or(derive_c(local_steps));
}

double z_ratio_at(int local_steps, int round) {
  double sum = 0.0;
  for (int k = local_steps - 1; k >= 0; --k) {
    sum += 1.0 / (static_cast<double>(round) * local_steps + k + 1);
  }
  return sum / std::log1p(1.0 / (round + 1.0));
}

double resolve_z(const Schedule& schedule, int local_steps, int rounds) {
  if (schedule.z_const) return *schedule.z_const;
  // z_t <= (K+1)(t+2)/(tK+1) < z_0 for every t >= 64, so the scan window
  // is exhaustive.
  const int window = std::min(rounds, 64);
  double z = 1.0;
  for (int t = 0; t < window; ++t) {
    z = std::max(z, z_ratio_at(local_steps, t));
  }
  return z;
}

}  // namespace fldp::schedules
