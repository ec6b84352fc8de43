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

#include "fldp/coefficients.hpp"

#include <cmath>

#include "fldp/errors.hpp"

namespace fldp {

void validate(const FlConfig& config) {
  if (config.clients < 1) throw config_error("client count must be >= 1");
  if (config.local_steps < 1) throw config_error("local steps must be >= 1");
  if (config.rounds < 1) throw config_error("round count must be >= 1");
  if (!(config.clip_norm > 0.0)) throw config_error("clip norm must be > 0");
  if (!(config.noise_std > 0.0)) throw config_error("noise std must be > 0");
  if (!(config.smoothness > 0.0)) throw config_error("smoothness must be > 0");
  if (!(config.schedule.base_rate > 0.0)) {
    throw config_error("base learning rate must be > 0");
  }
  if (config.schedule.c_const &&
      !(*config.schedule.c_const >= 1.0 && *config.schedule.c_const < 1.543)) {
    throw config_error("cyclic constant c must lie in [1, 1.543)");
  }
  if (config.schedule.z_const && !(*config.schedule.z_const > 1.0)) {
    throw config_error("continuous-decay constant z must be > 1");
  }
  if (config.method.kind == Method::kFedProx) {
    if (!config.method.proximal_weight) {
      throw config_error("FedProx requires a proximal coefficient alpha");
    }
    if (!(*config.method.proximal_weight > config.smoothness)) {
      throw config_error("FedProx accounting requires alpha > L");
    }
  }
}

}  // namespace fldp

namespace fldp::schedules {

namespace {

CoefficientSeries fedavg_table(const FlConfig& config) {
  const int rounds = config.rounds;
  const int steps = config.local_steps;
  const double mu = config.schedule.base_rate;
  const double smooth = config.smoothness;
  const double clip_scale = 2.0 * config.clip_norm / config.clients;

  CoefficientSeries series;
  series.mode = CoefficientMode::kTableForm;
  series.rho.reserve(rounds);
  series.gamma.reserve(rounds);
  switch (config.schedule.kind) {
    case ScheduleKind::kConstant: {
      const double rho = std::exp(steps * std::log1p(mu * smooth));
      const double gamma = clip_scale * mu * steps;
      series.rho.assign(rounds, rho);
      series.gamma.assign(rounds, gamma);
      break;
    }
    case ScheduleKind::kCyclicDecay: {
      const double c = resolve_c(config.schedule, steps);
      const double log_k1 = std::log1p(static_cast<double>(steps));
      const double rho = std::exp(c * mu * smooth * log_k1);
      const double gamma = clip_scale * c * log_k1;
      series.rho.assign(rounds, rho);
      series.gamma.assign(rounds, gamma);
      break;
    }
    case ScheduleKind::kStageDecay: {
      for (int t = 0; t < rounds; ++t) {
        series.rho.push_back(
            std::exp(steps * std::log1p(mu * smooth / (t + 1))));
        series.gamma.push_back(clip_scale * mu * steps / (t + 1));
      }
      break;
    }
    case ScheduleKind::kContinuousDecay: {
      const double z = resolve_z(config.schedule, steps, rounds);
      for (int t = 0; t < rounds; ++t) {
        const double log_step = std::log1p(1.0 / (t + 1.0));
        series.rho.push_back(std::exp(z * mu * smooth * log_step));
        series.gamma.push_back(clip_scale * z * log_step);
      }
      break;
    }
  }
  return series;
}

CoefficientSeries fedavg_exact(const FlConfig& config) {
  CoefficientSeries series;
  series.mode = CoefficientMode::kExact;
  series.rho.reserve(config.rounds);
  series.gamma.reserve(config.rounds);
  const double clip_scale = 2.0 * config.clip_norm / config.clients;
  for (int t = 0; t < config.rounds; ++t) {
    series.rho.push_back(
        1.0 +
        eta_fn(config.schedule, t, config.local_steps, config.smoothness) *
            config.smoothness);
    series.gamma.push_back(clip_scale *
                           lr_sum(config.schedule, t, config.local_steps));
  }
  return series;
}

CoefficientSeries fedprox_table(const FlConfig& config) {
  const double alpha = *config.method.proximal_weight;
  CoefficientSeries series;
  series.mode = CoefficientMode::kTableForm;
  series.rho.assign(config.rounds, alpha / (alpha - config.smoothness));
  series.gamma.assign(config.rounds,
                      2.0 * config.clip_norm / (config.clients * alpha));
  return series;
}

// Constant-rate FedProx recursions evaluated in closed form:
//   rho = alpha/(alpha-L) - L (1 - mu (alpha-L))^K / (alpha-L)
//   gamma = (2V / (m alpha)) (1 - (1 - mu alpha)^K)
CoefficientSeries fedprox_exact(const FlConfig& config) {
  const double alpha = *config.method.proximal_weight;
  const double mu = config.schedule.base_rate;
  if (mu * alpha > 1.0) {
    throw config_error("exact FedProx coefficients require mu * alpha <= 1");
  }
  const double contracted = alpha - config.smoothness;
  const int steps = config.local_steps;
  const double decay_model = std::pow(1.0 - mu * contracted, steps);
  const double rho =
      alpha / contracted - config.smoothness * decay_model / contracted;
  const double decay_data = std::pow(1.0 - mu * alpha, steps);
  const double gamma = 2.0 * config.clip_norm / (config.clients * alpha) *
                       (1.0 - decay_data);
  CoefficientSeries series;
  series.mode = CoefficientMode::kExact;
  series.rho.assign(config.rounds, rho);
  series.gamma.assign(config.rounds, gamma);
  return series;
}

}  // namespace

CoefficientSeries coefficients(const FlConfig& config) {
  validate(config);
  if (config.method.kind == Method::kFedAvg) {
    return config.mode == CoefficientMode::kTableForm ? fedavg_table(config)
                                                      : fedavg_exact(config);
  }
  if (config.mode == CoefficientMode::kExact &&
      config.schedule.kind == ScheduleKind::kConstant) {
    return fedprox_exact(config);
  }
  // The exact FedProx derivation covers the constant policy only; decaying
  // policies use the table-form caps.
  return fedprox_table(config);
}

}  // namespace fldp::schedules
