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

#include "fldp/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fldp/errors.hpp"

namespace fldp::accounting {

namespace {

constexpr double kMaxExpArg = 700.0;  // exp() overflows just past 709

double log_sum_exp(const std::vector<double>& logs) {
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

// Suffix log-products p[t] = log prod_{j=t+1}^{T-1} rho_j.
std::vector<double> suffix_log_products(const std::vector<double>& rho) {
  const std::size_t rounds = rho.size();
  std::vector<double> logs(rounds, 0.0);
  for (std::size_t t = rounds - 1; t-- > 0;) {
    logs[t] = logs[t + 1] + std::log(rho[t + 1]);
  }
  return logs;
}

void check_series(const schedules::CoefficientSeries& coeffs) {
  if (coeffs.rho.empty() || coeffs.rho.size() != coeffs.gamma.size()) {
    throw config_error("coefficient series must be non-empty and aligned");
  }
  for (double r : coeffs.rho) {
    if (!(r >= 1.0) || !std::isfinite(r)) {
      throw config_error("model-sensitivity coefficients must be >= 1");
    }
  }
  for (double g : coeffs.gamma) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw config_error("data-sensitivity coefficients must be > 0");
    }
  }
}

struct H0Logs {
  double numerator;    // log sum_t P_{t+1} gamma_t
  double denominator;  // log sum_t P_{t+1}^2
};

H0Logs h0_logs(const schedules::CoefficientSeries& coeffs) {
  const std::vector<double> suffix = suffix_log_products(coeffs.rho);
  std::vector<double> num_terms(suffix.size());
  std::vector<double> den_terms(suffix.size());
  for (std::size_t t = 0; t < suffix.size(); ++t) {
    num_terms[t] = suffix[t] + std::log(coeffs.gamma[t]);
    den_terms[t] = 2.0 * suffix[t];
  }
  return H0Logs{log_sum_exp(num_terms), log_sum_exp(den_terms)};
}

// sqrt((rho + 1)/(rho - 1) * (rho^T - 1)/(rho^T + 1)) for log_rho > 0,
// expressed through tanh so that huge horizons saturate instead of
// overflowing.
double geometric_factor(double log_rho, double rounds) {
  return std::sqrt(std::tanh(0.5 * rounds * log_rho) /
                   std::tanh(0.5 * log_rho));
}

bool closed_form_is_equality(const FlConfig& config) {
  if (config.method.kind == Method::kFedProx) {
    return config.mode == CoefficientMode::kTableForm;
  }
  switch (config.schedule.kind) {
    case schedules::ScheduleKind::kConstant:
      // Exact and table-form coefficients coincide for the constant rate.
      return true;
    case schedules::ScheduleKind::kCyclicDecay:
      return config.mode == CoefficientMode::kTableForm;
    default:
      return false;
  }
}

}  // namespace

AccountingResult solve_h0(const schedules::CoefficientSeries& coeffs,
                          int clients, double noise_std) {
  check_series(coeffs);
  if (clients < 1) throw config_error("client count must be >= 1");
  if (!(noise_std > 0.0)) throw config_error("noise std must be > 0");

  const H0Logs logs = h0_logs(coeffs);
  const double log_h0 = 2.0 * logs.numerator - logs.denominator;
  if (log_h0 > kMaxExpArg) {
    throw numeric_error("solve_h0: accumulation exceeds double range, log H0 = " +
                        std::to_string(log_h0));
  }
  const double log_mu =
      0.5 * (std::log(static_cast<double>(clients)) + log_h0) -
      std::log(noise_std);
  if (log_mu > kMaxExpArg) {
    throw numeric_error("solve_h0: GDP parameter exceeds double range, log mu = " +
                        std::to_string(log_mu));
  }

  AccountingResult result;
  result.h0 = std::exp(log_h0);
  result.gdp = tradeoff::GdpCurve{std::exp(log_mu)};
  try {
    auto [lambdas, feasible] = recover_lambdas(coeffs);
    result.lambdas = std::move(lambdas);
    result.lambda_feasible = feasible;
  } catch (const numeric_error&) {
    // A pole in the recovered sequence does not invalidate the minimized
    // value itself; report the accumulation with no coefficients.
    result.lambdas.clear();
    result.lambda_feasible = false;
  }
  return result;
}

std::pair<std::vector<double>, bool> recover_lambdas(
    const schedules::CoefficientSeries& coeffs) {
  check_series(coeffs);
  const std::vector<double> suffix = suffix_log_products(coeffs.rho);
  const H0Logs logs = h0_logs(coeffs);
  const double log_c0 = logs.numerator - logs.denominator;

  // Eliminating the worst-case gap from the optimality condition gives
  //   lambda_{t+1} = C0 P_{t+1}^2 / (C0 P_{t+1}^2 - S_{t+1}),
  //   S_{t+1} = sum_{s>t} (P_{s+1} gamma_s - C0 P_{s+1}^2),
  // so the terminal coefficient is exactly 1 and no forward cancellation
  // can accumulate. The ratio r_t = S_t / (C0 P_t^2) obeys the backward
  // recursion r_t = (gamma_t/(C0 P_{t+1}) - 1 + r_{t+1}) / rho_t^2 and is
  // carried in sign/log-magnitude form because it spans the full
  // exponent range on long horizons.
  const std::size_t rounds = coeffs.rho.size();
  std::vector<double> lambdas(rounds);
  bool feasible = true;
  double r_sign = 0.0;  // r = r_sign * exp(r_log); sign 0 means r = 0
  double r_log = 0.0;
  for (std::size_t t = rounds; t-- > 0;) {
    double lambda;
    if (r_sign == 0.0) {
      lambda = 1.0;
    } else if (r_log > 700.0) {
      lambda = -r_sign * std::exp(-r_log);  // 1/(1 - r) ~ -1/r
    } else {
      const double r = r_sign * std::exp(r_log);
      if (std::abs(1.0 - r) <= 1e-15 * (1.0 + std::abs(r))) {
        throw numeric_error(
            "recover_lambdas: degenerate optimum, vanishing gap denominator "
            "at round " +
            std::to_string(t));
      }
      lambda = 1.0 / (1.0 - r);
    }
    lambdas[t] = lambda;
    if (lambda < -1e-9 || lambda > 1.0 + 1e-9) feasible = false;

    // advance r_{t+1} -> r_t
    const double g_log = std::log(coeffs.gamma[t]) - log_c0 - suffix[t];
    const double peak = std::max({g_log, 0.0, r_sign == 0.0 ? -1e300 : r_log});
    double v = std::exp(g_log - peak) - std::exp(-peak);
    if (r_sign != 0.0) v += r_sign * std::exp(r_log - peak);
    if (v == 0.0) {
      r_sign = 0.0;
      r_log = 0.0;
    } else {
      r_sign = v > 0.0 ? 1.0 : -1.0;
      r_log = peak + std::log(std::abs(v)) - 2.0 * std::log(coeffs.rho[t]);
    }
  }
  return {std::move(lambdas), feasible};
}

tradeoff::GdpCurve closed_form_bound(const FlConfig& config) {
  validate(config);
  const double root_m = std::sqrt(static_cast<double>(config.clients));
  const double sigma = config.noise_std;
  const double clip = config.clip_norm;
  const double mu = config.schedule.base_rate;
  const double smooth = config.smoothness;
  const int steps = config.local_steps;
  const double rounds = static_cast<double>(config.rounds);

  if (config.method.kind == Method::kFedProx) {
    const double alpha = *config.method.proximal_weight;
    const double log_rho = -std::log1p(-smooth / alpha);
    const double value = 2.0 * clip / (root_m * alpha * sigma) *
                         std::sqrt((2.0 * alpha - smooth) / smooth) *
                         std::sqrt(std::tanh(0.5 * rounds * log_rho));
    return tradeoff::GdpCurve{value};
  }
  switch (config.schedule.kind) {
    case schedules::ScheduleKind::kConstant: {
      const double log_rho = steps * std::log1p(mu * smooth);
      return tradeoff::GdpCurve{2.0 * mu * clip * steps / (root_m * sigma) *
                                geometric_factor(log_rho, rounds)};
    }
    case schedules::ScheduleKind::kCyclicDecay: {
      const double c = schedules::resolve_c(config.schedule, steps);
      const double log_k1 = std::log1p(static_cast<double>(steps));
      const double log_rho = c * mu * smooth * log_k1;
      return tradeoff::GdpCurve{2.0 * c * clip * log_k1 / (root_m * sigma) *
                                geometric_factor(log_rho, rounds)};
    }
    case schedules::ScheduleKind::kStageDecay:
      return tradeoff::GdpCurve{2.0 * mu * clip * steps / (root_m * sigma) *
                                std::sqrt(2.0 - 1.0 / rounds)};
    case schedules::ScheduleKind::kContinuousDecay: {
      const double z =
          schedules::resolve_z(config.schedule, steps, config.rounds);
      return tradeoff::GdpCurve{2.0 * z * clip / (root_m * sigma) *
                                std::sqrt(2.0 - 1.0 / rounds)};
    }
  }
  throw config_error("closed_form_bound: unknown schedule kind");
}

ClosedFormCheck verify_closed_forms(const FlConfig& config) {
  FlConfig table = config;
  table.mode = CoefficientMode::kTableForm;
  const auto series = schedules::coefficients(table);
  const AccountingResult numeric =
      solve_h0(series, table.clients, table.noise_std);
  const tradeoff::GdpCurve closed = closed_form_bound(table);

  ClosedFormCheck check;
  check.numeric_mu = numeric.gdp.mu;
  check.closed_form_mu = closed.mu;
  check.relative_gap = (closed.mu - numeric.gdp.mu) / closed.mu;
  check.equality_expected = closed_form_is_equality(table);
  if (check.equality_expected) {
    check.ok = std::abs(check.relative_gap) <= 1e-9;
  } else {
    check.ok = check.relative_gap >= -1e-12;
  }
  return check;
}

double calibrate_sigma(const FlConfig& config,
                       const tradeoff::GdpCurve& target) {
  if (!(target.mu > 0.0) || !std::isfinite(target.mu)) {
    throw calibration_error("calibrate_sigma: target GDP parameter must be > 0");
  }
  FlConfig unit = config;
  unit.noise_std = 1.0;
  const auto series = schedules::coefficients(unit);
  const double bound_at_unit_noise = solve_h0(series, unit.clients, 1.0).gdp.mu;
  return bound_at_unit_noise / target.mu;
}

double calibrate_sigma(const FlConfig& config,
                       const tradeoff::EpsDelta& target) {
  return calibrate_sigma(config, tradeoff::eps_delta_to_gdp(target));
}

tradeoff::GdpCurve naive_composition_baseline(const FlConfig& config) {
  FlConfig table = config;
  table.mode = CoefficientMode::kTableForm;
  const auto series = schedules::coefficients(table);
  double sum_sq = 0.0;
  for (double g : series.gamma) sum_sq += g * g;
  return tradeoff::GdpCurve{std::sqrt(static_cast<double>(config.clients) *
                                      sum_sq) /
                            config.noise_std};
}

AccountingResult account(const FlConfig& config) {
  validate(config);
  const auto series = schedules::coefficients(config);
  AccountingResult result = solve_h0(series, config.clients, config.noise_std);
  result.closed_form_mu = closed_form_bound(config).mu;
  result.bound_kind = closed_form_is_equality(config)
                          ? BoundKind::kExactEquality
                          : BoundKind::kUpperBound;
  return result;
}

}  // namespace fldp::accounting
