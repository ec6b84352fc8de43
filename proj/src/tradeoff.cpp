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

#include "fldp/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fldp/errors.hpp"
#include "fldp/gauss.hpp"
#include "fldp/rng.hpp"

namespace fldp::tradeoff {

namespace {

void check_mu(double mu, const char* op) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::domain_error(std::string(op) + ": mu must be finite and >= 0");
  }
}

double delta_at(double mu, double epsilon) {
  // e^eps * Phi(b) evaluated in the log domain; the exponent never exceeds
  // log Phi(a) <= 0, so the exp cannot overflow.
  const double a = -epsilon / mu + 0.5 * mu;
  const double b = -epsilon / mu - 0.5 * mu;
  const double term1 = gauss::std_normal_cdf(a);
  const double term2 = std::exp(epsilon + gauss::std_normal_log_cdf(b));
  return std::clamp(term1 - term2, 0.0, 1.0);
}

}  // namespace

double gdp_tradeoff(const GdpCurve& curve, double alpha) {
  check_mu(curve.mu, "gdp_tradeoff");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("gdp_tradeoff: alpha outside [0, 1]");
  }
  // Phi^{-1}(1 - alpha) = -Phi^{-1}(alpha) keeps full precision for small
  // alpha; the boundaries saturate through the infinity sentinels.
  const double shifted = -gauss::std_normal_quantile(alpha) - curve.mu;
  if (std::isinf(shifted)) return shifted > 0.0 ? 1.0 : 0.0;
  return gauss::std_normal_cdf(shifted);
}

GdpCurve compose_gdp(std::span<const GdpCurve> curves) {
  double sum_sq = 0.0;
  for (const GdpCurve& c : curves) {
    check_mu(c.mu, "compose_gdp");
    sum_sq += c.mu * c.mu;
  }
  return GdpCurve{std::sqrt(sum_sq)};
}

EpsDelta gdp_to_eps_delta(const GdpCurve& curve, double epsilon) {
  check_mu(curve.mu, "gdp_to_eps_delta");
  if (!(epsilon >= 0.0)) {
    throw std::domain_error("gdp_to_eps_delta: epsilon must be >= 0");
  }
  if (curve.mu == 0.0) return EpsDelta{epsilon, 0.0};
  return EpsDelta{epsilon, delta_at(curve.mu, epsilon)};
}

RenyiBudget gdp_to_rdp(const GdpCurve& curve, double order) {
  check_mu(curve.mu, "gdp_to_rdp");
  if (!(order > 1.0)) {
    throw std::domain_error("gdp_to_rdp: order must be > 1");
  }
  return RenyiBudget{order, 0.5 * curve.mu * curve.mu * order};
}

GdpCurve eps_delta_to_gdp(const EpsDelta& target) {
  if (!(target.delta > 0.0 && target.delta < 1.0)) {
    throw std::domain_error("eps_delta_to_gdp: delta must lie in (0, 1)");
  }
  if (!(target.epsilon >= 0.0)) {
    throw std::domain_error("eps_delta_to_gdp: epsilon must be >= 0");
  }
  // delta_at is strictly increasing in mu at fixed epsilon. Expand the
  // bracket geometrically until the target is enclosed, then bisect.
  double lo = 1e-8;
  double hi = 100.0;
  while (delta_at(lo, target.epsilon) > target.delta && lo > 1e-300) lo /= 8.0;
  while (delta_at(hi, target.epsilon) < target.delta && hi < 1e300) hi *= 8.0;
  if (delta_at(hi, target.epsilon) < target.delta) {
    throw std::domain_error("eps_delta_to_gdp: target delta not bracketed");
  }
  while ((hi - lo) > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (delta_at(mid, target.epsilon) <= target.delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return GdpCurve{lo};
}

std::vector<McPoint> mc_tradeoff_estimate(double mu,
                                          std::span<const double> alpha_grid,
                                          std::int64_t samples,
                                          std::uint64_t seed) {
  check_mu(mu, "mc_tradeoff_estimate");
  if (samples < 10000) {
    throw std::domain_error("mc_tradeoff_estimate: samples must be >= 1e4");
  }
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(samples);
  std::vector<double> null_draws(n);
  std::vector<double> alt_draws(n);
  for (std::size_t i = 0; i < n; ++i) null_draws[i] = rng.normal();
  for (std::size_t i = 0; i < n; ++i) alt_draws[i] = mu + rng.normal();
  std::sort(null_draws.begin(), null_draws.end());
  std::sort(alt_draws.begin(), alt_draws.end());

  std::vector<McPoint> points;
  points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::domain_error("mc_tradeoff_estimate: alpha outside [0, 1]");
    }
    // The likelihood ratio is monotone in the observation, so the exact
    // level-alpha test rejects at or above the closed-form threshold.
    const double threshold = -gauss::std_normal_quantile(alpha);
    McPoint p;
    if (std::isinf(threshold)) {
      p.alpha = threshold > 0.0 ? 0.0 : 1.0;
      p.beta = threshold > 0.0 ? 1.0 : 0.0;
    } else {
      const auto null_accepts =
          std::lower_bound(null_draws.begin(), null_draws.end(), threshold) -
          null_draws.begin();
      const auto alt_accepts =
          std::lower_bound(alt_draws.begin(), alt_draws.end(), threshold) -
          alt_draws.begin();
      p.alpha = 1.0 - static_cast<double>(null_accepts) / static_cast<double>(n);
      p.beta = static_cast<double>(alt_accepts) / static_cast<double>(n);
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace fldp::tradeoff
