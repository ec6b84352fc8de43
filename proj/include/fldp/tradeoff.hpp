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
#include <span>
#include <vector>

namespace fldp::tradeoff {

// Gaussian trade-off curve between N(0,1) and N(mu,1); mu = 0 is perfect
// indistinguishability. Smaller mu means stronger privacy.
struct GdpCurve {
  double mu = 0.0;
};

struct EpsDelta {
  double epsilon = 0.0;
  double delta = 0.0;
};

struct RenyiBudget {
  double order = 0.0;
  double epsilon = 0.0;
};

// Type-II error of the optimal test at type-I budget alpha:
//   beta = Phi(Phi^{-1}(1 - alpha) - mu).
// alpha outside [0, 1] or mu < 0 throws std::domain_error.
double gdp_tradeoff(const GdpCurve& curve, double alpha);

// Product rule for Gaussian curves: composite mu = sqrt(sum mu_i^2).
GdpCurve compose_gdp(std::span<const GdpCurve> curves);

// delta(epsilon) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
// mu = 0 short-circuits to delta = 0. Negative epsilon throws.
EpsDelta gdp_to_eps_delta(const GdpCurve& curve, double epsilon);

// (order, 0.5 * mu^2 * order) for any order > 1.
RenyiBudget gdp_to_rdp(const GdpCurve& curve, double order);

// Largest mu whose delta(epsilon) stays at or below the target delta,
// located by bisection to relative tolerance 1e-10. Requires
// 0 < delta < 1.
GdpCurve eps_delta_to_gdp(const EpsDelta& target);

struct McPoint {
  double alpha = 0.0;  // realized empirical type-I error
  double beta = 0.0;   // empirical type-II error
};

// Monte-Carlo estimate of the trade-off curve: `samples` draws from each
// of N(0,1) and N(mu,1), put through the exact likelihood-ratio threshold
// test at level alpha (a threshold on the sample value). Returns the
// realized type-I error alongside the empirical type-II error.
// Deterministic for a fixed seed; requires samples >= 1e4.
std::vector<McPoint> mc_tradeoff_estimate(double mu,
                                          std::span<const double> alpha_grid,
                                          std::int64_t samples,
                                          std::uint64_t seed);

}  // namespace fldp::tradeoff
