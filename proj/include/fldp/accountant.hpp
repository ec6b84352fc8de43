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
#include <utility>
#include <vector>

#include "fldp/coefficients.hpp"
#include "fldp/config.hpp"
#include "fldp/tradeoff.hpp"

namespace fldp::accounting {

// Whether the reported closed form coincides with the numerically
// minimized accumulation or only caps it from above.
enum class BoundKind { kExactEquality, kUpperBound };

struct AccountingResult {
  // Minimized worst-case accumulation with the interpolation anchored at
  // round zero; the reported GDP parameter is sqrt(m * h0) / sigma.
  double h0 = 0.0;
  tradeoff::GdpCurve gdp;
  // Recovered interpolation coefficients lambda_1..lambda_T. The last one
  // telescopes to 1; feasibility tracks whether all lie in [0, 1].
  std::vector<double> lambdas;
  bool lambda_feasible = false;
  std::optional<double> closed_form_mu;
  BoundKind bound_kind = BoundKind::kUpperBound;
};

// Minimizes the accumulation over the interpolation coefficients via the
// Cauchy-Schwarz optimum:
//   H0 = (sum_t P_{t+1} gamma_t)^2 / sum_t P_{t+1}^2,
//   P_{t+1} = prod_{j=t+1}^{T-1} rho_j.
// Products are accumulated as log sums, so arbitrarily long horizons stay
// representable as long as H0 itself does. Throws fldp::numeric_error
// when even the final ratio leaves the double range, naming the offending
// magnitude. If the recovered coefficient sequence hits a pole, the
// result keeps its H0 and curve but carries no lambdas and is flagged
// infeasible.
AccountingResult solve_h0(const schedules::CoefficientSeries& coeffs,
                          int clients, double noise_std);

// Forward recursion on the worst-case gap d_t:
//   lambda_{t+1} = C0 P_{t+1} / (rho_t d_t + gamma_t),
//   d_{t+1} = (1 - lambda_{t+1}) (rho_t d_t + gamma_t),  d_0 = 0,
// with C0 = (sum P gamma) / (sum P^2). Returns the sequence and whether
// every coefficient lies in [0, 1]. A vanishing denominator raises
// fldp::numeric_error (degenerate optimum).
std::pair<std::vector<double>, bool> recover_lambdas(
    const schedules::CoefficientSeries& coeffs);

// Closed-form worst-privacy parameter for the configured method and
// schedule (table-form coefficient semantics).
tradeoff::GdpCurve closed_form_bound(const FlConfig& config);

struct ClosedFormCheck {
  double numeric_mu = 0.0;
  double closed_form_mu = 0.0;
  double relative_gap = 0.0;  // (closed - numeric) / closed
  bool equality_expected = false;
  bool ok = false;
};

// Cross-validates the numeric solver against the closed form: equality to
// relative 1e-9 for constant-coefficient cases, numeric <= closed form
// for the stage and continuous schedules.
ClosedFormCheck verify_closed_forms(const FlConfig& config);

// Smallest noise scale meeting the target curve: every bound scales as
// 1/sigma, so sigma = (bound at sigma = 1) / target mu. Throws
// fldp::calibration_error when the target is unattainable.
double calibrate_sigma(const FlConfig& config, const tradeoff::GdpCurve& target);
double calibrate_sigma(const FlConfig& config, const tradeoff::EpsDelta& target);

// Independent per-round Gaussian composition with no shifted
// interpolation: mu = (sqrt(m)/sigma) sqrt(sum_t gamma_t^2). An
// illustrative divergence baseline, not a reimplementation of any prior
// accountant; grows as sqrt(T) for constant coefficients.
tradeoff::GdpCurve naive_composition_baseline(const FlConfig& config);

// Full accounting pass: coefficients, numeric solve, lambda recovery, and
// the closed form with its equality classification.
AccountingResult account(const FlConfig& config);

}  // namespace fldp::accounting
