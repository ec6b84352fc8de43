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

#include <vector>

#include "fldp/config.hpp"

namespace fldp::schedules {

// Per-round sensitivity coefficients of the recursion
//   ||w_{t+1} - w'_{t+1}|| <= rho_t ||w_t - w'_t|| + gamma_t.
// rho is the model-sensitivity expansion (>= 1 for FedAvg, > 1 for
// FedProx with alpha > L); gamma is the data-sensitivity increment.
struct CoefficientSeries {
  std::vector<double> rho;
  std::vector<double> gamma;
  CoefficientMode mode = CoefficientMode::kTableForm;
};

// Coefficients for every round t = 0..T-1 of the configuration.
//
// Table-form rows (per method/schedule):
//   FedAvg  Constant:   rho = (1+mu L)^K,            gamma = 2 mu V K / m
//   FedAvg  Cyclic:     rho = (1+K)^{c mu L},        gamma = (2cV/m) ln(K+1)
//   FedAvg  Stage:      rho_t = (1+mu L/(t+1))^K,    gamma_t = (2 mu V/m) K/(t+1)
//   FedAvg  Continuous: rho_t = ((t+2)/(t+1))^{z mu L},
//                       gamma_t = (2zV/m) ln((t+2)/(t+1))
//   FedProx (any):      rho = alpha/(alpha-L),       gamma = 2V/(m alpha)
//
// Exact rows evaluate the learning-rate recursions instead; exact FedProx
// is defined for the constant policy only and other schedules fall back
// to the table-form caps.
CoefficientSeries coefficients(const FlConfig& config);

}  // namespace fldp::schedules
