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

#include "fldp/schedule.hpp"

namespace fldp {

enum class Method { kFedAvg, kFedProx };

struct MethodSpec {
  Method kind = Method::kFedAvg;
  // Proximal coefficient alpha; FedProx accounting requires alpha > L.
  std::optional<double> proximal_weight;
};

// Per-round sensitivity coefficients come in two flavors: the exact
// learning-rate recursions, or the table-form bounds used by the
// closed-form bounds.
enum class CoefficientMode { kExact, kTableForm };

// Full accounting context for one federated training configuration.
struct FlConfig {
  int clients = 1;        // m
  int local_steps = 1;    // K
  int rounds = 1;         // T
  double clip_norm = 1.0;  // V
  double noise_std = 1.0;  // sigma
  double smoothness = 1.0; // L
  MethodSpec method;
  schedules::Schedule schedule;
  CoefficientMode mode = CoefficientMode::kTableForm;
};

// Throws fldp::config_error on any violated constraint (non-positive
// scales, K = 0, FedProx without alpha > L, out-of-range c or z).
void validate(const FlConfig& config);

}  // namespace fldp
