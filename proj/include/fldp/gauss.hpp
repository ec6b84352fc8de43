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

namespace fldp::gauss {

// Standard normal density.
double std_normal_pdf(double x);

// Standard normal CDF, absolute error below 1e-14 over the full double
// range. Throws std::domain_error on non-finite input.
double std_normal_cdf(double x);

// log of the standard normal CDF; stays finite far into the lower tail
// where the CDF itself underflows.
double std_normal_log_cdf(double x);

// Inverse of std_normal_cdf. p must lie in [0, 1]; the boundaries map to
// -infinity and +infinity so that tail evaluations of trade-off curves
// saturate instead of erroring. Throws std::domain_error outside [0, 1].
double std_normal_quantile(double p);

}  // namespace fldp::gauss
