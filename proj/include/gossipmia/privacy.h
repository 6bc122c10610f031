//
// Copyright 2026 The gossipmia Authors
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
//

// DP-SGD gradient sanitization and a Renyi-DP accountant for the plain
// (non-subsampled) Gaussian mechanism.

#ifndef GOSSIPMIA_PRIVACY_H_
#define GOSSIPMIA_PRIVACY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "gossipmia/data.h"
#include "gossipmia/learner.h"
#include "gossipmia/rng.h"

namespace gossipmia {

struct DpConfig {
  bool enabled = false;
  double clip_norm = 1.0;
  double noise_multiplier = 1.0;
  double delta = 1e-5;
};

absl::Status ValidateDpConfig(const DpConfig& cfg);

// Noisy gradient releases of one node.
struct PrivacyLedger {
  int64_t steps = 0;
  double sigma = 0.0;

  void RecordStep() { ++steps; }
};

// Mean of the per-example gradients after scaling each by
// min(1, clip_norm / ||g||).
ParamVector ClipAndAverage(std::span<const ParamVector> per_example,
                           double clip_norm);

// ClipAndAverage plus Gaussian noise of stddev
// noise_multiplier * clip_norm / B on every coordinate.
ParamVector SanitizeGradient(std::span<const ParamVector> per_example,
                             const DpConfig& cfg, Rng& rng);

// Orders 1.5, 2, 2.5, ..., 512.
const std::vector<double>& RdpOrders();

// Epsilon of `steps` compositions of the Gaussian mechanism with noise
// multiplier sigma: min over orders a of steps * a / (2 sigma^2) +
// ln(1/delta) / (a - 1).
double RdpEpsilon(double sigma, int64_t steps, double delta);

// LocalUpdate with every mini-batch gradient sanitized; one ledger step per
// mini-batch. With dp.enabled == false this is exactly LocalUpdate.
ParamVector DpLocalUpdate(const ParamVector& m, const Dataset& train,
                          const SgdConfig& cfg, const DpConfig& dp,
                          PrivacyLedger& ledger, Rng& rng);

}  // namespace gossipmia

#endif  // GOSSIPMIA_PRIVACY_H_
