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

#include "gossipmia/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace gossipmia {

absl::Status ValidateDpConfig(const DpConfig& cfg) {
  if (!cfg.enabled) return absl::OkStatus();
  if (!(cfg.clip_norm > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip_norm must be > 0, got ", cfg.clip_norm));
  }
  if (!(cfg.noise_multiplier > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "noise_multiplier must be > 0, got ", cfg.noise_multiplier));
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", cfg.delta));
  }
  return absl::OkStatus();
}

ParamVector ClipAndAverage(std::span<const ParamVector> per_example,
                           double clip_norm) {
  ParamVector mean(per_example.front().layout);
  for (const ParamVector& g : per_example) {
    double sq = 0.0;
    for (double v : g.values) sq += v * v;
    const double norm = std::sqrt(sq);
    const double scale = norm > clip_norm ? clip_norm / norm : 1.0;
    for (size_t i = 0; i < g.size(); ++i) mean.values[i] += scale * g.values[i];
  }
  const double inv = 1.0 / static_cast<double>(per_example.size());
  for (double& v : mean.values) v *= inv;
  return mean;
}

ParamVector SanitizeGradient(std::span<const ParamVector> per_example,
                             const DpConfig& cfg, Rng& rng) {
  ParamVector out = ClipAndAverage(per_example, cfg.clip_norm);
  const double stddev = cfg.noise_multiplier * cfg.clip_norm /
                        static_cast<double>(per_example.size());
  std::normal_distribution<double> noise(0.0, stddev);
  for (double& v : out.values) v += noise(rng);
  return out;
}

const std::vector<double>& RdpOrders() {
  static const std::vector<double>* orders = [] {
    auto* v = new std::vector<double>;
    for (int twice = 3; twice <= 1024; ++twice) v->push_back(twice / 2.0);
    return v;
  }();
  return *orders;
}

double RdpEpsilon(double sigma, int64_t steps, double delta) {
  const double per_order = static_cast<double>(steps) / (2.0 * sigma * sigma);
  const double log_inv_delta = std::log(1.0 / delta);
  double best = std::numeric_limits<double>::infinity();
  for (double alpha : RdpOrders()) {
    best = std::min(best, per_order * alpha + log_inv_delta / (alpha - 1.0));
  }
  return best;
}

ParamVector DpLocalUpdate(const ParamVector& m, const Dataset& train,
                          const SgdConfig& cfg, const DpConfig& dp,
                          PrivacyLedger& ledger, Rng& rng) {
  if (!dp.enabled) return LocalUpdate(m, train, cfg, rng);
  ledger.sigma = dp.noise_multiplier;
  ParamVector theta = m;
  std::vector<double> velocity(theta.size(), 0.0);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = static_cast<size_t>(cfg.batch_size);
  std::vector<ParamVector> per_example;
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      per_example.assign(end - start, ParamVector(theta.layout));
      for (size_t b = start; b < end; ++b) {
        AccumulateSampleGradient(theta, train.samples[order[b]],
                                 per_example[b - start].values);
      }
      ParamVector g = SanitizeGradient(per_example, dp, rng);
      ledger.RecordStep();
      for (size_t i = 0; i < theta.size(); ++i) {
        const double step = g.values[i] + cfg.weight_decay * theta.values[i];
        velocity[i] = cfg.momentum * velocity[i] + step;
        theta.values[i] -= cfg.lr * velocity[i];
      }
    }
  }
  return theta;
}

}  // namespace gossipmia
