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

#include "gossipmia/learner.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "absl/strings/str_cat.h"

namespace gossipmia {
namespace {

struct Offsets {
  size_t w1, b1, w2, b2;
  explicit Offsets(const ModelLayout& l) {
    const size_t d = l.input_dim, h = l.hidden, c = l.num_classes;
    w1 = 0;
    b1 = h * d;
    w2 = b1 + h;
    b2 = w2 + c * h;
  }
};

// Hidden pre-activations and softmax output for one input.
struct Activations {
  std::vector<double> pre;
  std::vector<double> probs;
  double log_normalizer = 0.0;  // logsumexp of the logits
  std::vector<double> logits;
};

void Propagate(const ParamVector& m, std::span<const double> x,
               Activations& act) {
  const ModelLayout& l = m.layout;
  const Offsets o(l);
  const double* p = m.values.data();
  const int d = l.input_dim, h = l.hidden, c = l.num_classes;
  act.pre.assign(h, 0.0);
  for (int j = 0; j < h; ++j) {
    const double* row = p + o.w1 + static_cast<size_t>(j) * d;
    double acc = p[o.b1 + j];
    for (int i = 0; i < d; ++i) acc += row[i] * x[i];
    act.pre[j] = acc;
  }
  act.logits.assign(c, 0.0);
  for (int k = 0; k < c; ++k) {
    const double* row = p + o.w2 + static_cast<size_t>(k) * h;
    double acc = p[o.b2 + k];
    for (int j = 0; j < h; ++j) acc += row[j] * std::max(act.pre[j], 0.0);
    act.logits[k] = acc;
  }
  const double top = *std::max_element(act.logits.begin(), act.logits.end());
  double total = 0.0;
  act.probs.resize(c);
  for (int k = 0; k < c; ++k) {
    act.probs[k] = std::exp(act.logits[k] - top);
    total += act.probs[k];
  }
  for (double& q : act.probs) q /= total;
  act.log_normalizer = top + std::log(total);
}

int ArgMax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

void PutU64(std::ostream& out, uint64_t v) {
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

bool GetU64(std::istream& in, uint64_t& v) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
  v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<uint64_t>(bytes[b]) << (8 * b);
  return true;
}

}  // namespace

bool ParamVector::AllFinite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

absl::Status ValidateSgdConfig(const SgdConfig& cfg) {
  if (!(cfg.lr >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("lr must be >= 0, got ", cfg.lr));
  }
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("momentum must lie in [0, 1), got ", cfg.momentum));
  }
  if (!(cfg.weight_decay >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("weight_decay must be >= 0, got ", cfg.weight_decay));
  }
  if (cfg.local_epochs < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("local_epochs must be >= 1, got ", cfg.local_epochs));
  }
  if (cfg.batch_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("batch_size must be >= 1, got ", cfg.batch_size));
  }
  return absl::OkStatus();
}

ParamVector InitModel(const ModelLayout& layout, uint64_t seed) {
  ParamVector m(layout);
  const Offsets o(layout);
  Rng rng = MakeRng(seed);
  std::normal_distribution<double> w1(0.0, std::sqrt(2.0 / layout.input_dim));
  std::normal_distribution<double> w2(0.0, std::sqrt(2.0 / layout.hidden));
  for (size_t i = o.w1; i < o.b1; ++i) m.values[i] = w1(rng);
  for (size_t i = o.w2; i < o.b2; ++i) m.values[i] = w2(rng);
  return m;
}

std::vector<double> Forward(const ParamVector& m, std::span<const double> x) {
  Activations act;
  Propagate(m, x, act);
  return std::move(act.probs);
}

double AccumulateSampleGradient(const ParamVector& m, const Sample& sample,
                                std::vector<double>& grad) {
  const ModelLayout& l = m.layout;
  const Offsets o(l);
  const int d = l.input_dim, h = l.hidden, c = l.num_classes;
  Activations act;
  Propagate(m, sample.features, act);
  const double* p = m.values.data();
  double* g = grad.data();

  // d loss / d logits = probs - onehot(y)
  std::vector<double> dlogits = act.probs;
  dlogits[sample.label] -= 1.0;
  std::vector<double> dhidden(h, 0.0);
  for (int k = 0; k < c; ++k) {
    const double dk = dlogits[k];
    double* gw2 = g + o.w2 + static_cast<size_t>(k) * h;
    const double* w2 = p + o.w2 + static_cast<size_t>(k) * h;
    for (int j = 0; j < h; ++j) {
      gw2[j] += dk * std::max(act.pre[j], 0.0);
      dhidden[j] += w2[j] * dk;
    }
    g[o.b2 + k] += dk;
  }
  for (int j = 0; j < h; ++j) {
    if (act.pre[j] <= 0.0) continue;
    const double dj = dhidden[j];
    double* gw1 = g + o.w1 + static_cast<size_t>(j) * d;
    for (int i = 0; i < d; ++i) gw1[i] += dj * sample.features[i];
    g[o.b1 + j] += dj;
  }
  return act.log_normalizer - act.logits[sample.label];
}

LossAndGradient LossAndGrad(const ParamVector& m,
                            std::span<const Sample> batch) {
  LossAndGradient out{0.0, ParamVector(m.layout)};
  for (const Sample& s : batch) {
    out.loss += AccumulateSampleGradient(m, s, out.grad.values);
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  out.loss *= scale;
  for (double& v : out.grad.values) v *= scale;
  return out;
}

LossAndGradient LossAndGrad(const ParamVector& m, const Dataset& ds,
                            std::span<const size_t> indices) {
  LossAndGradient out{0.0, ParamVector(m.layout)};
  for (size_t idx : indices) {
    out.loss += AccumulateSampleGradient(m, ds.samples[idx], out.grad.values);
  }
  const double scale = 1.0 / static_cast<double>(indices.size());
  out.loss *= scale;
  for (double& v : out.grad.values) v *= scale;
  return out;
}

ParamVector LocalUpdate(const ParamVector& m, const Dataset& train,
                        const SgdConfig& cfg, Rng& rng) {
  ParamVector theta = m;
  std::vector<double> velocity(theta.size(), 0.0);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = static_cast<size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      LossAndGradient lg = LossAndGrad(
          theta, train, std::span<const size_t>(order).subspan(start, end - start));
      for (size_t i = 0; i < theta.size(); ++i) {
        const double g = lg.grad.values[i] + cfg.weight_decay * theta.values[i];
        velocity[i] = cfg.momentum * velocity[i] + g;
        theta.values[i] -= cfg.lr * velocity[i];
      }
    }
  }
  return theta;
}

absl::StatusOr<ParamVector> AverageModels(std::span<const ParamVector> models) {
  if (models.empty()) {
    return absl::InvalidArgumentError("cannot average an empty model list");
  }
  // Running mean: identical inputs reproduce themselves bit for bit.
  ParamVector mean = models.front();
  for (size_t j = 1; j < models.size(); ++j) {
    const ParamVector& m = models[j];
    if (!(m.layout == mean.layout) || m.size() != mean.size()) {
      return absl::InvalidArgumentError("averaging models of different layouts");
    }
    const double weight = 1.0 / static_cast<double>(j + 1);
    for (size_t i = 0; i < m.size(); ++i) {
      mean.values[i] += (m.values[i] - mean.values[i]) * weight;
    }
  }
  return mean;
}

double Accuracy(const ParamVector& m, const Dataset& ds) {
  if (ds.empty()) return 0.0;
  Activations act;
  size_t correct = 0;
  for (const Sample& s : ds.samples) {
    Propagate(m, s.features, act);
    if (ArgMax(act.probs) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double GeneralizationError(const ParamVector& m, const NodeSplit& split) {
  return Accuracy(m, split.train) - Accuracy(m, split.test);
}

void WriteModel(const ParamVector& m, std::ostream& out) {
  PutU64(out, static_cast<uint64_t>(m.layout.input_dim));
  PutU64(out, static_cast<uint64_t>(m.layout.hidden));
  PutU64(out, static_cast<uint64_t>(m.layout.num_classes));
  for (double v : m.values) PutU64(out, std::bit_cast<uint64_t>(v));
}

absl::StatusOr<ParamVector> ReadModel(std::istream& in) {
  uint64_t dims[3];
  for (uint64_t& v : dims) {
    if (!GetU64(in, v)) return absl::DataLossError("truncated model header");
  }
  constexpr uint64_t kMaxDim = 1u << 24;
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0 || dims[0] > kMaxDim ||
      dims[1] > kMaxDim || dims[2] > kMaxDim) {
    return absl::DataLossError("model header has an invalid layout");
  }
  ModelLayout layout{static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                     static_cast<int>(dims[2])};
  ParamVector m(layout);
  for (double& v : m.values) {
    uint64_t bits = 0;
    if (!GetU64(in, bits)) return absl::DataLossError("truncated model body");
    v = std::bit_cast<double>(bits);
  }
  return m;
}

}  // namespace gossipmia
