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

// One-hidden-layer ReLU perceptron with softmax output, trained by SGD.

#ifndef GOSSIPMIA_LEARNER_H_
#define GOSSIPMIA_LEARNER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gossipmia/data.h"
#include "gossipmia/rng.h"

namespace gossipmia {

struct ModelLayout {
  int input_dim = 1;
  int hidden = 1;
  int num_classes = 2;

  // d*h + h + h*C + C
  size_t num_params() const {
    const size_t d = input_dim, h = hidden, c = num_classes;
    return d * h + h + h * c + c;
  }
  friend bool operator==(const ModelLayout&, const ModelLayout&) = default;
};

// Flat parameters in the order W1 (h x d, row-major), b1, W2 (C x h), b2.
struct ParamVector {
  ModelLayout layout;
  std::vector<double> values;

  ParamVector() = default;
  explicit ParamVector(const ModelLayout& l)
      : layout(l), values(l.num_params(), 0.0) {}

  size_t size() const { return values.size(); }
  bool AllFinite() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

struct SgdConfig {
  double lr = 0.01;
  double momentum = 0.0;
  double weight_decay = 5e-4;
  int local_epochs = 3;
  int batch_size = 32;
};

absl::Status ValidateSgdConfig(const SgdConfig& cfg);

// Kaiming normal weights (variance 2 / fan_in), zero biases.
ParamVector InitModel(const ModelLayout& layout, uint64_t seed);

// Class distribution of the model at x. Requires x.size() == input_dim.
std::vector<double> Forward(const ParamVector& m, std::span<const double> x);

struct LossAndGradient {
  double loss = 0.0;
  ParamVector grad;
};

// Mean cross-entropy over the batch and its exact gradient.
LossAndGradient LossAndGrad(const ParamVector& m,
                            std::span<const Sample> batch);
LossAndGradient LossAndGrad(const ParamVector& m, const Dataset& ds,
                            std::span<const size_t> indices);

// Adds the cross-entropy gradient of one sample to `grad` and returns the
// sample loss.
double AccumulateSampleGradient(const ParamVector& m, const Sample& sample,
                                std::vector<double>& grad);

// local_epochs passes of shuffled mini-batch SGD. Weight decay enters the
// gradient as weight_decay * theta; the momentum buffer starts at zero on
// every call.
ParamVector LocalUpdate(const ParamVector& m, const Dataset& train,
                        const SgdConfig& cfg, Rng& rng);

absl::StatusOr<ParamVector> AverageModels(std::span<const ParamVector> models);

// Top-1 accuracy; argmax ties go to the smallest class id.
double Accuracy(const ParamVector& m, const Dataset& ds);

double GeneralizationError(const ParamVector& m, const NodeSplit& split);

// Layout as three little-endian uint64 values, then the parameters as
// little-endian IEEE-754 doubles.
void WriteModel(const ParamVector& m, std::ostream& out);
absl::StatusOr<ParamVector> ReadModel(std::istream& in);

}  // namespace gossipmia

#endif  // GOSSIPMIA_LEARNER_H_
