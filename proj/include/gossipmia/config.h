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

// Flat key=value experiment configuration.
//
// One "key = value" pair per line; blank lines and lines starting with '#'
// are ignored. Unknown keys are rejected. Keys and defaults:
//
//   protocol=base            base | samo
//   topology=static          static | dynamic
//   n=150  k=5  rounds=250  ticks_per_round=100  mu=100  sigma2=100
//   lr=0.01  momentum=0  weight_decay=0.0005  local_epochs=3  batch_size=32
//   classes=10  dim=32  per_class=300  sep=3  hidden=64
//   partition=iid            iid | dirichlet
//   beta=0.5  test_frac=0.5
//   canaries=0  attack_size=50  fpr_cap=0.01
//   dp_enabled=false  clip_norm=1  noise_multiplier=1  delta=1e-05
//   seed=0  repeat=1  out_dir=out
//   save_models=false  dump_scores=false
//   lambda_k=2,5,10,25  lambda_iterations=20  lambda_runs=50
//   lambda_modes=static,dynamic

#ifndef GOSSIPMIA_CONFIG_H_
#define GOSSIPMIA_CONFIG_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/mixmat.h"
#include "gossipmia/protocol.h"

namespace gossipmia {

struct LambdaSettings {
  std::vector<int> degrees = {2, 5, 10, 25};
  int iterations = 20;
  int runs = 50;
  std::vector<MixingMode> modes = {MixingMode::kStatic, MixingMode::kDynamic};

  friend bool operator==(const LambdaSettings&, const LambdaSettings&) = default;
};

struct ExperimentConfig {
  SimConfig sim;
  int repeat = 1;
  std::string out_dir = "out";
  bool save_models = false;
  bool dump_scores = false;
  LambdaSettings lambda;
};

absl::StatusOr<ExperimentConfig> ParseConfigText(absl::string_view text);
absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& path);

// Every key, one per line, in a fixed order; parses back to an equal config.
std::string SerializeConfig(const ExperimentConfig& cfg);

absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg);

// Every lambda_k entry must admit a k-regular graph on n nodes.
absl::Status ValidateLambdaDegrees(const ExperimentConfig& cfg);

bool SameConfig(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace gossipmia

#endif  // GOSSIPMIA_CONFIG_H_
