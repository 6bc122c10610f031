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

// Experiment orchestration and metrics files.

#ifndef GOSSIPMIA_EXPERIMENT_H_
#define GOSSIPMIA_EXPERIMENT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/config.h"
#include "gossipmia/protocol.h"

namespace gossipmia {

// Header: round,mean_test_acc,mean_mia_acc,mean_tpr_at_1fpr,mean_gen_error,
// max_canary_tpr,messages_cumulative,eps_spent. Absent optional values are
// empty cells; reals use 17 significant digits.
std::string MetricsToCsv(const std::vector<MetricsRow>& rows);
absl::StatusOr<std::vector<MetricsRow>> MetricsFromCsv(absl::string_view csv);

// Per-round mean and sample standard deviation of every metric across runs.
// All runs must cover the same rounds.
absl::StatusOr<std::string> AggregateCsv(
    const std::vector<std::vector<MetricsRow>>& runs);

struct ExperimentResult {
  std::vector<std::string> run_files;
  std::string aggregate_file;
  std::string metadata_file;
  std::vector<RunLog> logs;
};

// Runs cfg.repeat simulations with seeds seed, seed + 1, ... and writes
// run_<r>.csv, aggregate.csv and metadata.json under cfg.out_dir.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& cfg);

// One contraction series per (degree, mode) of cfg.lambda, written to
// <out_dir>/lambda.csv. Returns the file path.
absl::StatusOr<std::string> RunLambdaExperiment(const ExperimentConfig& cfg);

}  // namespace gossipmia

#endif  // GOSSIPMIA_EXPERIMENT_H_
