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

// Synthetic classification data, node partitioning and canary crafting.

#ifndef GOSSIPMIA_DATA_H_
#define GOSSIPMIA_DATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/rng.h"

namespace gossipmia {

using SampleId = int64_t;

struct Sample {
  SampleId id = 0;
  int label = 0;
  std::vector<double> features;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Dataset {
  int num_classes = 0;
  int dim = 0;
  std::vector<Sample> samples;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Checks dimensions, label range and id uniqueness.
absl::Status ValidateDataset(const Dataset& ds);

struct NodeSplit {
  int node = 0;
  Dataset train;
  Dataset test;
};

struct AttackEntry {
  SampleId sample = 0;
  int label = 0;
  std::vector<double> features;
  bool member = false;
};

struct AttackSet {
  int owner = 0;
  std::vector<AttackEntry> entries;
};

struct Canary {
  // Features and flipped label; the id is the source sample's id.
  Sample sample;
  int original_label = 0;
  int node = 0;
};

struct CanarySet {
  std::vector<Canary> canaries;

  std::vector<Sample> ForNode(int node) const;
};

struct SyntheticData {
  Dataset train;
  // Same size as train, disjoint ids; used as the global test set.
  Dataset test_pool;
};

struct SyntheticOptions {
  int num_classes = 10;
  int dim = 32;
  int per_class = 100;
  double separation = 3.0;
};

// Gaussian blobs with identity covariance; class c is centered at
// separation * e_{c mod dim}.
SyntheticData GenerateSynthetic(const SyntheticOptions& options,
                                uint64_t seed);

// Even shuffle-split across n nodes; each share is cut into local train and
// test with test_frac of it (at least one sample each) going to test.
absl::StatusOr<std::vector<NodeSplit>> PartitionIid(const Dataset& ds, int n,
                                                    double test_frac,
                                                    uint64_t seed);

// Label-skewed split: every class is spread over nodes with proportions
// drawn from Dirichlet(beta * 1_n). Proportions are redrawn until every node
// holds at least two samples, then local test sets are carved from each
// node's own allocation.
absl::StatusOr<std::vector<NodeSplit>> PartitionDirichlet(const Dataset& ds,
                                                          int n, double beta,
                                                          double test_frac,
                                                          uint64_t seed);

// Draws a point of the probability simplex from Dirichlet(alpha * 1_dim).
std::vector<double> SampleSymmetricDirichlet(int dim, double alpha, Rng& rng);

// Splits `total` into integer counts following `proportions` by the largest
// remainder rule; the counts sum to `total` exactly.
std::vector<int64_t> ApportionCounts(const std::vector<double>& proportions,
                                     int64_t total);

inline int FlipLabel(int label, int num_classes) {
  return (label + 1) % num_classes;
}

// Selects `count` samples uniformly, flips their labels and deals them to
// nodes round-robin, so every node gets floor or ceil of count / n.
absl::StatusOr<CanarySet> MakeCanaries(const Dataset& ds, int count, int n,
                                       uint64_t seed);

// Appends each node's canaries to its train split.
void InjectCanaries(const CanarySet& canaries, std::vector<NodeSplit>& splits);

// Removes samples whose id appears in `canaries` from ds.
Dataset WithoutCanarySources(const Dataset& ds, const CanarySet& canaries);

// size_per_side members from train and as many non-members from test,
// uniformly without replacement.
absl::StatusOr<AttackSet> BuildAttackSet(const NodeSplit& split,
                                         int size_per_side, uint64_t seed);

// CSV with header id,label,f0..f{d-1}.
std::string DatasetToCsv(const Dataset& ds);
absl::StatusOr<Dataset> DatasetFromCsv(absl::string_view csv, int num_classes);

}  // namespace gossipmia

#endif  // GOSSIPMIA_DATA_H_
