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

// Modified-prediction-entropy membership inference and its metrics.

#ifndef GOSSIPMIA_ATTACK_H_
#define GOSSIPMIA_ATTACK_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gossipmia/data.h"
#include "gossipmia/learner.h"

namespace gossipmia {

inline constexpr double kProbabilityClamp = 1e-12;
inline constexpr double kDefaultFprCap = 0.01;

struct AttackRecord {
  int node = 0;
  SampleId sample = 0;
  double score = 0.0;
  bool member = false;
};

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

// -(1 - p_y) ln p_y - sum_{y' != y} p_y' ln(1 - p_y'), natural log, with
// probabilities clamped to [1e-12, 1 - 1e-12] inside the logarithms.
double Mpe(std::span<const double> dist, int y);

struct ThresholdAttack {
  double accuracy = 0.5;
  // Samples with score <= threshold are called members.
  double threshold = 0.0;
};

// Best accuracy of the rule "member iff score <= tau" over tau in
// {-inf, midpoints of consecutive distinct scores, +inf}; the smallest
// maximizing tau is reported.
absl::StatusOr<ThresholdAttack> OptimalThresholdAttack(
    std::span<const AttackRecord> records);

absl::StatusOr<double> MiaAccuracy(const ParamVector& m, const AttackSet& att);

std::vector<AttackRecord> ScoreAttackSet(const ParamVector& m,
                                         const AttackSet& att);

// ROC of the rule "member iff score <= tau", from tau = -inf upward. One
// point per distinct score plus the origin.
std::vector<RocPoint> RocCurve(std::span<const AttackRecord> records);

// Largest TPR among ROC points with FPR <= fpr_cap. Needs at least one
// member and one non-member.
absl::StatusOr<double> TprAtFpr(std::span<const AttackRecord> records,
                                double fpr_cap = kDefaultFprCap);

struct NodeAttackMetrics {
  std::vector<double> mia_accuracy;
  std::vector<double> tpr_at_fpr;
  double mean_mia_accuracy = 0.0;
  double mean_tpr_at_fpr = 0.0;
};

// Attacks node i's model with node i's attack set, for every node.
absl::StatusOr<NodeAttackMetrics> AttackAllNodes(
    std::span<const ParamVector> snapshot, std::span<const AttackSet> sets,
    double fpr_cap = kDefaultFprCap);

struct CanaryAudit {
  std::vector<double> tpr_at_fpr;  // per node, 0 for nodes without canaries
  double max_tpr_at_fpr = 0.0;
};

// Per node: its canaries (members) against as many label-flipped samples
// from `reference_pool` (non-members), both scored under the node's model.
// Nodes take consecutive disjoint slices of the pool in id order of nodes.
absl::StatusOr<CanaryAudit> AuditCanaries(std::span<const ParamVector> snapshot,
                                          const CanarySet& canaries,
                                          const Dataset& reference_pool,
                                          double fpr_cap = kDefaultFprCap);

// Per-node member and non-member canary records, as scored by the audit.
absl::StatusOr<std::vector<std::vector<AttackRecord>>> CanaryRecords(
    std::span<const ParamVector> snapshot, const CanarySet& canaries,
    const Dataset& reference_pool);

// Columns node,sample,score,member.
std::string AttackRecordsToCsv(std::span<const AttackRecord> records);

}  // namespace gossipmia

#endif  // GOSSIPMIA_ATTACK_H_
