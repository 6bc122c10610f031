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

#include "gossipmia/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace gossipmia {
namespace {

double ClampedLog(double p) {
  return std::log(std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp));
}

std::vector<AttackRecord> SortedByScore(std::span<const AttackRecord> records) {
  std::vector<AttackRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AttackRecord& a, const AttackRecord& b) {
                     return a.score < b.score;
                   });
  return sorted;
}

}  // namespace

double Mpe(std::span<const double> dist, int y) {
  const double py = dist[y];
  double score = -(1.0 - py) * ClampedLog(py);
  for (int k = 0; k < static_cast<int>(dist.size()); ++k) {
    if (k == y) continue;
    score -= dist[k] * ClampedLog(1.0 - dist[k]);
  }
  return std::max(score, 0.0);
}

absl::StatusOr<ThresholdAttack> OptimalThresholdAttack(
    std::span<const AttackRecord> records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("attack on an empty record set");
  }
  const std::vector<AttackRecord> sorted = SortedByScore(records);
  const double total = static_cast<double>(sorted.size());
  int64_t negatives = 0;
  for (const AttackRecord& r : sorted) negatives += r.member ? 0 : 1;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // tau = -inf: everything is called a non-member.
  ThresholdAttack best{static_cast<double>(negatives) / total, -kInf};
  int64_t tp = 0;
  int64_t fp = 0;
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].member ? tp : fp) += 1;
      ++j;
    }
    const double acc = static_cast<double>(tp + negatives - fp) / total;
    if (acc > best.accuracy) {
      best.accuracy = acc;
      best.threshold =
          j < sorted.size() ? 0.5 * (sorted[i].score + sorted[j].score) : kInf;
    }
    i = j;
  }
  return best;
}

std::vector<AttackRecord> ScoreAttackSet(const ParamVector& m,
                                         const AttackSet& att) {
  std::vector<AttackRecord> records;
  records.reserve(att.entries.size());
  for (const AttackEntry& e : att.entries) {
    const std::vector<double> dist = Forward(m, e.features);
    records.push_back({att.owner, e.sample, Mpe(dist, e.label), e.member});
  }
  return records;
}

absl::StatusOr<double> MiaAccuracy(const ParamVector& m, const AttackSet& att) {
  if (att.entries.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("node ", att.owner, ": empty attack set"));
  }
  const std::vector<AttackRecord> records = ScoreAttackSet(m, att);
  absl::StatusOr<ThresholdAttack> best = OptimalThresholdAttack(records);
  if (!best.ok()) return best.status();
  return best->accuracy;
}

std::vector<RocPoint> RocCurve(std::span<const AttackRecord> records) {
  const std::vector<AttackRecord> sorted = SortedByScore(records);
  int64_t positives = 0;
  for (const AttackRecord& r : sorted) positives += r.member ? 1 : 0;
  const int64_t negatives = static_cast<int64_t>(sorted.size()) - positives;
  auto rate = [](int64_t count, int64_t of) {
    return of == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(of);
  };
  std::vector<RocPoint> curve;
  curve.push_back({-std::numeric_limits<double>::infinity(), 0.0, 0.0});
  int64_t tp = 0;
  int64_t fp = 0;
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].member ? tp : fp) += 1;
      ++j;
    }
    curve.push_back({sorted[i].score, rate(tp, positives), rate(fp, negatives)});
    i = j;
  }
  return curve;
}

absl::StatusOr<double> TprAtFpr(std::span<const AttackRecord> records,
                                double fpr_cap) {
  const auto members = std::count_if(records.begin(), records.end(),
                                     [](const AttackRecord& r) { return r.member; });
  if (members == 0 || members == static_cast<int64_t>(records.size())) {
    return absl::InvalidArgumentError(
        "TPR at FPR needs both members and non-members");
  }
  double best = 0.0;
  for (const RocPoint& p : RocCurve(records)) {
    if (p.fpr <= fpr_cap) best = std::max(best, p.tpr);
  }
  return best;
}

absl::StatusOr<NodeAttackMetrics> AttackAllNodes(
    std::span<const ParamVector> snapshot, std::span<const AttackSet> sets,
    double fpr_cap) {
  if (snapshot.size() != sets.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        snapshot.size(), " models but ", sets.size(), " attack sets"));
  }
  NodeAttackMetrics out;
  for (size_t i = 0; i < snapshot.size(); ++i) {
    const std::vector<AttackRecord> records = ScoreAttackSet(snapshot[i], sets[i]);
    absl::StatusOr<ThresholdAttack> best = OptimalThresholdAttack(records);
    if (!best.ok()) return best.status();
    absl::StatusOr<double> tpr = TprAtFpr(records, fpr_cap);
    if (!tpr.ok()) return tpr.status();
    out.mia_accuracy.push_back(best->accuracy);
    out.tpr_at_fpr.push_back(*tpr);
  }
  if (!snapshot.empty()) {
    const double n = static_cast<double>(snapshot.size());
    out.mean_mia_accuracy =
        std::accumulate(out.mia_accuracy.begin(), out.mia_accuracy.end(), 0.0) / n;
    out.mean_tpr_at_fpr =
        std::accumulate(out.tpr_at_fpr.begin(), out.tpr_at_fpr.end(), 0.0) / n;
  }
  return out;
}

absl::StatusOr<std::vector<std::vector<AttackRecord>>> CanaryRecords(
    std::span<const ParamVector> snapshot, const CanarySet& canaries,
    const Dataset& reference_pool) {
  if (reference_pool.empty()) {
    return absl::InvalidArgumentError("canary audit needs a reference pool");
  }
  if (reference_pool.size() < canaries.canaries.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "reference pool of ", reference_pool.size(), " cannot match ",
        canaries.canaries.size(), " canaries"));
  }
  std::vector<std::vector<AttackRecord>> per_node(snapshot.size());
  size_t cursor = 0;
  for (size_t node = 0; node < snapshot.size(); ++node) {
    const std::vector<Sample> mine = canaries.ForNode(static_cast<int>(node));
    const ParamVector& model = snapshot[node];
    for (const Sample& s : mine) {
      per_node[node].push_back({static_cast<int>(node), s.id,
                                Mpe(Forward(model, s.features), s.label), true});
    }
    for (size_t c = 0; c < mine.size(); ++c) {
      const Sample& ref = reference_pool.samples[cursor++];
      const int flipped = FlipLabel(ref.label, reference_pool.num_classes);
      per_node[node].push_back({static_cast<int>(node), ref.id,
                                Mpe(Forward(model, ref.features), flipped),
                                false});
    }
  }
  return per_node;
}

absl::StatusOr<CanaryAudit> AuditCanaries(std::span<const ParamVector> snapshot,
                                          const CanarySet& canaries,
                                          const Dataset& reference_pool,
                                          double fpr_cap) {
  absl::StatusOr<std::vector<std::vector<AttackRecord>>> records =
      CanaryRecords(snapshot, canaries, reference_pool);
  if (!records.ok()) return records.status();
  CanaryAudit audit;
  audit.tpr_at_fpr.assign(snapshot.size(), 0.0);
  for (size_t node = 0; node < snapshot.size(); ++node) {
    if ((*records)[node].empty()) continue;
    absl::StatusOr<double> tpr = TprAtFpr((*records)[node], fpr_cap);
    if (!tpr.ok()) return tpr.status();
    audit.tpr_at_fpr[node] = *tpr;
    audit.max_tpr_at_fpr = std::max(audit.max_tpr_at_fpr, *tpr);
  }
  return audit;
}

std::string AttackRecordsToCsv(std::span<const AttackRecord> records) {
  std::string out = "node,sample,score,member\n";
  for (const AttackRecord& r : records) {
    absl::StrAppendFormat(&out, "%d,%d,%.17g,%d\n", r.node, r.sample, r.score,
                          r.member ? 1 : 0);
  }
  return out;
}

}  // namespace gossipmia
