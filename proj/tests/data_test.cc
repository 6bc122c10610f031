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

#include "gossipmia/data.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "boost/math/special_functions/beta.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace gossipmia {
namespace {

using ::testing::SizeIs;
using ::testing::UnorderedElementsAreArray;

// Two-sided Kolmogorov-Smirnov critical coefficient at level 0.01.
constexpr double kKs01 = 1.628;

double KsOneSample(std::vector<double> xs, double a, double b) {
  std::sort(xs.begin(), xs.end());
  const double n = xs.size();
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double f = boost::math::ibeta(a, b, xs[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
  }
  return d;
}

double KsTwoSample(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() -
                             static_cast<double>(j) / y.size()));
  }
  return d;
}

// Independent Gamma(alpha, 1) draws, normalized.
std::vector<double> ReferenceDirichlet(int dim, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> g(dim);
  for (double& v : g) v = gamma(rng);
  const double sum = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= sum;
  return g;
}

std::vector<SampleId> Ids(const Dataset& ds) {
  std::vector<SampleId> out;
  for (const Sample& s : ds.samples) out.push_back(s.id);
  return out;
}

std::vector<SampleId> AllIds(const std::vector<NodeSplit>& splits) {
  std::vector<SampleId> out;
  for (const NodeSplit& s : splits) {
    for (SampleId id : Ids(s.train)) out.push_back(id);
    for (SampleId id : Ids(s.test)) out.push_back(id);
  }
  return out;
}

double LabelEntropy(const NodeSplit& split, int num_classes) {
  std::vector<double> counts(num_classes, 0.0);
  for (const Sample& s : split.train.samples) ++counts[s.label];
  for (const Sample& s : split.test.samples) ++counts[s.label];
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h -= c / total * std::log(c / total);
  }
  return h;
}

TEST(SyntheticTest, SizesAndBalance) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 2, .per_class = 10, .separation = 6}, 1);
  ASSERT_THAT(data.train.samples, SizeIs(20));
  ASSERT_THAT(data.test_pool.samples, SizeIs(20));
  int ones = 0;
  for (const Sample& s : data.train.samples) ones += s.label;
  EXPECT_EQ(ones, 10);
  EXPECT_TRUE(ValidateDataset(data.train).ok());
  std::set<SampleId> ids;
  for (SampleId id : Ids(data.train)) ids.insert(id);
  for (SampleId id : Ids(data.test_pool)) ids.insert(id);
  EXPECT_EQ(ids.size(), 40u);
}

TEST(SyntheticTest, DeterministicPerSeed) {
  const SyntheticOptions opts = {.num_classes = 3, .dim = 4, .per_class = 7};
  EXPECT_EQ(GenerateSynthetic(opts, 5).train, GenerateSynthetic(opts, 5).train);
  EXPECT_NE(GenerateSynthetic(opts, 5).train, GenerateSynthetic(opts, 6).train);
}

TEST(SyntheticTest, ClassMeansSitOnAxes) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 3, .dim = 5, .per_class = 4000, .separation = 2.5}, 2);
  std::vector<std::vector<double>> mean(3, std::vector<double>(5, 0.0));
  for (const Sample& s : data.train.samples) {
    for (int f = 0; f < 5; ++f) mean[s.label][f] += s.features[f] / 4000;
  }
  for (int c = 0; c < 3; ++c) {
    for (int f = 0; f < 5; ++f) {
      EXPECT_NEAR(mean[c][f], f == c ? 2.5 : 0.0, 0.06) << c << " " << f;
    }
  }
}

TEST(PartitionIidTest, EvenSplits) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 3, .per_class = 50}, 3);
  absl::StatusOr<std::vector<NodeSplit>> splits =
      PartitionIid(data.train, 10, 0.5, 4);
  ASSERT_TRUE(splits.ok()) << splits.status();
  for (const NodeSplit& s : *splits) {
    EXPECT_THAT(s.train.samples, SizeIs(5));
    EXPECT_THAT(s.test.samples, SizeIs(5));
  }
  EXPECT_THAT(AllIds(*splits), UnorderedElementsAreArray(Ids(data.train)));
}

TEST(PartitionIidTest, UnevenSharesDifferByOne) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 3, .dim = 2, .per_class = 31}, 3);
  const std::vector<NodeSplit> splits = *PartitionIid(data.train, 7, 0.3, 5);
  size_t lo = 1000, hi = 0;
  for (const NodeSplit& s : splits) {
    const size_t share = s.train.size() + s.test.size();
    lo = std::min(lo, share);
    hi = std::max(hi, share);
    EXPECT_FALSE(s.train.empty());
    EXPECT_FALSE(s.test.empty());
  }
  EXPECT_LE(hi - lo, 1u);
  EXPECT_THAT(AllIds(splits), UnorderedElementsAreArray(Ids(data.train)));
}

TEST(PartitionIidTest, SingleNodeOwnsEverything) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 2, .per_class = 5}, 3);
  const std::vector<NodeSplit> splits = *PartitionIid(data.train, 1, 0.5, 1);
  ASSERT_THAT(splits, SizeIs(1));
  EXPECT_THAT(AllIds(splits), UnorderedElementsAreArray(Ids(data.train)));
}

TEST(PartitionIidTest, TooFewSamples) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 2, .per_class = 3}, 3);
  EXPECT_FALSE(PartitionIid(data.train, 4, 0.5, 1).ok());
}

TEST(ApportionTest, SumsExactly) {
  EXPECT_EQ(ApportionCounts({0.5, 0.25, 0.25}, 4),
            (std::vector<int64_t>{2, 1, 1}));
  Rng rng = MakeRng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> p = SampleSymmetricDirichlet(13, 0.3, rng);
    const int64_t total = std::uniform_int_distribution<int>(0, 500)(rng);
    const std::vector<int64_t> c = ApportionCounts(p, total);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), int64_t{0}), total);
    for (size_t i = 0; i < p.size(); ++i) {
      EXPECT_LT(std::abs(c[i] - p[i] * total), 1.0);
    }
  }
}

TEST(DirichletTest, MarginalsMatchBetaDistribution) {
  const int dim = 8;
  const int draws = 10000;
  for (double beta : {0.1, 0.5, 2.0}) {
    Rng rng = MakeRng(100);
    Rng ref_rng = MakeRng(200);
    std::vector<double> first, last, ref;
    for (int t = 0; t < draws; ++t) {
      const std::vector<double> p = SampleSymmetricDirichlet(dim, beta, rng);
      first.push_back(p.front());
      last.push_back(p.back());
      ref.push_back(ReferenceDirichlet(dim, beta, ref_rng).front());
    }
    const double crit_one = kKs01 / std::sqrt(draws);
    const double crit_two = kKs01 * std::sqrt(2.0 / draws);
    EXPECT_LT(KsOneSample(first, beta, (dim - 1) * beta), crit_one) << beta;
    EXPECT_LT(KsOneSample(last, beta, (dim - 1) * beta), crit_one) << beta;
    EXPECT_LT(KsTwoSample(first, ref), crit_two) << beta;
  }
}

TEST(PartitionDirichletTest, ConservesSamplesAndFillsNodes) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 4, .dim = 3, .per_class = 60}, 7);
  for (double beta : {0.05, 0.5, 5.0}) {
    absl::StatusOr<std::vector<NodeSplit>> splits =
        PartitionDirichlet(data.train, 12, beta, 0.5, 8);
    ASSERT_TRUE(splits.ok()) << splits.status();
    EXPECT_THAT(AllIds(*splits), UnorderedElementsAreArray(Ids(data.train)));
    for (const NodeSplit& s : *splits) {
      EXPECT_FALSE(s.train.empty());
      EXPECT_FALSE(s.test.empty());
    }
  }
}

TEST(PartitionDirichletTest, RejectsNonPositiveBeta) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 2, .per_class = 20}, 7);
  EXPECT_FALSE(PartitionDirichlet(data.train, 4, 0.0, 0.5, 1).ok());
  EXPECT_FALSE(PartitionDirichlet(data.train, 4, -1.0, 0.5, 1).ok());
}

TEST(PartitionDirichletTest, HugeBetaIsNearUniform) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 10, .dim = 4, .per_class = 1000}, 9);
  const std::vector<NodeSplit> splits =
      *PartitionDirichlet(data.train, 10, 1e6, 0.5, 10);
  for (const NodeSplit& s : splits) {
    std::vector<int> hist(10, 0);
    for (const Sample& x : s.train.samples) ++hist[x.label];
    for (const Sample& x : s.test.samples) ++hist[x.label];
    for (int h : hist) EXPECT_NEAR(h, 100.0, 10.0);
  }
}

TEST(PartitionDirichletTest, SmallBetaSkewsLabels) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 10, .dim = 2, .per_class = 100}, 11);
  double skewed = 0.0, flat = 0.0;
  for (uint64_t trial = 0; trial < 50; ++trial) {
    absl::StatusOr<std::vector<NodeSplit>> low =
        PartitionDirichlet(data.train, 10, 0.1, 0.5, trial);
    absl::StatusOr<std::vector<NodeSplit>> high =
        PartitionDirichlet(data.train, 10, 1e6, 0.5, trial);
    ASSERT_TRUE(low.ok()) << low.status();
    ASSERT_TRUE(high.ok()) << high.status();
    for (const NodeSplit& s : *low) skewed += LabelEntropy(s, 10);
    for (const NodeSplit& s : *high) flat += LabelEntropy(s, 10);
  }
  EXPECT_LT(skewed, flat);
}

TEST(CanaryTest, FlipRule) {
  EXPECT_EQ(FlipLabel(3, 10), 4);
  EXPECT_EQ(FlipLabel(9, 10), 0);
}

TEST(CanaryTest, EvenDisjointAssignment) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 10, .dim = 4, .per_class = 300}, 12);
  absl::StatusOr<CanarySet> set = MakeCanaries(data.train, 600, 150, 13);
  ASSERT_TRUE(set.ok()) << set.status();
  std::set<SampleId> seen;
  for (int node = 0; node < 150; ++node) {
    const std::vector<Sample> mine = set->ForNode(node);
    EXPECT_THAT(mine, SizeIs(4));
    for (const Sample& s : mine) EXPECT_TRUE(seen.insert(s.id).second);
  }
  EXPECT_EQ(seen.size(), 600u);
  for (const Canary& c : set->canaries) {
    EXPECT_NE(c.sample.label, c.original_label);
    EXPECT_EQ(c.sample.label, FlipLabel(c.original_label, 10));
  }
}

TEST(CanaryTest, RemainderSpreadsRoundRobin) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 3, .dim = 2, .per_class = 10}, 1);
  const CanarySet set = *MakeCanaries(data.train, 7, 3, 2);
  EXPECT_THAT(set.ForNode(0), SizeIs(3));
  EXPECT_THAT(set.ForNode(1), SizeIs(2));
  EXPECT_THAT(set.ForNode(2), SizeIs(2));
  EXPECT_FALSE(MakeCanaries(data.train, 31, 3, 2).ok());
}

TEST(CanaryTest, InjectionAppendsToTrain) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 3, .dim = 2, .per_class = 40}, 1);
  const CanarySet set = *MakeCanaries(data.train, 8, 4, 2);
  const Dataset pool = WithoutCanarySources(data.train, set);
  EXPECT_EQ(pool.size(), data.train.size() - 8);
  std::vector<NodeSplit> splits = *PartitionIid(pool, 4, 0.5, 3);
  const std::vector<NodeSplit> before = splits;
  InjectCanaries(set, splits);
  for (int node = 0; node < 4; ++node) {
    EXPECT_EQ(splits[node].train.size(), before[node].train.size() + 2);
    EXPECT_EQ(splits[node].test.samples, before[node].test.samples);
    EXPECT_EQ(splits[node].train.samples.back(), set.ForNode(node).back());
  }
}

TEST(AttackSetTest, BalancedAndOwned) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 2, .dim = 2, .per_class = 5}, 1);
  const std::vector<NodeSplit> splits = *PartitionIid(data.train, 1, 0.5, 2);
  absl::StatusOr<AttackSet> att = BuildAttackSet(splits[0], 5, 3);
  ASSERT_TRUE(att.ok()) << att.status();
  EXPECT_THAT(att->entries, SizeIs(10));
  const std::vector<SampleId> train = Ids(splits[0].train);
  const std::vector<SampleId> test = Ids(splits[0].test);
  int members = 0;
  for (const AttackEntry& e : att->entries) {
    const auto& side = e.member ? train : test;
    EXPECT_NE(std::find(side.begin(), side.end(), e.sample), side.end());
    members += e.member;
  }
  EXPECT_EQ(members, 5);
  EXPECT_FALSE(BuildAttackSet(splits[0], 6, 3).ok());
}

TEST(DatasetCsvTest, RoundTrip) {
  const SyntheticData data = GenerateSynthetic(
      {.num_classes = 3, .dim = 4, .per_class = 6}, 1);
  const std::string csv = DatasetToCsv(data.train);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,label,f0,f1,f2,f3");
  absl::StatusOr<Dataset> parsed = DatasetFromCsv(csv, 3);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, data.train);
  EXPECT_FALSE(DatasetFromCsv("id,label,f0\n1,5,0.5\n", 3).ok());
}

TEST(ValidateDatasetTest, CatchesBadSamples) {
  Dataset ds{.num_classes = 2, .dim = 2};
  ds.samples.push_back({.id = 0, .label = 1, .features = {0, 0}});
  EXPECT_TRUE(ValidateDataset(ds).ok());
  ds.samples.push_back({.id = 0, .label = 0, .features = {0, 0}});
  EXPECT_FALSE(ValidateDataset(ds).ok());
  ds.samples.back().id = 1;
  ds.samples.back().label = 2;
  EXPECT_FALSE(ValidateDataset(ds).ok());
  ds.samples.back().label = 0;
  ds.samples.back().features = {1};
  EXPECT_FALSE(ValidateDataset(ds).ok());
}

}  // namespace
}  // namespace gossipmia
