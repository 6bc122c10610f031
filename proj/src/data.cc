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
#include <numeric>
#include <unordered_set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace gossipmia {
namespace {

constexpr int kMaxDirichletDraws = 10000;
constexpr int64_t kMinSamplesPerNode = 2;

Dataset EmptyLike(const Dataset& ds) {
  Dataset out;
  out.num_classes = ds.num_classes;
  out.dim = ds.dim;
  return out;
}

// Moves `samples` into a NodeSplit, the first ones to train.
NodeSplit CutSplit(int node, const Dataset& proto, std::vector<Sample> samples,
                   double test_frac) {
  const int64_t size = static_cast<int64_t>(samples.size());
  int64_t test_count = std::llround(test_frac * static_cast<double>(size));
  test_count = std::clamp<int64_t>(test_count, 1, std::max<int64_t>(size - 1, 1));
  NodeSplit split;
  split.node = node;
  split.train = EmptyLike(proto);
  split.test = EmptyLike(proto);
  for (int64_t s = 0; s < size; ++s) {
    Dataset& dst = s < size - test_count ? split.train : split.test;
    dst.samples.push_back(std::move(samples[s]));
  }
  return split;
}

absl::Status CheckTestFraction(double test_frac) {
  if (!(test_frac >= 0.0 && test_frac <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("test_frac must lie in [0, 1], got ", test_frac));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateDataset(const Dataset& ds) {
  std::unordered_set<SampleId> ids;
  for (const Sample& s : ds.samples) {
    if (static_cast<int>(s.features.size()) != ds.dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample ", s.id, " has ", s.features.size(), " features, want ",
          ds.dim));
    }
    if (s.label < 0 || s.label >= ds.num_classes) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample ", s.id, " has label ", s.label, " outside 0..",
          ds.num_classes - 1));
    }
    if (!ids.insert(s.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate sample id ", s.id));
    }
  }
  return absl::OkStatus();
}

std::vector<Sample> CanarySet::ForNode(int node) const {
  std::vector<Sample> out;
  for (const Canary& c : canaries) {
    if (c.node == node) out.push_back(c.sample);
  }
  return out;
}

SyntheticData GenerateSynthetic(const SyntheticOptions& options,
                                uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int classes = options.num_classes;
  const int dim = options.dim;
  auto draw = [&](Dataset& ds, SampleId first_id) {
    ds.num_classes = classes;
    ds.dim = dim;
    SampleId id = first_id;
    for (int i = 0; i < options.per_class; ++i) {
      for (int c = 0; c < classes; ++c) {
        Sample s;
        s.id = id++;
        s.label = c;
        s.features.resize(dim);
        for (double& f : s.features) f = noise(rng);
        s.features[c % dim] += options.separation;
        ds.samples.push_back(std::move(s));
      }
    }
  };
  SyntheticData data;
  const SampleId train_size =
      static_cast<SampleId>(classes) * options.per_class;
  draw(data.train, 0);
  draw(data.test_pool, train_size);
  return data;
}

absl::StatusOr<std::vector<NodeSplit>> PartitionIid(const Dataset& ds, int n,
                                                    double test_frac,
                                                    uint64_t seed) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("need n >= 1, got ", n));
  }
  if (absl::Status s = CheckTestFraction(test_frac); !s.ok()) return s;
  if (ds.size() < static_cast<size_t>(2 * n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        ds.size(), " samples cannot give ", n, " nodes a train and test split"));
  }
  Rng rng = MakeRng(seed);
  std::vector<size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const size_t base = ds.size() / n;
  const size_t extra = ds.size() % n;
  std::vector<NodeSplit> splits;
  splits.reserve(n);
  size_t cursor = 0;
  for (int node = 0; node < n; ++node) {
    const size_t share = base + (static_cast<size_t>(node) < extra ? 1 : 0);
    std::vector<Sample> mine;
    mine.reserve(share);
    for (size_t s = 0; s < share; ++s) mine.push_back(ds.samples[order[cursor++]]);
    splits.push_back(CutSplit(node, ds, std::move(mine), test_frac));
  }
  return splits;
}

std::vector<double> SampleSymmetricDirichlet(int dim, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> p(dim);
  double total = 0.0;
  while (total <= 0.0) {
    total = 0.0;
    for (double& x : p) {
      x = gamma(rng);
      total += x;
    }
  }
  for (double& x : p) x /= total;
  return p;
}

std::vector<int64_t> ApportionCounts(const std::vector<double>& proportions,
                                     int64_t total) {
  const size_t m = proportions.size();
  std::vector<int64_t> counts(m, 0);
  std::vector<double> remainder(m, 0.0);
  int64_t assigned = 0;
  for (size_t i = 0; i < m; ++i) {
    const double exact = proportions[i] * static_cast<double>(total);
    counts[i] = static_cast<int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return remainder[a] > remainder[b];
  });
  for (size_t r = 0; assigned < total; r = (r + 1) % m) {
    ++counts[order[r]];
    ++assigned;
  }
  // Floating error can overshoot by a unit; take it back from the largest.
  while (assigned > total) {
    auto largest = std::max_element(counts.begin(), counts.end());
    --*largest;
    --assigned;
  }
  return counts;
}

absl::StatusOr<std::vector<NodeSplit>> PartitionDirichlet(const Dataset& ds,
                                                          int n, double beta,
                                                          double test_frac,
                                                          uint64_t seed) {
  if (!(beta > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Dirichlet concentration must be > 0, got ", beta));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("need n >= 1, got ", n));
  }
  if (absl::Status s = CheckTestFraction(test_frac); !s.ok()) return s;
  if (ds.size() < static_cast<size_t>(kMinSamplesPerNode * n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        ds.size(), " samples cannot give ", n, " nodes a train and test split"));
  }
  Rng rng = MakeRng(seed);
  const int classes = ds.num_classes;
  std::vector<std::vector<size_t>> by_class(classes);
  for (size_t i = 0; i < ds.size(); ++i) {
    by_class[ds.samples[i].label].push_back(i);
  }

  // counts[c][node]
  std::vector<std::vector<int64_t>> counts(classes);
  bool accepted = false;
  for (int draw = 0; draw < kMaxDirichletDraws && !accepted; ++draw) {
    std::vector<int64_t> totals(n, 0);
    for (int c = 0; c < classes; ++c) {
      counts[c] = ApportionCounts(SampleSymmetricDirichlet(n, beta, rng),
                                  static_cast<int64_t>(by_class[c].size()));
      for (int node = 0; node < n; ++node) totals[node] += counts[c][node];
    }
    accepted = *std::min_element(totals.begin(), totals.end()) >=
               kMinSamplesPerNode;
  }
  if (!accepted) {
    // Repair the last draw: feed starved nodes from the richest node's most
    // plentiful class.
    std::vector<int64_t> totals(n, 0);
    for (int c = 0; c < classes; ++c) {
      for (int node = 0; node < n; ++node) totals[node] += counts[c][node];
    }
    for (int node = 0; node < n; ++node) {
      while (totals[node] < kMinSamplesPerNode) {
        const int donor = static_cast<int>(
            std::max_element(totals.begin(), totals.end()) - totals.begin());
        int best_class = 0;
        for (int c = 1; c < classes; ++c) {
          if (counts[c][donor] > counts[best_class][donor]) best_class = c;
        }
        --counts[best_class][donor];
        --totals[donor];
        ++counts[best_class][node];
        ++totals[node];
      }
    }
  }

  std::vector<std::vector<Sample>> allocation(n);
  for (int c = 0; c < classes; ++c) {
    std::vector<size_t>& members = by_class[c];
    std::shuffle(members.begin(), members.end(), rng);
    size_t cursor = 0;
    for (int node = 0; node < n; ++node) {
      for (int64_t s = 0; s < counts[c][node]; ++s) {
        allocation[node].push_back(ds.samples[members[cursor++]]);
      }
    }
  }
  std::vector<NodeSplit> splits;
  splits.reserve(n);
  for (int node = 0; node < n; ++node) {
    std::shuffle(allocation[node].begin(), allocation[node].end(), rng);
    splits.push_back(CutSplit(node, ds, std::move(allocation[node]), test_frac));
  }
  return splits;
}

absl::StatusOr<CanarySet> MakeCanaries(const Dataset& ds, int count, int n,
                                       uint64_t seed) {
  if (count < 0 || static_cast<size_t>(count) > ds.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot draw ", count, " canaries from ", ds.size(), " samples"));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("need n >= 1, got ", n));
  }
  if (ds.num_classes < 2 && count > 0) {
    return absl::InvalidArgumentError("label flipping needs at least 2 classes");
  }
  Rng rng = MakeRng(seed);
  std::vector<size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  CanarySet set;
  set.canaries.reserve(count);
  for (int t = 0; t < count; ++t) {
    Canary c;
    c.sample = ds.samples[order[t]];
    c.original_label = c.sample.label;
    c.sample.label = FlipLabel(c.sample.label, ds.num_classes);
    c.node = t % n;
    set.canaries.push_back(std::move(c));
  }
  return set;
}

void InjectCanaries(const CanarySet& canaries, std::vector<NodeSplit>& splits) {
  for (const Canary& c : canaries.canaries) {
    for (NodeSplit& split : splits) {
      if (split.node == c.node) split.train.samples.push_back(c.sample);
    }
  }
}

Dataset WithoutCanarySources(const Dataset& ds, const CanarySet& canaries) {
  std::unordered_set<SampleId> taken;
  for (const Canary& c : canaries.canaries) taken.insert(c.sample.id);
  Dataset out = EmptyLike(ds);
  for (const Sample& s : ds.samples) {
    if (!taken.contains(s.id)) out.samples.push_back(s);
  }
  return out;
}

absl::StatusOr<AttackSet> BuildAttackSet(const NodeSplit& split,
                                         int size_per_side, uint64_t seed) {
  if (size_per_side < 1 ||
      static_cast<size_t>(size_per_side) > split.train.size() ||
      static_cast<size_t>(size_per_side) > split.test.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "node ", split.node, ": attack set of ", size_per_side,
        " per side needs that many train (", split.train.size(),
        ") and test (", split.test.size(), ") samples"));
  }
  Rng rng = MakeRng(seed, static_cast<uint64_t>(split.node));
  AttackSet set;
  set.owner = split.node;
  auto take = [&](const Dataset& from, bool member) {
    std::vector<size_t> order(from.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int s = 0; s < size_per_side; ++s) {
      const Sample& src = from.samples[order[s]];
      set.entries.push_back({src.id, src.label, src.features, member});
    }
  };
  take(split.train, true);
  take(split.test, false);
  return set;
}

std::string DatasetToCsv(const Dataset& ds) {
  std::string out = "id,label";
  for (int f = 0; f < ds.dim; ++f) absl::StrAppend(&out, ",f", f);
  out += "\n";
  for (const Sample& s : ds.samples) {
    absl::StrAppend(&out, s.id, ",", s.label);
    for (double v : s.features) absl::StrAppendFormat(&out, ",%.17g", v);
    out += "\n";
  }
  return out;
}

absl::StatusOr<Dataset> DatasetFromCsv(absl::string_view csv, int num_classes) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  if (lines.empty()) return absl::InvalidArgumentError("empty dataset CSV");
  std::vector<absl::string_view> header = absl::StrSplit(lines[0], ',');
  if (header.size() < 2 || header[0] != "id" || header[1] != "label") {
    return absl::InvalidArgumentError(
        "dataset CSV header must start with id,label");
  }
  Dataset ds;
  ds.num_classes = num_classes;
  ds.dim = static_cast<int>(header.size()) - 2;
  for (size_t row = 1; row < lines.size(); ++row) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[row], ',');
    if (cells.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dataset CSV row ", row, ": ", cells.size(), " cells, want ",
          header.size()));
    }
    Sample s;
    if (!absl::SimpleAtoi(cells[0], &s.id) ||
        !absl::SimpleAtoi(cells[1], &s.label)) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset CSV row ", row, ": bad id or label"));
    }
    s.features.resize(ds.dim);
    for (int f = 0; f < ds.dim; ++f) {
      if (!absl::SimpleAtod(cells[f + 2], &s.features[f])) {
        return absl::InvalidArgumentError(
            absl::StrCat("dataset CSV row ", row, ": bad feature f", f));
      }
    }
    ds.samples.push_back(std::move(s));
  }
  if (absl::Status s = ValidateDataset(ds); !s.ok()) return s;
  return ds;
}

}  // namespace gossipmia
