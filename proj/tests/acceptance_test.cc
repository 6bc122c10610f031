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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "gossipmia/attack.h"
#include "gossipmia/data.h"
#include "gossipmia/experiment.h"
#include "gossipmia/learner.h"
#include "gossipmia/mixmat.h"
#include "gossipmia/privacy.h"
#include "gossipmia/protocol.h"
#include "gossipmia/rng.h"
#include "gossipmia/topology.h"

namespace gossipmia {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Linear-interpolation quantile of an unsorted sample.
double Quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// ---------------------------------------------------------------------------
// 1. Static versus dynamic contraction.

Verdict SpectralGap() {
  Stopwatch watch;
  LambdaCurveOptions opts{.n = 150, .k = 2, .iterations = 20, .runs = 50};
  opts.mode = MixingMode::kStatic;
  absl::StatusOr<ContractionSeries> fixed = LambdaCurve(opts);
  opts.mode = MixingMode::kDynamic;
  absl::StatusOr<ContractionSeries> dynamic = LambdaCurve(opts);
  if (!fixed.ok() || !dynamic.ok()) return {false, "lambda curve failed"};
  const double seconds = watch.Seconds();
  const double closed_form =
      std::pow((1 + 2 * std::cos(2 * std::numbers::pi / 150)) / 3, 20);
  const double static_value = fixed->mean.back();
  const double dyn_mean = dynamic->mean.back();
  const double dyn_sd = dynamic->stddev.back();
  const bool pass = dyn_mean < 0.5 && std::abs(static_value - closed_form) < 1e-6 &&
                    dyn_sd < 0.05 && seconds < 120;
  return {pass, absl::StrFormat(
                    "dynamic mean %.4f sd %.4f, static %.9f vs %.9f, %.1fs",
                    dyn_mean, dyn_sd, static_value, closed_form, seconds)};
}

// ---------------------------------------------------------------------------
// 2. Contraction inequality, product bound and dense oracle.

double DenseContraction(const std::vector<MixingMatrix>& ms) {
  const int n = ms.front().size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (const MixingMatrix& m : ms) p = m.weights() * p;
  p.array() -= 1.0 / n;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(p).singularValues()(0);
}

Verdict ContractionBounds() {
  Rng rng = MakeRng(2024);
  std::uniform_int_distribution<int> size(3, 30);
  std::uniform_int_distribution<int> length(1, 6);
  std::normal_distribution<double> normal;
  int violations = 0, oracle_misses = 0;
  double worst_gap = 0.0;
  for (int instance = 0; instance < 500; ++instance) {
    int n = size(rng), k = 0;
    do {
      n = size(rng);
      k = std::uniform_int_distribution<int>(2, n - 1)(rng);
    } while ((n * k) % 2 != 0);
    absl::StatusOr<Graph> g = GenerateKRegular(n, k, rng);
    if (!g.ok()) return {false, std::string(g.status().message())};

    // One step: ||W x|| <= lambda ||x|| for mean-zero x.
    const MixingMatrix w = *BuildMixingMatrix(*g, k);
    const std::vector<MixingMatrix> single = {w};
    const double lambda = ContractionFactor(single).value;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    x.array() -= x.mean();
    if ((w.weights() * x).norm() > lambda * x.norm() + 1e-9) ++violations;

    // Product of relabeled graphs against the product of factors.
    std::vector<MixingMatrix> seq;
    double bound = 1.0;
    const int len = length(rng);
    for (int t = 0; t < len; ++t) {
      seq.push_back(*BuildMixingMatrix(RandomRelabel(*g, rng), k));
      const std::vector<MixingMatrix> one = {seq.back()};
      bound *= ContractionFactor(one).value;
    }
    const double product = ContractionFactor(seq).value;
    if (product > bound + 1e-9) ++violations;
    const double gap = std::abs(product - DenseContraction(seq));
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-8) ++oracle_misses;
    if (std::abs(lambda - DenseContraction(single)) > 1e-8) ++oracle_misses;
  }
  return {violations == 0 && oracle_misses == 0,
          absl::StrFormat("%d bound violations, %d oracle misses, max |diff| %.2e",
                          violations, oracle_misses, worst_gap)};
}

// ---------------------------------------------------------------------------
// 3. Gradients against central differences.

double MeanLoss(const ParamVector& m, const Dataset& ds) {
  std::vector<double> scratch(m.size(), 0.0);
  double total = 0.0;
  for (const Sample& s : ds.samples) total += AccumulateSampleGradient(m, s, scratch);
  return total / static_cast<double>(ds.size());
}

Verdict Gradients() {
  Stopwatch watch;
  Rng rng = MakeRng(3);
  double worst = 0.0;
  for (int model = 0; model < 20; ++model) {
    const int classes = 2 + model % 4;
    const int dim = 3 + model % 7;
    const Dataset ds =
        GenerateSynthetic({.num_classes = classes, .dim = dim, .per_class = 4,
                           .separation = 2.0},
                          100 + model)
            .train;
    const ParamVector m = InitModel(
        {.input_dim = dim, .hidden = 4 + model % 9, .num_classes = classes},
        200 + model);
    const LossAndGradient lg = LossAndGrad(m, ds.samples);
    std::uniform_int_distribution<size_t> coord(0, m.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
      const size_t i = coord(rng);
      const double h = 1e-5;
      ParamVector plus = m, minus = m;
      plus.values[i] += h;
      minus.values[i] -= h;
      const double numeric = (MeanLoss(plus, ds) - MeanLoss(minus, ds)) / (2 * h);
      const double analytic = lg.grad.values[i];
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  const double seconds = watch.Seconds();
  return {worst < 1e-4 && seconds < 30,
          absl::StrFormat("max relative error %.2e over 1000 coordinates, %.2fs",
                          worst, seconds)};
}

// ---------------------------------------------------------------------------
// 4. Protocol fidelity.

SimConfig ProtocolConfig() {
  SimConfig cfg;
  cfg.n = 12;
  cfg.k = 4;
  cfg.rounds = 5;
  cfg.ticks_per_round = 20;
  cfg.mu = 20;
  cfg.sigma2 = 9;
  cfg.data = {.num_classes = 3, .dim = 5, .per_class = 60, .separation = 2};
  cfg.hidden = 8;
  cfg.attack_size = 5;
  cfg.sgd = {.lr = 0.05, .local_epochs = 1, .batch_size = 4};
  cfg.seed = 9;
  return cfg;
}

std::string Serialize(const RunLog& log) {
  std::ostringstream out;
  out << MetricsToCsv(log.metrics);
  for (const auto& round : log.snapshots) {
    for (const ParamVector& m : round) WriteModel(m, out);
  }
  return out.str();
}

Verdict ProtocolFidelity() {
  std::vector<std::string> failures;
  for (Protocol p : {Protocol::kBase, Protocol::kSamo}) {
    for (Topology t : {Topology::kStatic, Topology::kDynamic}) {
      const std::string name = absl::StrCat(ProtocolName(p), "/", TopologyName(t));
      SimConfig cfg = ProtocolConfig();
      cfg.protocol = p;
      cfg.topology = t;

      SimConfig frozen = cfg;
      frozen.sgd.lr = 0.0;
      const SimulationSetup setup = *PrepareSimulation(frozen);
      absl::StatusOr<RunLog> log = RunSimulation(frozen, {.check_topology = true});
      if (!log.ok()) {
        failures.push_back(absl::StrCat(name, ": ", log.status().message()));
        continue;
      }
      for (const auto& round : log->snapshots) {
        for (const ParamVector& m : round) {
          if (m != setup.initial_model) {
            failures.push_back(name + ": model moved with lr=0");
            break;
          }
        }
      }
      const int64_t per_wake = p == Protocol::kSamo ? cfg.k : 1;
      if (log->metrics.back().messages_cumulative != per_wake * log->wake_events) {
        failures.push_back(name + ": message count");
      }

      absl::StatusOr<RunLog> a = RunSimulation(cfg, {.check_topology = true});
      absl::StatusOr<RunLog> b = RunSimulation(cfg, {.check_topology = true});
      if (!a.ok() || !b.ok() || Serialize(*a) != Serialize(*b)) {
        failures.push_back(name + ": repeat differs");
      }
    }
  }

  // Single aggregating SAMO wake on a 4-regular view.
  ViewTable views(*GenerateKRegular(10, 4, uint64_t{5}));
  Rng rng = MakeRng(6);
  const SgdConfig sgd{.lr = 0.0};
  const DpConfig dp;
  StepContext ctx{&views, Topology::kDynamic, &sgd, &dp, &rng};
  const ModelLayout layout{.input_dim = 2, .hidden = 2, .num_classes = 2};
  NodeState node;
  node.model = InitModel(layout, 1);
  node.inbox = {node.model, InitModel(layout, 2), InitModel(layout, 3)};
  node.rng = MakeRng(7);
  absl::StatusOr<std::vector<Message>> samo = StepSamo(node, WakeEvent{}, ctx);
  if (!samo.ok() || samo->size() != 4 || !IsKRegular(views.graph(), 4)) {
    failures.push_back("aggregating SAMO wake did not send k messages");
  }
  absl::StatusOr<std::vector<Message>> base = StepBase(node, WakeEvent{}, ctx);
  if (!base.ok() || base->size() != 1) failures.push_back("base wake count");

  return {failures.empty(),
          failures.empty() ? "lr=0 frozen, counts, k-regularity and repeat hold"
                           : absl::StrJoin(failures, "; ")};
}

// ---------------------------------------------------------------------------
// 5. Attack correctness.

double BruteAccuracy(const std::vector<AttackRecord>& r) {
  std::vector<double> taus = {-INFINITY, INFINITY};
  for (const AttackRecord& a : r) taus.push_back(a.score);
  double best = 0.0;
  for (double tau : taus) {
    int correct = 0;
    for (const AttackRecord& a : r) correct += (a.score <= tau) == a.member;
    best = std::max(best, static_cast<double>(correct) / r.size());
  }
  return best;
}

double BruteTpr(const std::vector<AttackRecord>& r, double cap) {
  std::vector<double> taus = {-INFINITY};
  for (const AttackRecord& a : r) taus.push_back(a.score);
  int members = 0;
  for (const AttackRecord& a : r) members += a.member;
  const int others = static_cast<int>(r.size()) - members;
  double best = 0.0;
  for (double tau : taus) {
    int tp = 0, fp = 0;
    for (const AttackRecord& a : r) {
      if (a.score <= tau) (a.member ? tp : fp)++;
    }
    if (static_cast<double>(fp) / others <= cap) {
      best = std::max(best, static_cast<double>(tp) / members);
    }
  }
  return best;
}

Verdict AttackCorrectness() {
  Rng rng = MakeRng(5);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int size = std::uniform_int_distribution<int>(2, 60)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 20)(rng);
    std::vector<AttackRecord> r(size);
    for (int i = 0; i < size; ++i) {
      r[i].score = std::uniform_int_distribution<int>(0, levels)(rng) / 7.0;
      r[i].member = i % 2 == 0 || std::bernoulli_distribution(0.3)(rng);
    }
    r[1].member = false;
    absl::StatusOr<ThresholdAttack> acc = OptimalThresholdAttack(r);
    absl::StatusOr<double> tpr = TprAtFpr(r, 0.1);
    if (!acc.ok() || !tpr.ok() || std::abs(acc->accuracy - BruteAccuracy(r)) > 1e-12 ||
        std::abs(*tpr - BruteTpr(r, 0.1)) > 1e-12) {
      ++mismatches;
    }
  }
  std::vector<AttackRecord> constant(10);
  for (int i = 0; i < 10; ++i) constant[i] = {.score = 0.3, .member = i < 5};
  const double constant_acc = OptimalThresholdAttack(constant)->accuracy;
  const std::vector<double> perfect = {0.0, 1.0, 0.0};
  const std::vector<double> uniform = {0.5, 0.5};
  const double mpe_perfect = Mpe(perfect, 1);
  const double mpe_uniform = Mpe(uniform, 0);
  const bool pass = mismatches == 0 && constant_acc == 0.5 &&
                    std::abs(mpe_perfect) <= 1e-12 &&
                    std::abs(mpe_uniform - std::log(2.0)) <= 1e-12;
  return {pass, absl::StrFormat("%d/200 mismatches, constant %.3f, MPE %.2e / "
                                "ln2%+.2e",
                                mismatches, constant_acc, mpe_perfect,
                                mpe_uniform - std::log(2.0))};
}

// ---------------------------------------------------------------------------
// Shared synthetic setup for the learning criteria.

constexpr int kSeeds = 5;
constexpr double kLr = 0.02;
constexpr int kLocalEpochs = 5;
constexpr int kBatch = 8;
constexpr double kSeparation = 3.0;

SimConfig LearningConfig(uint64_t seed) {
  SimConfig cfg;
  cfg.n = 16;
  cfg.k = 2;
  cfg.rounds = 60;
  // 4 * 320 samples over 16 nodes, half of each for training: 40 per node.
  cfg.data = {.num_classes = 4, .dim = 16, .per_class = 320,
              .separation = kSeparation};
  cfg.hidden = 64;
  cfg.attack_size = 40;
  cfg.sgd.lr = kLr;
  cfg.sgd.local_epochs = kLocalEpochs;
  cfg.sgd.batch_size = kBatch;
  cfg.seed = seed;
  return cfg;
}

struct Summary {
  double peak_mia = 0.0;
  double peak_acc = 0.0;
  double mia_at_r90 = 0.0;
  int r90 = 0;
};

absl::StatusOr<Summary> Summarize(const SimConfig& cfg) {
  absl::StatusOr<RunLog> log = RunSimulation(cfg, {.keep_snapshots = false});
  if (!log.ok()) return log.status();
  Summary s;
  for (const MetricsRow& row : log->metrics) {
    s.peak_mia = std::max(s.peak_mia, row.mean_mia_acc);
    s.peak_acc = std::max(s.peak_acc, row.mean_test_acc);
  }
  for (const MetricsRow& row : log->metrics) {
    if (row.mean_test_acc >= 0.9 * s.peak_acc) {
      s.mia_at_r90 = row.mean_mia_acc;
      s.r90 = row.round;
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// 6. Untrained model against the permutation null.

double MeanAccuracy(const std::vector<std::vector<AttackRecord>>& nodes) {
  double sum = 0.0;
  for (const auto& r : nodes) sum += OptimalThresholdAttack(r)->accuracy;
  return sum / static_cast<double>(nodes.size());
}

Verdict NullCalibration() {
  Stopwatch watch;
  const SimConfig cfg = LearningConfig(0);
  absl::StatusOr<SimulationSetup> setup = PrepareSimulation(cfg);
  if (!setup.ok()) return {false, std::string(setup.status().message())};
  std::vector<std::vector<AttackRecord>> nodes;
  for (const AttackSet& set : setup->attack_sets) {
    nodes.push_back(ScoreAttackSet(setup->initial_model, set));
  }
  const double observed = MeanAccuracy(nodes);

  Rng rng = MakeRng(6);
  std::vector<double> null;
  for (int p = 0; p < 1000; ++p) {
    auto shuffled = nodes;
    for (auto& r : shuffled) {
      std::vector<bool> flags;
      for (const AttackRecord& a : r) flags.push_back(a.member);
      std::shuffle(flags.begin(), flags.end(), rng);
      for (size_t i = 0; i < r.size(); ++i) r[i].member = flags[i];
    }
    null.push_back(MeanAccuracy(shuffled));
  }
  const double lo = Quantile(null, 0.01), hi = Quantile(null, 0.99);
  const double seconds = watch.Seconds();
  return {observed >= lo && observed <= hi && seconds < 60,
          absl::StrFormat("mean mia %.4f, null band [%.4f, %.4f], %.1fs",
                          observed, lo, hi, seconds)};
}

// ---------------------------------------------------------------------------
// 7. Orderings of dynamic/static and SAMO/Base at the 90% accuracy round.

Verdict Orderings() {
  Stopwatch watch;
  int dyn_base = 0, dyn_samo = 0, samo_static = 0, samo_dynamic = 0;
  std::string trace;
  for (int seed = 0; seed < kSeeds; ++seed) {
    double mia[2][2];
    for (Protocol p : {Protocol::kBase, Protocol::kSamo}) {
      for (Topology t : {Topology::kStatic, Topology::kDynamic}) {
        SimConfig cfg = LearningConfig(seed);
        cfg.protocol = p;
        cfg.topology = t;
        absl::StatusOr<Summary> s = Summarize(cfg);
        if (!s.ok()) return {false, std::string(s.status().message())};
        mia[static_cast<int>(p)][static_cast<int>(t)] = s->mia_at_r90;
      }
    }
    dyn_base += mia[0][1] <= mia[0][0];
    dyn_samo += mia[1][1] <= mia[1][0];
    samo_static += mia[1][0] <= mia[0][0];
    samo_dynamic += mia[1][1] <= mia[0][1];
    absl::StrAppendFormat(&trace, " s%d[%.3f %.3f %.3f %.3f]", seed, mia[0][0],
                          mia[0][1], mia[1][0], mia[1][1]);
  }
  const double seconds = watch.Seconds();
  const bool pass = dyn_base >= 4 && dyn_samo >= 4 && samo_static >= 4 &&
                    samo_dynamic >= 4 && seconds < 900;
  return {pass,
          absl::StrFormat("dyn<=static base %d/5 samo %d/5, samo<=base static "
                          "%d/5 dynamic %d/5, %.0fs; mia base-st base-dyn "
                          "samo-st samo-dyn:%s",
                          dyn_base, dyn_samo, samo_static, samo_dynamic, seconds,
                          trace)};
}

// ---------------------------------------------------------------------------
// 8. Dirichlet (beta = 0.1) against iid.

Verdict NonIid() {
  int higher = 0;
  std::string trace;
  for (int seed = 0; seed < kSeeds; ++seed) {
    SimConfig iid = LearningConfig(seed);
    SimConfig skewed = iid;
    skewed.partition = Partition::kDirichlet;
    skewed.beta = 0.1;
    absl::StatusOr<Summary> a = Summarize(iid);
    absl::StatusOr<Summary> b = Summarize(skewed);
    if (!a.ok() || !b.ok()) return {false, "simulation failed"};
    higher += b->peak_mia > a->peak_mia;
    absl::StrAppendFormat(&trace, " %.3f/%.3f", b->peak_mia, a->peak_mia);
  }
  return {higher >= 4, absl::StrFormat("higher in %d/5 seeds (dirichlet/iid):%s",
                                       higher, trace)};
}

// ---------------------------------------------------------------------------
// 9. DP-SGD with sigma = 2, C = 1.

Verdict DpEffect() {
  int lower_mia = 0, lower_acc = 0;
  std::string trace;
  for (int seed = 0; seed < kSeeds; ++seed) {
    SimConfig plain = LearningConfig(seed);
    SimConfig dp = plain;
    dp.dp = {.enabled = true, .clip_norm = 1.0, .noise_multiplier = 2.0};
    absl::StatusOr<Summary> a = Summarize(plain);
    absl::StatusOr<Summary> b = Summarize(dp);
    if (!a.ok() || !b.ok()) return {false, "simulation failed"};
    const bool mia = b->peak_mia < a->peak_mia;
    const bool acc = b->peak_acc <= a->peak_acc;
    lower_mia += mia;
    lower_acc += acc;
    absl::StrAppendFormat(&trace, " mia %.3f/%.3f acc %.3f/%.3f;", b->peak_mia,
                          a->peak_mia, b->peak_acc, a->peak_acc);
  }
  // Closed-form minimum over real orders.
  const double c = 1.0 / 2, l = std::log(1e5), r = std::sqrt(l / c);
  const double oracle = c * (1 + r) + l / r;
  const double eps = RdpEpsilon(1.0, 1, 1e-5);
  const bool eps_ok = std::abs(eps - 5.30) <= 0.02 && eps >= oracle;
  return {lower_mia >= 4 && lower_acc >= 4 && eps_ok,
          absl::StrFormat("mia lower %d/5, acc lower-or-equal %d/5, eps %.4f "
                          "(oracle %.4f); dp/plain:%s",
                          lower_mia, lower_acc, eps, oracle, trace)};
}

// ---------------------------------------------------------------------------
// 10. Canary audit on an overfitting configuration.

double MaxTpr(const std::vector<std::vector<AttackRecord>>& nodes, double cap) {
  double best = 0.0;
  for (const auto& r : nodes) {
    if (r.empty()) continue;
    best = std::max(best, *TprAtFpr(r, cap));
  }
  return best;
}

Verdict CanaryAuditCheck() {
  SimConfig cfg = LearningConfig(0);
  cfg.canaries = 4 * cfg.n;
  cfg.sgd.local_epochs = 20;
  absl::StatusOr<SimulationSetup> setup = PrepareSimulation(cfg);
  if (!setup.ok()) return {false, std::string(setup.status().message())};
  const std::vector<ParamVector> initial(cfg.n, setup->initial_model);
  absl::StatusOr<std::vector<std::vector<AttackRecord>>> records =
      CanaryRecords(initial, setup->canaries, setup->data.test_pool);
  if (!records.ok()) return {false, std::string(records.status().message())};
  const double round0 = MaxTpr(*records, cfg.fpr_cap);

  Rng rng = MakeRng(10);
  std::vector<double> null;
  for (int p = 0; p < 1000; ++p) {
    auto shuffled = *records;
    for (auto& r : shuffled) {
      std::vector<bool> flags;
      for (const AttackRecord& a : r) flags.push_back(a.member);
      std::shuffle(flags.begin(), flags.end(), rng);
      for (size_t i = 0; i < r.size(); ++i) r[i].member = flags[i];
    }
    null.push_back(MaxTpr(shuffled, cfg.fpr_cap));
  }
  const double lo = Quantile(null, 0.01), hi = Quantile(null, 0.99);

  absl::StatusOr<RunLog> log = RunSimulation(cfg, {.keep_snapshots = false});
  if (!log.ok()) return {false, std::string(log.status().message())};
  const double final_tpr = log->metrics.back().max_canary_tpr.value_or(0.0);
  const double logged_round0 = log->metrics.front().max_canary_tpr.value_or(-1.0);
  const bool pass = final_tpr >= 0.8 && round0 >= lo && round0 <= hi &&
                    logged_round0 == round0;
  return {pass, absl::StrFormat("final max TPR %.3f, round 0 %.3f in null band "
                                "[%.3f, %.3f]",
                                final_tpr, round0, lo, hi)};
}

}  // namespace
}  // namespace gossipmia

int main() {
  using gossipmia::Verdict;
  const std::vector<std::function<Verdict()>> criteria = {
      gossipmia::SpectralGap,       gossipmia::ContractionBounds,
      gossipmia::Gradients,         gossipmia::ProtocolFidelity,
      gossipmia::AttackCorrectness, gossipmia::NullCalibration,
      gossipmia::Orderings,         gossipmia::NonIid,
      gossipmia::DpEffect,          gossipmia::CanaryAuditCheck};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Verdict v = criteria[i]();
    failed += !v.pass;
    std::printf("Criterion %zu: %s %s\n", i + 1, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
