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

#include "gossipmia/protocol.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace gossipmia {
namespace {

// Stream ids for the independent random sources of one run.
enum Stream : uint64_t {
  kDataStream = 1,
  kPartitionStream,
  kCanaryStream,
  kInitStream,
  kGraphStream,
  kWakeStream,
  kAttackSetStream,
  kTopologyStream,
  kNodeStreamBase = 1000,
};

uint64_t SubSeed(uint64_t seed, Stream stream) {
  return MakeRng(seed, stream)();
}

template <typename Enum, size_t N>
absl::StatusOr<Enum> ParseByName(absl::string_view name,
                                 const Enum (&values)[N],
                                 absl::string_view (*to_name)(Enum),
                                 absl::string_view what) {
  std::string expected;
  for (Enum v : values) {
    if (name == to_name(v)) return v;
    absl::StrAppend(&expected, expected.empty() ? "" : ", ", to_name(v));
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown ", what, " \"", name, "\" (expected ", expected, ")"));
}

ParamVector Train(NodeState& node, const ParamVector& start,
                  const StepContext& ctx) {
  return DpLocalUpdate(start, node.split.train, *ctx.sgd, *ctx.dp, node.ledger,
                       node.rng);
}

absl::Status SwapIfDynamic(NodeState& node, StepContext& ctx) {
  if (ctx.topology != Topology::kDynamic) return absl::OkStatus();
  absl::StatusOr<ViewTable> swapped = SwapOnWake(*ctx.views, node.id, *ctx.rng);
  if (!swapped.ok()) return swapped.status();
  *ctx.views = *std::move(swapped);
  return absl::OkStatus();
}

absl::Status CheckLayout(const NodeState& node, const ReceiveEvent& msg) {
  if (msg.model.layout == node.model.layout &&
      msg.model.size() == node.model.size()) {
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "node ", node.id, " rejected a model from node ", msg.from,
      " with a different layout"));
}

}  // namespace

absl::string_view ProtocolName(Protocol p) {
  return p == Protocol::kBase ? "base" : "samo";
}
absl::string_view TopologyName(Topology t) {
  return t == Topology::kStatic ? "static" : "dynamic";
}
absl::string_view PartitionName(Partition p) {
  return p == Partition::kIid ? "iid" : "dirichlet";
}

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name) {
  static constexpr Protocol kAll[] = {Protocol::kBase, Protocol::kSamo};
  return ParseByName(name, kAll, &ProtocolName, "protocol");
}
absl::StatusOr<Topology> ParseTopology(absl::string_view name) {
  static constexpr Topology kAll[] = {Topology::kStatic, Topology::kDynamic};
  return ParseByName(name, kAll, &TopologyName, "topology");
}
absl::StatusOr<Partition> ParsePartition(absl::string_view name) {
  static constexpr Partition kAll[] = {Partition::kIid, Partition::kDirichlet};
  return ParseByName(name, kAll, &PartitionName, "partition");
}

absl::Status ValidateSimConfig(const SimConfig& cfg) {
  if (cfg.k < 1 || cfg.k >= cfg.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n > k >= 1, got n=", cfg.n, " k=", cfg.k));
  }
  if ((static_cast<int64_t>(cfg.n) * cfg.k) % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n*k must be even, got n=", cfg.n, " k=", cfg.k));
  }
  if (cfg.rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds must be >= 1, got ", cfg.rounds));
  }
  if (cfg.ticks_per_round < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ticks_per_round must be >= 1, got ", cfg.ticks_per_round));
  }
  if (!(cfg.mu > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("mu must be > 0, got ", cfg.mu));
  }
  if (!(cfg.sigma2 >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be >= 0, got ", cfg.sigma2));
  }
  if (absl::Status s = ValidateSgdConfig(cfg.sgd); !s.ok()) return s;
  if (absl::Status s = ValidateDpConfig(cfg.dp); !s.ok()) return s;
  if (cfg.data.num_classes < 2 || cfg.data.dim < 1 || cfg.data.per_class < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need classes >= 2, dim >= 1, per_class >= 1, got ",
        cfg.data.num_classes, ", ", cfg.data.dim, ", ", cfg.data.per_class));
  }
  if (!(cfg.data.separation >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sep must be >= 0, got ", cfg.data.separation));
  }
  if (cfg.hidden < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("hidden must be >= 1, got ", cfg.hidden));
  }
  if (cfg.partition == Partition::kDirichlet && !(cfg.beta > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must be > 0, got ", cfg.beta));
  }
  if (!(cfg.test_frac > 0.0 && cfg.test_frac < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("test_frac must lie in (0, 1), got ", cfg.test_frac));
  }
  const int64_t pool =
      static_cast<int64_t>(cfg.data.num_classes) * cfg.data.per_class;
  if (cfg.canaries < 0 || cfg.canaries > pool) {
    return absl::InvalidArgumentError(absl::StrCat(
        "canaries must lie in [0, ", pool, "], got ", cfg.canaries));
  }
  if (pool - cfg.canaries < 2 * static_cast<int64_t>(cfg.n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "classes*per_class leaves fewer than 2 samples per node for n=",
        cfg.n));
  }
  if (cfg.attack_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("attack_size must be >= 1, got ", cfg.attack_size));
  }
  if (!(cfg.fpr_cap >= 0.0 && cfg.fpr_cap <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("fpr_cap must lie in [0, 1], got ", cfg.fpr_cap));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Message>> StepBase(NodeState& node,
                                              const Event& event,
                                              StepContext& ctx) {
  std::vector<Message> out;
  if (const auto* msg = std::get_if<ReceiveEvent>(&event)) {
    if (absl::Status s = CheckLayout(node, *msg); !s.ok()) return s;
    ParamVector merged = node.model;
    for (size_t i = 0; i < merged.size(); ++i) {
      merged.values[i] = 0.5 * (merged.values[i] + msg->model.values[i]);
    }
    node.model = Train(node, merged, ctx);
    return out;
  }
  if (absl::Status s = SwapIfDynamic(node, ctx); !s.ok()) return s;
  const std::set<NodeId>& view = ctx.views->view(node.id);
  std::uniform_int_distribution<size_t> pick(0, view.size() - 1);
  auto it = view.begin();
  std::advance(it, pick(*ctx.rng));
  out.push_back({node.id, *it, node.model});
  return out;
}

absl::StatusOr<std::vector<Message>> StepSamo(NodeState& node,
                                              const Event& event,
                                              StepContext& ctx) {
  std::vector<Message> out;
  if (const auto* msg = std::get_if<ReceiveEvent>(&event)) {
    if (absl::Status s = CheckLayout(node, *msg); !s.ok()) return s;
    node.inbox.push_back(msg->model);
    return out;
  }
  if (absl::Status s = SwapIfDynamic(node, ctx); !s.ok()) return s;
  if (node.inbox.size() > 1) {
    absl::StatusOr<ParamVector> mean = AverageModels(node.inbox);
    if (!mean.ok()) return mean.status();
    node.model = Train(node, *mean, ctx);
    node.inbox.assign(1, node.model);
  }
  for (NodeId j : ctx.views->view(node.id)) {
    out.push_back({node.id, j, node.model});
  }
  return out;
}

std::vector<int64_t> DrawWakeIntervals(int n, double mu, double sigma2,
                                       Rng& rng) {
  std::vector<int64_t> intervals(n);
  std::normal_distribution<double> wait(mu, std::sqrt(std::max(sigma2, 0.0)));
  for (int64_t& d : intervals) {
    const double draw = sigma2 > 0.0 ? wait(rng) : mu;
    d = std::max<int64_t>(1, std::llround(draw));
  }
  return intervals;
}

std::vector<std::vector<int64_t>> ScheduleWakeups(int n, double mu,
                                                  double sigma2,
                                                  int64_t total_ticks,
                                                  uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::vector<std::vector<int64_t>> ticks(n);
  const std::vector<int64_t> intervals = DrawWakeIntervals(n, mu, sigma2, rng);
  for (int i = 0; i < n; ++i) {
    for (int64_t t = intervals[i]; t <= total_ticks; t += intervals[i]) {
      ticks[i].push_back(t);
    }
  }
  return ticks;
}

std::vector<ParamVector> SnapshotModels(const std::vector<NodeState>& nodes) {
  std::vector<ParamVector> out;
  out.reserve(nodes.size());
  for (const NodeState& node : nodes) out.push_back(node.model);
  return out;
}

absl::StatusOr<SimulationSetup> PrepareSimulation(const SimConfig& cfg) {
  if (absl::Status s = ValidateSimConfig(cfg); !s.ok()) return s;
  SimulationSetup setup;
  setup.data = GenerateSynthetic(cfg.data, SubSeed(cfg.seed, kDataStream));

  Dataset pool = setup.data.train;
  if (cfg.canaries > 0) {
    absl::StatusOr<CanarySet> canaries = MakeCanaries(
        setup.data.train, cfg.canaries, cfg.n, SubSeed(cfg.seed, kCanaryStream));
    if (!canaries.ok()) return canaries.status();
    setup.canaries = *std::move(canaries);
    pool = WithoutCanarySources(setup.data.train, setup.canaries);
  }

  const uint64_t partition_seed = SubSeed(cfg.seed, kPartitionStream);
  absl::StatusOr<std::vector<NodeSplit>> splits =
      cfg.partition == Partition::kIid
          ? PartitionIid(pool, cfg.n, cfg.test_frac, partition_seed)
          : PartitionDirichlet(pool, cfg.n, cfg.beta, cfg.test_frac,
                               partition_seed);
  if (!splits.ok()) return splits.status();
  setup.splits = *std::move(splits);

  // Attack sets come from the splits before canaries join them.
  const uint64_t attack_seed = SubSeed(cfg.seed, kAttackSetStream);
  for (const NodeSplit& split : setup.splits) {
    const int size = static_cast<int>(std::min<size_t>(
        {static_cast<size_t>(cfg.attack_size), split.train.size(),
         split.test.size()}));
    absl::StatusOr<AttackSet> set = BuildAttackSet(split, size, attack_seed);
    if (!set.ok()) return set.status();
    setup.attack_sets.push_back(*std::move(set));
  }
  InjectCanaries(setup.canaries, setup.splits);

  setup.layout = {cfg.data.dim, cfg.hidden, cfg.data.num_classes};
  setup.initial_model = InitModel(setup.layout, SubSeed(cfg.seed, kInitStream));
  absl::StatusOr<Graph> graph =
      GenerateKRegular(cfg.n, cfg.k, SubSeed(cfg.seed, kGraphStream));
  if (!graph.ok()) return graph.status();
  setup.graph = *std::move(graph);
  return setup;
}

absl::StatusOr<MetricsRow> EvaluateSnapshot(const SimConfig& cfg,
                                            const SimulationSetup& setup,
                                            std::span<const ParamVector> models,
                                            int round) {
  MetricsRow row;
  row.round = round;
  const double n = static_cast<double>(models.size());
  for (size_t i = 0; i < models.size(); ++i) {
    row.mean_test_acc += Accuracy(models[i], setup.data.test_pool) / n;
    row.mean_gen_error += GeneralizationError(models[i], setup.splits[i]) / n;
  }
  absl::StatusOr<NodeAttackMetrics> attack =
      AttackAllNodes(models, setup.attack_sets, cfg.fpr_cap);
  if (!attack.ok()) return attack.status();
  row.mean_mia_acc = attack->mean_mia_accuracy;
  row.mean_tpr_at_1fpr = attack->mean_tpr_at_fpr;
  if (cfg.canaries > 0) {
    absl::StatusOr<CanaryAudit> audit = AuditCanaries(
        models, setup.canaries, setup.data.test_pool, cfg.fpr_cap);
    if (!audit.ok()) return audit.status();
    row.max_canary_tpr = audit->max_tpr_at_fpr;
  }
  return row;
}

absl::StatusOr<RunLog> RunSimulation(const SimConfig& cfg,
                                     const SimulationOptions& options) {
  absl::StatusOr<SimulationSetup> setup = PrepareSimulation(cfg);
  if (!setup.ok()) return setup.status();

  Rng wake_rng = MakeRng(SubSeed(cfg.seed, kWakeStream));
  const std::vector<int64_t> intervals =
      DrawWakeIntervals(cfg.n, cfg.mu, cfg.sigma2, wake_rng);
  std::vector<NodeState> nodes(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    NodeState& node = nodes[i];
    node.id = i;
    node.model = setup->initial_model;
    if (cfg.protocol == Protocol::kSamo) node.inbox.assign(1, node.model);
    node.wake_interval = intervals[i];
    node.split = setup->splits[i];
    node.ledger.sigma = cfg.dp.enabled ? cfg.dp.noise_multiplier : 0.0;
    node.rng = MakeRng(cfg.seed, kNodeStreamBase + static_cast<uint64_t>(i));
  }

  ViewTable views(setup->graph);
  Rng topology_rng = MakeRng(SubSeed(cfg.seed, kTopologyStream));
  StepContext ctx{&views, cfg.topology, &cfg.sgd, &cfg.dp, &topology_rng};
  auto step = cfg.protocol == Protocol::kBase ? &StepBase : &StepSamo;

  RunLog log;
  auto privacy_spent = [&]() -> std::optional<double> {
    if (!cfg.dp.enabled) return std::nullopt;
    double worst = 0.0;
    for (const NodeState& node : nodes) {
      if (node.ledger.steps > 0) {
        worst = std::max(worst, RdpEpsilon(cfg.dp.noise_multiplier,
                                           node.ledger.steps, cfg.dp.delta));
      }
    }
    return worst;
  };
  {
    const std::vector<ParamVector> initial = SnapshotModels(nodes);
    absl::StatusOr<MetricsRow> row = EvaluateSnapshot(cfg, *setup, initial, 0);
    if (!row.ok()) return row.status();
    row->eps_spent = privacy_spent();
    log.metrics.push_back(*row);
  }

  auto diverged = [&](const NodeState& node) -> absl::Status {
    if (node.model.AllFinite()) return absl::OkStatus();
    return absl::InternalError(absl::StrCat(
        "node ", node.id, " has a non-finite model; training diverged"));
  };

  const int64_t total_ticks =
      static_cast<int64_t>(cfg.rounds) * cfg.ticks_per_round;
  int64_t messages_this_round = 0;
  int64_t messages_total = 0;
  for (int64_t tick = 1; tick <= total_ticks; ++tick) {
    for (NodeState& node : nodes) {
      if (tick % node.wake_interval != 0) continue;
      ++log.wake_events;
      absl::StatusOr<std::vector<Message>> sent = step(node, WakeEvent{}, ctx);
      if (!sent.ok()) return sent.status();
      for (Message& msg : *sent) {
        ++messages_this_round;
        NodeState& receiver = nodes[msg.to];
        absl::StatusOr<std::vector<Message>> reply =
            step(receiver, ReceiveEvent{msg.from, std::move(msg.model)}, ctx);
        if (!reply.ok()) {
          if (!absl::IsInvalidArgument(reply.status())) return reply.status();
          std::cerr << reply.status().message() << "\n";
          ++log.rejected_messages;
          continue;
        }
        if (absl::Status s = diverged(receiver); !s.ok()) return s;
      }
      if (absl::Status s = diverged(node); !s.ok()) return s;
      if (options.check_topology && !IsKRegular(views.graph(), cfg.k)) {
        return absl::InternalError(absl::StrCat(
            "topology lost ", cfg.k, "-regularity at tick ", tick));
      }
    }
    if (tick % cfg.ticks_per_round == 0) {
      const int round = static_cast<int>(tick / cfg.ticks_per_round);
      std::vector<ParamVector> snapshot = SnapshotModels(nodes);
      absl::StatusOr<MetricsRow> row =
          EvaluateSnapshot(cfg, *setup, snapshot, round);
      if (!row.ok()) return row.status();
      messages_total += messages_this_round;
      row->messages_cumulative = messages_total;
      row->eps_spent = privacy_spent();
      log.metrics.push_back(*row);
      log.messages_per_round.push_back(messages_this_round);
      messages_this_round = 0;
      if (options.keep_snapshots) log.snapshots.push_back(std::move(snapshot));
    }
  }
  for (const NodeState& node : nodes) {
    log.privacy.push_back(
        {node.ledger.steps,
         cfg.dp.enabled && node.ledger.steps > 0
             ? RdpEpsilon(cfg.dp.noise_multiplier, node.ledger.steps,
                          cfg.dp.delta)
             : 0.0});
  }
  return log;
}

}  // namespace gossipmia
