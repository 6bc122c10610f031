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

// Tick-driven simulator for Base Gossip and Send-All-Merge-Once learning
// over static or PeerSwap-dynamic k-regular topologies.

#ifndef GOSSIPMIA_PROTOCOL_H_
#define GOSSIPMIA_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/attack.h"
#include "gossipmia/data.h"
#include "gossipmia/learner.h"
#include "gossipmia/privacy.h"
#include "gossipmia/topology.h"

namespace gossipmia {

enum class Protocol { kBase, kSamo };
enum class Topology { kStatic, kDynamic };
enum class Partition { kIid, kDirichlet };

absl::string_view ProtocolName(Protocol p);
absl::string_view TopologyName(Topology t);
absl::string_view PartitionName(Partition p);
absl::StatusOr<Protocol> ParseProtocol(absl::string_view name);
absl::StatusOr<Topology> ParseTopology(absl::string_view name);
absl::StatusOr<Partition> ParsePartition(absl::string_view name);

struct SimConfig {
  int n = 150;
  int k = 5;
  Protocol protocol = Protocol::kBase;
  Topology topology = Topology::kStatic;
  int rounds = 250;
  int ticks_per_round = 100;
  double mu = 100.0;
  double sigma2 = 100.0;
  SgdConfig sgd;
  DpConfig dp;

  // Data and model.
  SyntheticOptions data{.num_classes = 10, .dim = 32, .per_class = 300,
                        .separation = 3.0};
  int hidden = 64;
  Partition partition = Partition::kIid;
  double beta = 0.5;
  double test_frac = 0.5;

  // Evaluation.
  int canaries = 0;
  int attack_size = 50;
  double fpr_cap = kDefaultFprCap;

  uint64_t seed = 0;
};

absl::Status ValidateSimConfig(const SimConfig& cfg);

struct NodeState {
  NodeId id = 0;
  ParamVector model;
  // Received models; holds theta_i (initially theta^(0)) first under SAMO.
  std::vector<ParamVector> inbox;
  int64_t wake_interval = 1;
  NodeSplit split;
  PrivacyLedger ledger;
  Rng rng;
};

struct Message {
  NodeId from = 0;
  NodeId to = 0;
  ParamVector model;
};

struct WakeEvent {};
struct ReceiveEvent {
  NodeId from = 0;
  ParamVector model;
};
using Event = std::variant<WakeEvent, ReceiveEvent>;

// Shared, mutable simulation context for a single step.
struct StepContext {
  ViewTable* views = nullptr;
  Topology topology = Topology::kStatic;
  const SgdConfig* sgd = nullptr;
  const DpConfig* dp = nullptr;
  // Neighbor selection and PeerSwap draws.
  Rng* rng = nullptr;
};

// Wake: (dynamic) PeerSwap, then send theta_i to one random neighbor.
// Receive: average with the incoming model, then train locally.
absl::StatusOr<std::vector<Message>> StepBase(NodeState& node,
                                              const Event& event,
                                              StepContext& ctx);

// Wake: (dynamic) PeerSwap; if the inbox holds more than theta_i, average
// it, train, and reset it to {theta_i}; then send theta_i to every
// neighbor. Receive: store the model.
absl::StatusOr<std::vector<Message>> StepSamo(NodeState& node,
                                              const Event& event,
                                              StepContext& ctx);

// One wake interval per node from N(mu, sigma2), rounded and clamped to
// >= 1.
std::vector<int64_t> DrawWakeIntervals(int n, double mu, double sigma2,
                                       Rng& rng);

// Wake ticks Delta_i, 2 Delta_i, ... <= total_ticks for each node.
std::vector<std::vector<int64_t>> ScheduleWakeups(int n, double mu,
                                                  double sigma2,
                                                  int64_t total_ticks,
                                                  uint64_t seed);

std::vector<ParamVector> SnapshotModels(const std::vector<NodeState>& nodes);

struct MetricsRow {
  int round = 0;
  double mean_test_acc = 0.0;
  double mean_mia_acc = 0.0;
  double mean_tpr_at_1fpr = 0.0;
  double mean_gen_error = 0.0;
  std::optional<double> max_canary_tpr;
  int64_t messages_cumulative = 0;
  std::optional<double> eps_spent;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct NodePrivacy {
  int64_t steps = 0;
  double epsilon = 0.0;
};

struct RunLog {
  // snapshots[r] holds every model after round r + 1.
  std::vector<std::vector<ParamVector>> snapshots;
  // Messages sent during each round.
  std::vector<int64_t> messages_per_round;
  // Round 0 (the shared initial model) followed by one row per round.
  std::vector<MetricsRow> metrics;
  std::vector<NodePrivacy> privacy;
  int64_t wake_events = 0;
  // Messages dropped for a layout mismatch.
  int64_t rejected_messages = 0;
};

struct SimulationOptions {
  bool keep_snapshots = true;
  // Checked after every wake event in dynamic mode.
  bool check_topology = false;
};

absl::StatusOr<RunLog> RunSimulation(const SimConfig& cfg,
                                     const SimulationOptions& options = {});

// Everything a run is built from, before any event fires.
struct SimulationSetup {
  SyntheticData data;
  ModelLayout layout;
  ParamVector initial_model;
  std::vector<NodeSplit> splits;  // canaries included
  std::vector<AttackSet> attack_sets;
  CanarySet canaries;
  Graph graph;
};

absl::StatusOr<SimulationSetup> PrepareSimulation(const SimConfig& cfg);

// Evaluation of one snapshot against a setup.
absl::StatusOr<MetricsRow> EvaluateSnapshot(const SimConfig& cfg,
                                            const SimulationSetup& setup,
                                            std::span<const ParamVector> models,
                                            int round);

}  // namespace gossipmia

#endif  // GOSSIPMIA_PROTOCOL_H_
