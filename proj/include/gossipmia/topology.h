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

// k-regular communication graphs and their evolution under PeerSwap.

#ifndef GOSSIPMIA_TOPOLOGY_H_
#define GOSSIPMIA_TOPOLOGY_H_

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/rng.h"

namespace gossipmia {

using NodeId = int;

// Undirected simple graph over dense node ids 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_nodes) : adjacency_(num_nodes) {}

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  const std::set<NodeId>& neighbors(NodeId i) const { return adjacency_[i]; }

  // Fails on self-loops, duplicates and out-of-range ids.
  absl::Status AddEdge(NodeId i, NodeId j);
  bool HasEdge(NodeId i, NodeId j) const;
  int64_t num_edges() const;
  bool IsConnected() const;

  // Edges as (i, j) with i < j in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> Edges() const;

  // One "i j" pair per line, i < j. The node count is not encoded; the
  // parser takes it explicitly.
  std::string ToEdgeList() const;
  static absl::StatusOr<Graph> FromEdgeList(int num_nodes,
                                            absl::string_view text);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class ViewTable;
  friend absl::StatusOr<class ViewTable> PeerSwap(const ViewTable&, NodeId,
                                                  NodeId);
  std::vector<std::set<NodeId>> adjacency_;
};

// Per-node views N^p(i) at logical time p. Symmetric by construction.
class ViewTable {
 public:
  ViewTable() = default;
  explicit ViewTable(Graph graph, int64_t time = 0)
      : graph_(std::move(graph)), time_(time) {}

  int num_nodes() const { return graph_.num_nodes(); }
  const std::set<NodeId>& view(NodeId i) const { return graph_.neighbors(i); }
  int64_t time() const { return time_; }
  const Graph& graph() const { return graph_; }

  friend bool operator==(const ViewTable&, const ViewTable&) = default;

 private:
  friend absl::StatusOr<ViewTable> PeerSwap(const ViewTable&, NodeId, NodeId);
  Graph graph_;
  int64_t time_ = 0;
};

// Samples a simple k-regular graph by stub pairing. Stubs are paired one at
// a time among the pairs that keep the graph simple, restarting on dead
// ends. For k >= 2 disconnected samples are rejected as well, so the result
// is uniform-ish over connected k-regular graphs. Dense degrees are drawn
// through the complement.
absl::StatusOr<Graph> GenerateKRegular(int n, int k, Rng& rng);
absl::StatusOr<Graph> GenerateKRegular(int n, int k, uint64_t seed);

// Exchanges the graph positions of i and j. Requires j in view(i). The
// result carries time + 1.
absl::StatusOr<ViewTable> PeerSwap(const ViewTable& views, NodeId i,
                                   NodeId j);

// PeerSwap with a neighbor of i chosen uniformly by rng.
absl::StatusOr<ViewTable> SwapOnWake(const ViewTable& views, NodeId i,
                                     Rng& rng);

// Applies a uniformly random permutation to the node ids.
Graph RandomRelabel(const Graph& g, Rng& rng);
// Node i of g becomes node perm[i] of the result.
Graph Relabel(const Graph& g, const std::vector<NodeId>& perm);

bool IsKRegular(const Graph& g, int k);

}  // namespace gossipmia

#endif  // GOSSIPMIA_TOPOLOGY_H_
