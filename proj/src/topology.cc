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

#include "gossipmia/topology.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace gossipmia {
namespace {

constexpr int kMaxGenerationAttempts = 100000;

// One pass of incremental stub pairing. Returns false on a dead end, where
// no remaining stub pair can be joined without a loop or multi-edge.
bool TryPairStubs(int n, int k, Rng& rng, Graph& out) {
  Graph g(n);
  std::vector<NodeId> stubs;
  stubs.reserve(static_cast<size_t>(n) * k);
  for (int rep = 0; rep < k; ++rep) {
    for (NodeId v = 0; v < n; ++v) stubs.push_back(v);
  }
  std::vector<int> leftover(n);
  while (!stubs.empty()) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::fill(leftover.begin(), leftover.end(), 0);
    for (size_t s = 0; s + 1 < stubs.size(); s += 2) {
      NodeId a = stubs[s];
      NodeId b = stubs[s + 1];
      if (a != b && !g.HasEdge(a, b)) {
        g.AddEdge(a, b).IgnoreError();
      } else {
        ++leftover[a];
        ++leftover[b];
      }
    }
    std::vector<NodeId> pending;
    for (NodeId v = 0; v < n; ++v) {
      if (leftover[v] > 0) pending.push_back(v);
    }
    bool suitable = pending.empty();
    for (size_t x = 0; x < pending.size() && !suitable; ++x) {
      for (size_t y = x + 1; y < pending.size(); ++y) {
        if (!g.HasEdge(pending[x], pending[y])) {
          suitable = true;
          break;
        }
      }
    }
    if (!suitable) return false;
    stubs.clear();
    for (NodeId v : pending) {
      for (int c = 0; c < leftover[v]; ++c) stubs.push_back(v);
    }
  }
  out = std::move(g);
  return true;
}

Graph Complement(const Graph& g) {
  const int n = g.num_nodes();
  Graph c(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (!g.HasEdge(i, j)) c.AddEdge(i, j).IgnoreError();
    }
  }
  return c;
}

absl::StatusOr<Graph> SampleRegular(int n, int k, bool require_connected,
                                    Rng& rng) {
  if (k == 0) return Graph(n);
  Graph g;
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    if (!TryPairStubs(n, k, rng, g)) continue;
    if (require_connected && !g.IsConnected()) continue;
    return g;
  }
  return absl::ResourceExhaustedError(
      absl::StrCat("no ", k, "-regular graph on ", n, " nodes after ",
                   kMaxGenerationAttempts, " attempts"));
}

}  // namespace

absl::Status Graph::AddEdge(NodeId i, NodeId j) {
  if (i < 0 || j < 0 || i >= num_nodes() || j >= num_nodes()) {
    return absl::OutOfRangeError(absl::StrCat("edge (", i, ",", j,
                                              ") outside 0..", num_nodes() - 1));
  }
  if (i == j) {
    return absl::InvalidArgumentError(absl::StrCat("self-loop at ", i));
  }
  if (HasEdge(i, j)) {
    return absl::AlreadyExistsError(
        absl::StrCat("duplicate edge (", i, ",", j, ")"));
  }
  adjacency_[i].insert(j);
  adjacency_[j].insert(i);
  return absl::OkStatus();
}

bool Graph::HasEdge(NodeId i, NodeId j) const {
  return adjacency_[i].contains(j);
}

int64_t Graph::num_edges() const {
  int64_t twice = 0;
  for (const auto& nbrs : adjacency_) twice += static_cast<int64_t>(nbrs.size());
  return twice / 2;
}

bool Graph::IsConnected() const {
  if (num_nodes() <= 1) return true;
  std::vector<bool> seen(num_nodes(), false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == num_nodes();
}

std::vector<std::pair<NodeId, NodeId>> Graph::Edges() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < num_nodes(); ++i) {
    for (NodeId j : adjacency_[i]) {
      if (i < j) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::string Graph::ToEdgeList() const {
  std::string out;
  for (const auto& [i, j] : Edges()) absl::StrAppend(&out, i, " ", j, "\n");
  return out;
}

absl::StatusOr<Graph> Graph::FromEdgeList(int num_nodes,
                                          absl::string_view text) {
  Graph g(num_nodes);
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    std::vector<absl::string_view> parts =
        absl::StrSplit(line, ' ', absl::SkipWhitespace());
    if (parts.empty()) continue;
    int i = 0;
    int j = 0;
    if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &i) ||
        !absl::SimpleAtoi(parts[1], &j)) {
      return absl::InvalidArgumentError(
          absl::StrCat("edge list line ", line_no, ": expected \"i j\""));
    }
    if (absl::Status s = g.AddEdge(i, j); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("edge list line ", line_no, ": ", s.message()));
    }
  }
  return g;
}

absl::StatusOr<Graph> GenerateKRegular(int n, int k, Rng& rng) {
  if (k < 1 || k >= n) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n > k >= 1, got n=", n, " k=", k));
  }
  if ((static_cast<int64_t>(n) * k) % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n*k must be even, got n=", n, " k=", k));
  }
  // A perfect matching on more than two nodes is never connected.
  const bool require_connected = k >= 2;
  const int complement_degree = n - 1 - k;
  if (complement_degree < k) {
    // Minimum degree >= (n-1)/2 already forces connectivity.
    absl::StatusOr<Graph> sparse =
        SampleRegular(n, complement_degree, /*require_connected=*/false, rng);
    if (!sparse.ok()) return sparse.status();
    return Complement(*sparse);
  }
  return SampleRegular(n, k, require_connected, rng);
}

absl::StatusOr<Graph> GenerateKRegular(int n, int k, uint64_t seed) {
  Rng rng = MakeRng(seed);
  return GenerateKRegular(n, k, rng);
}

absl::StatusOr<ViewTable> PeerSwap(const ViewTable& views, NodeId i,
                                   NodeId j) {
  const int n = views.num_nodes();
  if (i < 0 || j < 0 || i >= n || j >= n) {
    return absl::OutOfRangeError(absl::StrCat("swap(", i, ",", j,
                                              ") outside 0..", n - 1));
  }
  if (!views.view(i).contains(j)) {
    return absl::FailedPreconditionError(
        absl::StrCat("swap(", i, ",", j, "): ", j, " is not in the view of ",
                     i));
  }
  auto swap_label = [i, j](NodeId v) { return v == i ? j : v == j ? i : v; };
  auto relabeled = [&](const std::set<NodeId>& s) {
    std::set<NodeId> out;
    for (NodeId v : s) out.insert(swap_label(v));
    return out;
  };

  const std::vector<std::set<NodeId>>& old_adj = views.graph_.adjacency_;
  ViewTable next = views;
  std::vector<std::set<NodeId>>& adj = next.graph_.adjacency_;
  // N(i) <- (N(j) \ {i}) u {j} and symmetrically for j.
  adj[i] = relabeled(old_adj[j]);
  adj[j] = relabeled(old_adj[i]);
  // Every other neighbor of i or j swaps the two labels in its view; common
  // neighbors keep both.
  for (const std::set<NodeId>* side : {&old_adj[i], &old_adj[j]}) {
    for (NodeId other : *side) {
      if (other == i || other == j) continue;
      adj[other] = relabeled(old_adj[other]);
    }
  }
  next.time_ = views.time_ + 1;
  return next;
}

absl::StatusOr<ViewTable> SwapOnWake(const ViewTable& views, NodeId i,
                                     Rng& rng) {
  const std::set<NodeId>& nbrs = views.view(i);
  if (nbrs.empty()) {
    return absl::FailedPreconditionError(
        absl::StrCat("node ", i, " has an empty view"));
  }
  std::uniform_int_distribution<size_t> pick(0, nbrs.size() - 1);
  auto it = nbrs.begin();
  std::advance(it, pick(rng));
  return PeerSwap(views, i, *it);
}

Graph Relabel(const Graph& g, const std::vector<NodeId>& perm) {
  Graph out(g.num_nodes());
  for (const auto& [a, b] : g.Edges()) {
    out.AddEdge(perm[a], perm[b]).IgnoreError();
  }
  return out;
}

Graph RandomRelabel(const Graph& g, Rng& rng) {
  std::vector<NodeId> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return Relabel(g, perm);
}

bool IsKRegular(const Graph& g, int k) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const std::set<NodeId>& nbrs = g.neighbors(i);
    if (static_cast<int>(nbrs.size()) != k) return false;
    for (NodeId j : nbrs) {
      if (j == i || j < 0 || j >= g.num_nodes()) return false;
      if (!g.neighbors(j).contains(i)) return false;
    }
  }
  return true;
}

}  // namespace gossipmia
