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

#include "gossipmia/mixmat.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace gossipmia {
namespace {

constexpr uint64_t kStartVectorSeed = 0x6a09e667f3bcc909ull;

// Fixed pseudo-random start vector. An alternating +-1 start is an exact
// eigenvector of naturally labeled even rings and can miss the top mode.
Eigen::VectorXd StartVector(int n) {
  Rng rng(kStartVectorSeed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = coord(rng);
  return x;
}

// Projects onto the complement of the all-ones vector and normalizes.
// Returns false for a zero projection.
bool ProjectAndNormalize(Eigen::VectorXd& x) {
  x.array() -= x.mean();
  const double norm = x.norm();
  if (norm == 0.0 || !std::isfinite(norm)) return false;
  x /= norm;
  return true;
}

}  // namespace

absl::StatusOr<MixingMatrix> BuildMixingMatrix(const Graph& g, int k) {
  if (!IsKRegular(g, k)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mixing matrix needs a ", k, "-regular graph"));
  }
  const int n = g.num_nodes();
  const double w = 1.0 / (k + 1);
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (NodeId i = 0; i < n; ++i) {
    weights(i, i) = w;
    for (NodeId j : g.neighbors(i)) weights(i, j) = w;
  }
  return MixingMatrix(std::move(weights));
}

absl::StatusOr<std::vector<double>> ApplyMix(const MixingMatrix& m,
                                             std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "vector of length ", x.size(), " for a ", m.size(), "x", m.size(),
        " mixing matrix"));
  }
  Eigen::Map<const Eigen::VectorXd> in(x.data(), m.size());
  std::vector<double> out(m.size());
  Eigen::Map<Eigen::VectorXd>(out.data(), m.size()).noalias() =
      m.weights() * in;
  return out;
}

MixingMatrix Compose(const MixingMatrix& left, const MixingMatrix& right) {
  return MixingMatrix(left.weights() * right.weights());
}

bool IsDoublyStochastic(const MixingMatrix& m, double tol) {
  const Eigen::MatrixXd& w = m.weights();
  if (w.rows() != w.cols()) return false;
  for (int i = 0; i < w.rows(); ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(w.col(i).sum() - 1.0) > tol) return false;
    for (int j = 0; j < w.cols(); ++j) {
      if (w(i, j) < -tol) return false;
      if (std::abs(w(i, j) - w(j, i)) > tol) return false;
    }
  }
  return true;
}

Contraction ContractionOfProduct(const Eigen::MatrixXd& product,
                                 const PowerIterationOptions& options,
                                 Eigen::VectorXd* warm_start) {
  const int n = static_cast<int>(product.rows());
  Contraction result;
  if (n <= 1) {
    result.converged = true;
    return result;
  }
  Eigen::MatrixXd deviation = product;
  deviation.array() -= 1.0 / n;

  Eigen::VectorXd x;
  if (warm_start != nullptr && warm_start->size() == n) x = *warm_start;
  if (x.size() != n || !ProjectAndNormalize(x)) {
    x = StartVector(n);
    ProjectAndNormalize(x);
  }

  Eigen::VectorXd y(n);
  Eigen::VectorXd z(n);
  double estimate = 0.0;
  double previous = -1.0;
  double previous_step = -1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    result.iterations = it;
    y.noalias() = deviation * x;
    // Rayleigh quotient of (P - J/n)^T (P - J/n) at the unit vector x.
    estimate = y.squaredNorm();
    z.noalias() = deviation.transpose() * y;
    if (estimate == 0.0 || !ProjectAndNormalize(z)) {
      result.converged = true;
      break;
    }
    x.swap(z);
    if (previous >= 0.0) {
      const double step = std::abs(estimate - previous);
      const double tol = options.relative_tolerance * estimate;
      if (step <= 1e-15 * estimate) {
        result.converged = true;
        break;
      }
      // Geometric tail: with contraction ratio rho the remaining error is
      // about step * rho / (1 - rho).
      if (step <= tol && previous_step > 0.0) {
        const double rho = step / previous_step;
        if (rho < 1.0 && step * rho / (1.0 - rho) <= tol) {
          result.converged = true;
          break;
        }
      }
      previous_step = step;
    }
    previous = estimate;
  }
  result.value = std::sqrt(std::max(estimate, 0.0));
  if (warm_start != nullptr) *warm_start = x;
  return result;
}

Contraction ContractionFactor(std::span<const MixingMatrix> matrices,
                              const PowerIterationOptions& options) {
  if (matrices.empty()) return Contraction{};
  Eigen::MatrixXd product = matrices.front().weights();
  for (size_t t = 1; t < matrices.size(); ++t) {
    product = matrices[t].weights() * product;
  }
  return ContractionOfProduct(product, options);
}

absl::string_view MixingModeName(MixingMode mode) {
  switch (mode) {
    case MixingMode::kStatic:
      return "static";
    case MixingMode::kDynamic:
      return "dynamic";
    case MixingMode::kPeerSwap:
      return "peerswap";
  }
  return "unknown";
}

absl::StatusOr<MixingMode> ParseMixingMode(absl::string_view name) {
  for (MixingMode mode :
       {MixingMode::kStatic, MixingMode::kDynamic, MixingMode::kPeerSwap}) {
    if (name == MixingModeName(mode)) return mode;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mixing mode \"", name,
                   "\" (expected static, dynamic or peerswap)"));
}

absl::StatusOr<ContractionSeries> LambdaCurve(
    const LambdaCurveOptions& options) {
  if (options.iterations < 1 || options.runs < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda curve needs iterations >= 1 and runs >= 1, got ",
                     options.iterations, " and ", options.runs));
  }
  const int n = options.n;
  const int steps = options.iterations;
  std::vector<std::vector<double>> values(steps,
                                          std::vector<double>(options.runs));
  ContractionSeries series;
  series.options = options;

  for (int run = 0; run < options.runs; ++run) {
    Rng rng = MakeRng(options.seed, static_cast<uint64_t>(run));
    absl::StatusOr<Graph> initial = GenerateKRegular(n, options.k, rng);
    if (!initial.ok()) return initial.status();
    absl::StatusOr<MixingMatrix> base = BuildMixingMatrix(*initial, options.k);
    if (!base.ok()) return base.status();

    Graph current = *initial;
    ViewTable views(*initial);
    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd warm;
    std::vector<NodeId> order(n);
    for (int t = 0; t < steps; ++t) {
      const Eigen::MatrixXd* step = &base->weights();
      absl::StatusOr<MixingMatrix> moved;
      if (options.mode == MixingMode::kDynamic) {
        current = RandomRelabel(current, rng);
        moved = BuildMixingMatrix(current, options.k);
      } else if (options.mode == MixingMode::kPeerSwap) {
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (NodeId i : order) {
          absl::StatusOr<ViewTable> swapped = SwapOnWake(views, i, rng);
          if (!swapped.ok()) return swapped.status();
          views = *std::move(swapped);
        }
        moved = BuildMixingMatrix(views.graph(), options.k);
      }
      if (options.mode != MixingMode::kStatic) {
        if (!moved.ok()) return moved.status();
        step = &moved->weights();
      }
      product = (*step) * product;
      Contraction c = ContractionOfProduct(product, {}, &warm);
      if (!c.converged) ++series.unconverged;
      values[t][run] = c.value;
    }
  }

  for (int t = 0; t < steps; ++t) {
    const std::vector<double>& v = values[t];
    const double mean =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    const double stddev =
        v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
    series.iterations.push_back(t + 1);
    series.mean.push_back(mean);
    series.stddev.push_back(stddev);
  }
  return series;
}

std::string LambdaCsvHeader() { return "t,mean,stddev,mode,n,k,runs,seed\n"; }

std::string LambdaCsvRows(const ContractionSeries& series) {
  std::string out;
  const LambdaCurveOptions& o = series.options;
  for (size_t i = 0; i < series.iterations.size(); ++i) {
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g,%s,%d,%d,%d,%d\n",
                          series.iterations[i], series.mean[i],
                          series.stddev[i], MixingModeName(o.mode), o.n, o.k,
                          o.runs, o.seed);
  }
  return out;
}

}  // namespace gossipmia
