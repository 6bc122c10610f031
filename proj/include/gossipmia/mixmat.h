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

// Mixing matrices of k-regular graphs and the contraction factor of their
// products on the mean-deviation subspace.

#ifndef GOSSIPMIA_MIXMAT_H_
#define GOSSIPMIA_MIXMAT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "gossipmia/topology.h"

namespace gossipmia {

class MixingMatrix {
 public:
  MixingMatrix() = default;
  explicit MixingMatrix(Eigen::MatrixXd weights)
      : weights_(std::move(weights)) {}

  int size() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double operator()(int i, int j) const { return weights_(i, j); }

 private:
  Eigen::MatrixXd weights_;
};

// W_ij = 1/(k+1) when j is a neighbor of i or j == i, 0 otherwise.
absl::StatusOr<MixingMatrix> BuildMixingMatrix(const Graph& g, int k);

absl::StatusOr<std::vector<double>> ApplyMix(const MixingMatrix& m,
                                             std::span<const double> x);

// `left` applied after `right`, i.e. left * right.
MixingMatrix Compose(const MixingMatrix& left, const MixingMatrix& right);

bool IsDoublyStochastic(const MixingMatrix& m, double tol);

struct Contraction {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct PowerIterationOptions {
  double relative_tolerance = 1e-9;
  int max_iterations = 200000;
};

// Operator 2-norm of (P - J/n), P = W_T ... W_1 where matrices[0] is W_1.
// Power iteration on (P - J/n)^T (P - J/n) restricted to vectors orthogonal
// to the all-ones vector. On non-convergence the best estimate is returned
// with converged = false.
Contraction ContractionFactor(std::span<const MixingMatrix> matrices,
                              const PowerIterationOptions& options = {});

// Same measurement for an already multiplied product. `warm_start`, when
// non-empty, seeds the iteration and receives the final iterate.
Contraction ContractionOfProduct(const Eigen::MatrixXd& product,
                                 const PowerIterationOptions& options = {},
                                 Eigen::VectorXd* warm_start = nullptr);

enum class MixingMode {
  kStatic,
  // Uniform random relabeling of the graph at every iteration.
  kDynamic,
  // Every node performs one PeerSwap per iteration, in random order.
  kPeerSwap,
};

absl::string_view MixingModeName(MixingMode mode);
absl::StatusOr<MixingMode> ParseMixingMode(absl::string_view name);

struct LambdaCurveOptions {
  int n = 150;
  int k = 2;
  int iterations = 20;
  int runs = 50;
  MixingMode mode = MixingMode::kStatic;
  uint64_t seed = 0;
};

struct ContractionSeries {
  LambdaCurveOptions options;
  // Entry t-1 summarizes the product of the first t matrices.
  std::vector<int> iterations;
  std::vector<double> mean;
  std::vector<double> stddev;
  // Number of (run, t) measurements that hit the iteration cap.
  int unconverged = 0;
};

// Mean and standard deviation over runs of the contraction factor of every
// prefix product. Run r draws its graph and relabelings from stream r of
// the seed.
absl::StatusOr<ContractionSeries> LambdaCurve(
    const LambdaCurveOptions& options);

// Columns: t,mean,stddev,mode,n,k,runs,seed.
std::string LambdaCsvHeader();
std::string LambdaCsvRows(const ContractionSeries& series);

}  // namespace gossipmia

#endif  // GOSSIPMIA_MIXMAT_H_
