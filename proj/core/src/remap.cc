// Copyright 2026 The AvatarPriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avatarpriv/remap.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "avatarpriv/errors.h"
#include "avatarpriv/geometry.h"

namespace avatarpriv {
namespace {

// Center by the dataset mean, then scale to unit L2 norm. Throws
// ZeroVectorError when the centered sample is numerically zero.
std::vector<double> standardize(const std::vector<double>& x,
                                const std::vector<double>& mean) {
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] - mean[i];
  const double n = norm(s);
  if (n < 1e-12) {
    throw ZeroVectorError("sample centers to zero under the fitted mean");
  }
  for (double& c : s) c /= n;
  return s;
}

void validate_fit_params(int n_refs, int target_dim, int neighbor_count,
                         double lambda) {
  if (target_dim < 2) {
    throw InvalidParameterError("target_dim must be >= 2");
  }
  if (n_refs <= target_dim) {
    throw InsufficientReferencesError(
        "fit requires more references than target_dim: " +
        std::to_string(n_refs) + " <= " + std::to_string(target_dim));
  }
  if (neighbor_count < 1 || neighbor_count > n_refs) {
    throw InvalidParameterError("neighbor count must lie in [1, |references|]");
  }
  if (!(lambda > 0.0)) {
    throw InvalidParameterError("lambda must be positive");
  }
}

}  // namespace

PcaRemapper PcaRemapper::fit(const ReferenceSet& references, int target_dim,
                             int neighbor_count, double lambda) {
  const int n = static_cast<int>(references.entries.size());
  validate_fit_params(n, target_dim, neighbor_count, lambda);
  const int d = static_cast<int>(references.entries.front().embedding.size());
  for (const auto& e : references.entries) {
    if (static_cast<int>(e.embedding.size()) != d) {
      throw DimMismatchError("reference set has inconsistent dimensions");
    }
  }
  if (target_dim > d) {
    throw InvalidParameterError("target_dim exceeds the source dimension");
  }

  std::vector<double> mean(d, 0.0);
  for (const auto& e : references.entries) {
    for (int i = 0; i < d; ++i) mean[i] += e.embedding[i];
  }
  for (double& m : mean) m /= n;

  Eigen::MatrixXd standardized(n, d);
  for (int r = 0; r < n; ++r) {
    const auto s = standardize(references.entries[r].embedding, mean);
    for (int i = 0; i < d; ++i) standardized(r, i) = s[i];
  }

  const Eigen::MatrixXd cov =
      standardized.transpose() * standardized / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw DegenerateCovarianceError("eigendecomposition failed");
  }
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  const double max_eval = evals(d - 1);
  int positive = 0;
  for (int i = 0; i < d; ++i) {
    if (evals(i) > std::max(1e-12 * max_eval, 1e-300)) ++positive;
  }
  if (positive < target_dim) {
    throw DegenerateCovarianceError(
        "standardized references have rank " + std::to_string(positive) +
        " < target_dim " + std::to_string(target_dim));
  }

  PcaRemapper out;
  out.dataset_mean_ = std::move(mean);
  out.components_.assign(target_dim, std::vector<double>(d));
  for (int k = 0; k < target_dim; ++k) {
    // Descending eigenvalue order.
    const Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - k);
    for (int i = 0; i < d; ++i) out.components_[k][i] = v(i);
  }
  out.neighbor_count_ = neighbor_count;
  out.lambda_ = lambda;
  out.reference_original_.reserve(n);
  out.reference_projected_.reserve(n);
  for (const auto& e : references.entries) {
    out.reference_original_.push_back(e.embedding);
    out.reference_projected_.push_back(out.project(e.embedding));
  }
  return out;
}

PcaRemapper PcaRemapper::from_state(
    std::vector<double> dataset_mean,
    std::vector<std::vector<double>> components,
    std::vector<std::vector<double>> reference_original, int neighbor_count,
    double lambda) {
  const int n = static_cast<int>(reference_original.size());
  const int target_dim = static_cast<int>(components.size());
  validate_fit_params(n, target_dim, neighbor_count, lambda);
  const int d = static_cast<int>(dataset_mean.size());
  for (const auto& row : components) {
    if (static_cast<int>(row.size()) != d) {
      throw DimMismatchError("component row dimension mismatch");
    }
  }
  for (int a = 0; a < target_dim; ++a) {
    for (int b = a; b < target_dim; ++b) {
      double ip = 0.0;
      for (int i = 0; i < d; ++i) ip += components[a][i] * components[b][i];
      const double expected = (a == b) ? 1.0 : 0.0;
      if (std::abs(ip - expected) > 1e-9) {
        throw InvalidParameterError("component rows are not orthonormal");
      }
    }
  }
  PcaRemapper out;
  out.dataset_mean_ = std::move(dataset_mean);
  out.components_ = std::move(components);
  out.neighbor_count_ = neighbor_count;
  out.lambda_ = lambda;
  out.reference_original_ = std::move(reference_original);
  out.reference_projected_.reserve(n);
  for (const auto& e : out.reference_original_) {
    if (static_cast<int>(e.size()) != d) {
      throw DimMismatchError("reference dimension mismatch");
    }
    out.reference_projected_.push_back(out.project(e));
  }
  return out;
}

UnitVector PcaRemapper::project(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != source_dim()) {
    throw DimMismatchError("project: expected dim " +
                           std::to_string(source_dim()) + ", got " +
                           std::to_string(x.size()));
  }
  const auto s = standardize(x, dataset_mean_);
  std::vector<double> y(target_dim(), 0.0);
  for (int k = 0; k < target_dim(); ++k) {
    double acc = 0.0;
    for (int i = 0; i < source_dim(); ++i) acc += components_[k][i] * s[i];
    y[k] = acc;
  }
  return UnitVector::normalized(std::move(y));
}

std::vector<double> PcaRemapper::reconstruct(const UnitVector& y) const {
  if (y.dim() != target_dim()) {
    throw DimMismatchError("reconstruct: expected dim " +
                           std::to_string(target_dim()));
  }
  const int n = static_cast<int>(reference_projected_.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    dist[i] = angular_distance(y, reference_projected_[i]).radians();
  }
  const int j = neighbor_count_;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });

  // Softmax over -lambda * distance, shifted by the nearest neighbor for
  // numerical stability; weights sum to 1 and decrease with distance.
  std::vector<double> weights(j);
  double total = 0.0;
  for (int k = 0; k < j; ++k) {
    weights[k] = std::exp(-lambda_ * (dist[order[k]] - dist[order[0]]));
    total += weights[k];
  }
  std::vector<double> out(source_dim(), 0.0);
  for (int k = 0; k < j; ++k) {
    const double w = weights[k] / total;
    const auto& ref = reference_original_[order[k]];
    for (int i = 0; i < source_dim(); ++i) out[i] += w * ref[i];
  }
  return out;
}

std::vector<double> privatize_remapped(const PcaRemapper& remapper,
                                       const std::vector<double>& x,
                                       const MechanismSpec& spec,
                                       RandomStream& rng) {
  spec.validate();
  const UnitVector projected = remapper.project(x);
  const PrivatizedEmbedding privatized = apply(spec, projected, rng);
  // Every mechanism output in the condensed space is a direction; the
  // non-renormalized Laplace variant is normalized here because reconstruct
  // measures similarity through angles only.
  const UnitVector y = UnitVector::normalized(privatized.vector);
  return remapper.reconstruct(y);
}

}  // namespace avatarpriv
