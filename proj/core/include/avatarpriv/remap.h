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
//
// Remapping pipeline for sparse embedding domains: standardize and project
// reference embeddings to a dense low-dimensional angular space, privatize
// there, and reconstruct a plausible original-domain embedding as a
// softmax-weighted average of the nearest references.

#ifndef AVATARPRIV_REMAP_H_
#define AVATARPRIV_REMAP_H_

#include <cstdint>
#include <vector>

#include "avatarpriv/mechanisms.h"
#include "avatarpriv/random.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

struct ReferenceEntry {
  std::int64_t identity_id = 0;
  std::vector<double> embedding;
};

// Nonempty, dimension-consistent collection of original-domain references.
struct ReferenceSet {
  std::vector<ReferenceEntry> entries;
};

// Fitted standardization + projection + reference state. Immutable after
// fit; all queries are read-only and safe concurrently.
class PcaRemapper {
 public:
  // Standardization rule: center by the per-dimension dataset mean, then
  // scale each centered sample to unit L2 norm. Components are the top
  // target_dim principal directions of the standardized set (descending
  // eigenvalue order, orthonormal rows). Throws InsufficientReferencesError
  // when |references| <= target_dim and DegenerateCovarianceError when the
  // standardized set has rank < target_dim.
  static PcaRemapper fit(const ReferenceSet& references, int target_dim,
                         int neighbor_count, double lambda);

  // Rebuilds a remapper from serialized state, revalidating every invariant
  // (orthonormal rows, projected references consistent with the originals).
  static PcaRemapper from_state(std::vector<double> dataset_mean,
                                std::vector<std::vector<double>> components,
                                std::vector<std::vector<double>>
                                    reference_original,
                                int neighbor_count, double lambda);

  // Standardize with the fitted mean/scale rule, multiply by the components,
  // normalize. Throws ZeroVectorError when x centers to (near-)zero or
  // projects to (near-)zero, DimMismatchError on a wrong dimension.
  UnitVector project(const std::vector<double>& x) const;

  // Softmax-weighted average of the nearest neighbor_count references, with
  // weights exp(-lambda * d) normalized over the selected neighbors
  // (decreasing in angular distance; equidistant neighbors tie-break by
  // reference index). Always lands in the convex hull of the originals.
  std::vector<double> reconstruct(const UnitVector& y) const;

  int source_dim() const { return static_cast<int>(dataset_mean_.size()); }
  int target_dim() const { return static_cast<int>(components_.size()); }
  int neighbor_count() const { return neighbor_count_; }
  double lambda() const { return lambda_; }
  const std::vector<double>& dataset_mean() const { return dataset_mean_; }
  const std::vector<std::vector<double>>& components() const {
    return components_;
  }
  const std::vector<std::vector<double>>& reference_original() const {
    return reference_original_;
  }
  const std::vector<UnitVector>& reference_projected() const {
    return reference_projected_;
  }

 private:
  PcaRemapper() = default;

  std::vector<double> dataset_mean_;
  std::vector<std::vector<double>> components_;  // target_dim x source_dim
  std::vector<std::vector<double>> reference_original_;
  std::vector<UnitVector> reference_projected_;
  int neighbor_count_ = 1;
  double lambda_ = 1.0;
};

// reconstruct(apply(spec, project(x))): the full privatize-in-condensed-space
// round trip back to the original domain.
std::vector<double> privatize_remapped(const PcaRemapper& remapper,
                                       const std::vector<double>& x,
                                       const MechanismSpec& spec,
                                       RandomStream& rng);

}  // namespace avatarpriv

#endif  // AVATARPRIV_REMAP_H_
