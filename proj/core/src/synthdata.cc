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

#include "avatarpriv/synthdata.h"

#include <algorithm>
#include <string>

#include "avatarpriv/errors.h"
#include "avatarpriv/geometry.h"
#include "avatarpriv/vmf.h"

namespace avatarpriv {

IdentityDatabase generate(int num_identities, int samples_per_identity,
                          int dim, double within_kappa,
                          const std::vector<std::string>& attribute_names,
                          RandomStream& rng) {
  if (num_identities < 1 || samples_per_identity < 1) {
    throw InvalidParameterError("identity and sample counts must be positive");
  }
  if (dim < 2) {
    throw InvalidParameterError("generate requires dim >= 2");
  }
  if (!(within_kappa >= 0.0)) {
    throw InvalidParameterError("within_kappa must be >= 0");
  }

  IdentityDatabase db;
  db.dim = dim;

  for (const auto& name : attribute_names) {
    db.attribute_directions.emplace(name, uniform_sample(dim, rng));
  }

  std::vector<UnitVector> means;
  means.reserve(num_identities);
  for (int i = 0; i < num_identities; ++i) {
    means.push_back(uniform_sample(dim, rng));
    db.identity_means.emplace(i, means.back());
  }

  db.records.reserve(static_cast<std::size_t>(num_identities) *
                     samples_per_identity);
  for (int i = 0; i < num_identities; ++i) {
    std::map<std::string, int> labels;
    for (const auto& [name, direction] : db.attribute_directions) {
      labels[name] = dot(direction, means[i]) >= 0.0 ? 1 : 0;
    }
    const VmfParams params(means[i], within_kappa);
    for (int s = 0; s < samples_per_identity; ++s) {
      db.records.push_back(
          IdentityRecord{i, sample_vmf(params, rng), labels});
    }
  }
  return db;
}

QueryGallerySplit split_query_gallery(const IdentityDatabase& db,
                                      int queries_per_identity,
                                      RandomStream& rng) {
  if (queries_per_identity < 1) {
    throw InvalidParameterError("queries_per_identity must be >= 1");
  }
  std::map<std::int64_t, std::vector<std::size_t>> by_identity;
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    by_identity[db.records[i].identity_id].push_back(i);
  }

  QueryGallerySplit split;
  split.gallery.dim = db.dim;
  split.gallery.identity_means = db.identity_means;
  split.gallery.attribute_directions = db.attribute_directions;

  std::vector<bool> is_query(db.records.size(), false);
  for (auto& [id, indices] : by_identity) {
    if (static_cast<int>(indices.size()) <= queries_per_identity) {
      throw InsufficientSamplesError(
          "identity " + std::to_string(id) + " has " +
          std::to_string(indices.size()) +
          " samples; needs more than queries_per_identity = " +
          std::to_string(queries_per_identity));
    }
    // Partial Fisher-Yates: the first queries_per_identity slots become the
    // query side.
    for (int k = 0; k < queries_per_identity; ++k) {
      const std::size_t pick =
          k + static_cast<std::size_t>(rng.uniform() * (indices.size() - k));
      std::swap(indices[k], indices[std::min(pick, indices.size() - 1)]);
      is_query[indices[k]] = true;
    }
  }
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    if (is_query[i]) {
      split.queries.push_back(db.records[i]);
    } else {
      split.gallery.records.push_back(db.records[i]);
    }
  }
  return split;
}

}  // namespace avatarpriv
