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
// Synthetic identity databases with controllable cluster structure: identity
// means uniform on the sphere, per-identity samples from VMF(mean, kappa),
// binary attributes cut by fixed random hyperplanes through the origin.

#ifndef AVATARPRIV_SYNTHDATA_H_
#define AVATARPRIV_SYNTHDATA_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "avatarpriv/random.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

struct IdentityRecord {
  std::int64_t identity_id = 0;
  UnitVector embedding;
  // Attribute name -> binary label. Labels are functions of the identity
  // mean, so all samples of an identity agree.
  std::map<std::string, int> attributes;
};

struct IdentityDatabase {
  int dim = 0;
  std::vector<IdentityRecord> records;
  std::map<std::int64_t, UnitVector> identity_means;
  std::map<std::string, UnitVector> attribute_directions;
};

// Deterministic for a given stream seed; generation is single-threaded.
IdentityDatabase generate(int num_identities, int samples_per_identity,
                          int dim, double within_kappa,
                          const std::vector<std::string>& attribute_names,
                          RandomStream& rng);

struct QueryGallerySplit {
  std::vector<IdentityRecord> queries;
  IdentityDatabase gallery;
};

// Disjoint per-identity split; every identity keeps at least one gallery
// entry. Throws InsufficientSamplesError when an identity has no more than
// queries_per_identity samples.
QueryGallerySplit split_query_gallery(const IdentityDatabase& db,
                                      int queries_per_identity,
                                      RandomStream& rng);

}  // namespace avatarpriv

#endif  // AVATARPRIV_SYNTHDATA_H_
