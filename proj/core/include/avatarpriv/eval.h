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
// Embedding-level privacy/utility evaluation: rank-k identification, equal
// error rate, attribute preservation, displacement statistics, the
// repeated-observation averaging attack, and full privacy-utility sweeps.
// Verification is asymmetric throughout: privatized queries are scored
// against unaltered gallery embeddings.

#ifndef AVATARPRIV_EVAL_H_
#define AVATARPRIV_EVAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "avatarpriv/geometry.h"
#include "avatarpriv/mechanisms.h"
#include "avatarpriv/random.h"
#include "avatarpriv/synthdata.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

// A privatized query: identity label plus a (possibly off-sphere) vector.
struct PrivatizedQuery {
  std::int64_t identity_id = 0;
  std::vector<double> embedding;
};

// Fraction of queries whose identity appears among the k nearest gallery
// records under angular distance. Distance ties break toward the earlier
// gallery record. Throws EmptyGalleryError / InvalidParameterError.
double rank_k_identification(const std::vector<PrivatizedQuery>& queries,
                             const IdentityDatabase& gallery, int k);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Equal error rate of a distance threshold: FAR(t) = fraction of impostor
// distances strictly below t, FRR(t) = fraction of genuine distances strictly
// above t, swept over the pooled sorted values with linear interpolation (in
// rank space) where FAR - FRR changes sign. The rate depends only on the
// order of the pooled scores. Throws EmptyInputError.
EerResult compute_eer(const std::vector<double>& genuine,
                      const std::vector<double>& impostor);

// Privatize every record of db and score sign agreement of each attribute
// direction against the record's label. Throws NoAttributesError.
std::map<std::string, double> attribute_preservation(const IdentityDatabase& db,
                                                     const MechanismSpec& spec,
                                                     RandomStream& rng);

struct DisplacementStats {
  double mean = 0.0;
  double median = 0.0;
  std::vector<std::int64_t> histogram;  // uniform bins over [0, pi]
  double bin_width = 0.0;
};

// Statistics of d(x, apply(spec, x)) over uniformly random x.
DisplacementStats displacement_stats(const MechanismSpec& spec, int dim,
                                     int trials, RandomStream& rng,
                                     int histogram_bins = 64);

struct AttackReport {
  int observations = 0;        // m
  double cosine_to_true = 0.0;
  double rank1_after_attack = 0.0;  // 0/1 for a single attack
};

// Averaging attack: draw m independent privatized releases of x, estimate
// the identity direction as their normalized mean, and report the cosine to
// x plus whether a rank-1 lookup against the gallery recovers true_identity.
AttackReport averaging_attack(const UnitVector& x, std::int64_t true_identity,
                              const MechanismSpec& spec, int m,
                              const IdentityDatabase& gallery,
                              RandomStream& rng);

struct EvalReport {
  MechanismSpec mechanism;
  std::map<int, double> rank_k;  // nondecreasing in k by construction
  double eer = 0.0;
  double eer_threshold = 0.0;
  double mean_displacement = 0.0;
  double median_displacement = 0.0;
  std::map<std::string, double> attribute_accuracy;
  int num_queries = 0;
  std::uint64_t seed = 0;
};

// One report per spec: privatize the queries (per-record substreams derived
// from seed and spec order), then rank-k for each requested k, balanced EER
// (per query: the distance to one own-gallery entry and to one sampled
// impostor entry), attribute agreement, and displacement statistics.
// Bit-reproducible from (queries, gallery, specs, k_values, seed).
std::vector<EvalReport> privacy_utility_sweep(
    const std::vector<IdentityRecord>& queries, const IdentityDatabase& gallery,
    const std::vector<MechanismSpec>& specs, const std::vector<int>& k_values,
    std::uint64_t seed);

}  // namespace avatarpriv

#endif  // AVATARPRIV_EVAL_H_
