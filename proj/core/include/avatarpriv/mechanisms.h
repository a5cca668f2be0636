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
// The privatization layer: AvatarLDP (VMF resampling with concentration
// epsilon), AvatarRotation (fixed-angle rotation in a random 2-plane), their
// composition, and embedding-level baselines. All pure transformations of
// unit vectors; thread-safe with independent random streams.

#ifndef AVATARPRIV_MECHANISMS_H_
#define AVATARPRIV_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avatarpriv/geometry.h"
#include "avatarpriv/random.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

enum class MechanismKind {
  kIdentity,
  kAvatarLdp,
  kAvatarRotation,
  kComposeLdpRotation,
  kUniformBaseline,
  kLaplaceBaseline,
};

std::string to_string(MechanismKind kind);
MechanismKind mechanism_kind_from_string(const std::string& name);

// Declarative description of one privatization mechanism. Parameters must be
// present exactly when the kind requires them (validate() checks this).
struct MechanismSpec {
  MechanismKind kind = MechanismKind::kIdentity;
  std::optional<double> epsilon;          // AvatarLDP, Compose, Laplace
  std::optional<AngularDistance> theta;   // AvatarRotation, Compose
  bool renormalize_output = true;         // LaplaceBaseline only

  static MechanismSpec identity();
  static MechanismSpec avatar_ldp(double epsilon);
  static MechanismSpec avatar_rotation(AngularDistance theta);
  static MechanismSpec compose_ldp_rotation(double epsilon,
                                            AngularDistance theta);
  static MechanismSpec uniform_baseline();
  static MechanismSpec laplace_baseline(double epsilon, bool renormalize);

  // Throws InvalidSpecError on missing/extra/out-of-domain parameters.
  void validate() const;

  // Short human-readable label, e.g. "ldp eps=50" or "rotation theta=90".
  std::string label() const;

  friend bool operator==(const MechanismSpec& a, const MechanismSpec& b);
};

// Parses "kind[:key=value[,key=value...]]" with keys eps, theta-deg, renorm;
// e.g. "ldp:eps=50", "rotation:theta-deg=90", "compose:eps=100,theta-deg=45",
// "laplace:eps=1,renorm=false". Throws InvalidSpecError.
MechanismSpec parse_mechanism_spec(const std::string& text);

// Privatized output. The vector is unit norm whenever the mechanism contract
// promises sphere membership (every kind except LaplaceBaseline with
// renormalize_output = false).
struct PrivatizedEmbedding {
  std::vector<double> vector;
  int source_dim = 0;
  MechanismSpec mechanism;
  std::uint64_t seed_fingerprint = 0;
};

// VMF resampling centered on x with concentration epsilon; epsilon-LDP.
PrivatizedEmbedding avatar_ldp(const UnitVector& x, double epsilon,
                               RandomStream& rng);

// Rotation by exactly theta in a uniformly random 2-plane containing x.
// Guarantee: angular_distance(x, output) = theta (within 1e-9).
PrivatizedEmbedding avatar_rotation(const UnitVector& x, AngularDistance theta,
                                    RandomStream& rng);

// avatar_rotation applied to the avatar_ldp output; epsilon-LDP is inherited
// through post-processing (the rotation stage reads only the LDP output and
// fresh randomness).
PrivatizedEmbedding compose_ldp_rotation(const UnitVector& x, double epsilon,
                                         AngularDistance theta,
                                         RandomStream& rng);

// Uniform draw on the sphere, independent of x.
PrivatizedEmbedding uniform_baseline(const UnitVector& x, RandomStream& rng);

// Per-coordinate additive Laplace noise with scale 2/epsilon (component
// range [-1, 1], so per-coordinate sensitivity 2). Without renormalization
// the output leaves the sphere; that variant exists to demonstrate the
// off-manifold failure mode of embedding-level additive noise.
PrivatizedEmbedding laplace_baseline(const UnitVector& x, double epsilon,
                                     bool renormalize, RandomStream& rng);

// Uniform dispatch. Throws InvalidSpecError on a malformed spec.
PrivatizedEmbedding apply(const MechanismSpec& spec, const UnitVector& x,
                          RandomStream& rng);

// Batch application with per-record substreams derived from (seed, index),
// so results are byte-identical regardless of worker count.
std::vector<PrivatizedEmbedding> apply_batch(const MechanismSpec& spec,
                                             const std::vector<UnitVector>& xs,
                                             std::uint64_t seed,
                                             int workers = 1);

// theta = pi is permitted but deterministically reversible by repeating the
// operation; interactive surfaces should warn.
bool warrants_reversal_warning(AngularDistance theta);
extern const char kReversalWarning[];

}  // namespace avatarpriv

#endif  // AVATARPRIV_MECHANISMS_H_
