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
// Hypersphere primitives: angular / chordal metrics, uniform sampling,
// orthonormal 2-plane bases, and fixed-angle in-plane rotation in arbitrary
// dimension. All functions are pure; concurrent callers need independent
// RandomStreams.

#ifndef AVATARPRIV_GEOMETRY_H_
#define AVATARPRIV_GEOMETRY_H_

#include <compare>
#include <vector>

#include "avatarpriv/random.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

// Angle in [0, pi]. Radians internally; degrees only at external boundaries.
class AngularDistance {
 public:
  static AngularDistance from_radians(double radians);
  static AngularDistance from_degrees(double degrees);

  double radians() const { return radians_; }
  double degrees() const;

  friend auto operator<=>(const AngularDistance&,
                          const AngularDistance&) = default;

 private:
  explicit AngularDistance(double radians) : radians_(radians) {}
  double radians_;
};

// Orthonormal pair spanning a 2-plane; both vectors share a dimension and
// |<b1, b2>| < 1e-9.
class PlaneBasis {
 public:
  PlaneBasis(UnitVector b1, UnitVector b2);

  const UnitVector& b1() const { return b1_; }
  const UnitVector& b2() const { return b2_; }
  int dim() const { return b1_.dim(); }

 private:
  UnitVector b1_;
  UnitVector b2_;
};

// v / |v|_2. Throws ZeroVectorError if |v|_2 < 1e-12.
UnitVector normalize(const std::vector<double>& v);

// arccos of the inner product, clamped to [-1, 1] before arccos.
AngularDistance angular_distance(const UnitVector& x, const UnitVector& y);

// |x - y|_2. Equals 2 sin(angular/2), so chordal <= angular everywhere.
double euclidean_distance(const UnitVector& x, const UnitVector& y);

// Uniform direction on S^{dim-1} via normalized i.i.d. Gaussians.
UnitVector uniform_sample(int dim, RandomStream& rng);

// Orthonormal basis of span{x, z} with x in the returned plane (b1 = x,
// b2 from modified Gram-Schmidt with a re-orthogonalization pass). Throws
// DegeneratePlaneError when |<x, z>| > 1 - 1e-9.
PlaneBasis orthonormal_pair(const UnitVector& x, const UnitVector& z);

// R x with R = I + (b2 b1^T - b1 b2^T) sin(theta)
//            + (b1 b1^T + b2 b2^T)(cos(theta) - 1),
// evaluated in O(dim) through the two inner products <b1, x>, <b2, x>.
// For x fully in-plane, angular_distance(x, R x) = theta.
UnitVector rotate_in_plane(const UnitVector& x, const PlaneBasis& basis,
                           AngularDistance theta);

// Materialized rotation matrix (row-major). Cross-check path only; throws
// InvalidParameterError for dim > 64.
std::vector<std::vector<double>> rotation_matrix(const PlaneBasis& basis,
                                                 AngularDistance theta);

// ln of the surface area of S^{dim-1}: ln 2 + (dim/2) ln pi - lgamma(dim/2).
double log_unit_sphere_area(int dim);

}  // namespace avatarpriv

#endif  // AVATARPRIV_GEOMETRY_H_
