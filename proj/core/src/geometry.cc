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

#include "avatarpriv/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "avatarpriv/errors.h"

namespace avatarpriv {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCollinearTol = 1e-9;
// Slack absorbed when validating angles produced by floating-point paths
// (e.g. degrees -> radians conversion of exactly 180).
constexpr double kAngleSlack = 1e-9;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

AngularDistance AngularDistance::from_radians(double radians) {
  if (!(radians >= -kAngleSlack && radians <= kPi + kAngleSlack)) {
    throw InvalidParameterError("angle must lie in [0, pi], got " +
                                std::to_string(radians));
  }
  return AngularDistance(std::clamp(radians, 0.0, kPi));
}

AngularDistance AngularDistance::from_degrees(double degrees) {
  return from_radians(degrees * kPi / 180.0);
}

double AngularDistance::degrees() const { return radians_ * 180.0 / kPi; }

PlaneBasis::PlaneBasis(UnitVector b1, UnitVector b2)
    : b1_(std::move(b1)), b2_(std::move(b2)) {
  if (b1_.dim() != b2_.dim()) {
    throw DimMismatchError("PlaneBasis vectors must share a dimension");
  }
  if (std::abs(dot(b1_, b2_)) >= 1e-9) {
    throw InvalidParameterError("PlaneBasis vectors must be orthogonal");
  }
}

UnitVector normalize(const std::vector<double>& v) {
  return UnitVector::normalized(v);
}

AngularDistance angular_distance(const UnitVector& x, const UnitVector& y) {
  if (x.components() == y.components()) {
    // Identity of indiscernibles; arccos(<x, x>) would round to ~1e-8.
    return AngularDistance::from_radians(0.0);
  }
  return AngularDistance::from_radians(std::acos(clamp_unit(dot(x, y))));
}

double euclidean_distance(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) {
    throw DimMismatchError("euclidean_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

UnitVector uniform_sample(int dim, RandomStream& rng) {
  if (dim < 2) {
    throw InvalidParameterError("uniform_sample requires dim >= 2");
  }
  for (;;) {
    std::vector<double> v(dim);
    for (double& c : v) c = rng.gaussian();
    if (norm(v) >= 1e-12) return UnitVector::normalized(std::move(v));
    // Measure-zero event; redraw.
  }
}

PlaneBasis orthonormal_pair(const UnitVector& x, const UnitVector& z) {
  if (x.dim() != z.dim()) {
    throw DimMismatchError("orthonormal_pair: dimension mismatch");
  }
  const double c = dot(x, z);
  if (std::abs(c) > 1.0 - kCollinearTol) {
    throw DegeneratePlaneError("x and z are collinear: |<x, z>| = " +
                               std::to_string(std::abs(c)));
  }
  std::vector<double> w(z.components());
  for (int i = 0; i < x.dim(); ++i) w[i] -= c * x[i];
  UnitVector b2 = UnitVector::normalized(std::move(w));
  // Re-orthogonalization pass; one repeat is enough for a 2-column system.
  const double r = dot(x, b2);
  if (std::abs(r) >= 1e-12) {
    std::vector<double> w2(b2.components());
    for (int i = 0; i < x.dim(); ++i) w2[i] -= r * x[i];
    b2 = UnitVector::normalized(std::move(w2));
  }
  return PlaneBasis(x, b2);
}

UnitVector rotate_in_plane(const UnitVector& x, const PlaneBasis& basis,
                           AngularDistance theta) {
  if (x.dim() != basis.dim()) {
    throw DimMismatchError("rotate_in_plane: dimension mismatch");
  }
  const double c1 = dot(basis.b1(), x);
  const double c2 = dot(basis.b2(), x);
  const double s = std::sin(theta.radians());
  const double cm1 = std::cos(theta.radians()) - 1.0;
  std::vector<double> out(x.components());
  const auto& b1 = basis.b1().components();
  const auto& b2 = basis.b2().components();
  for (int i = 0; i < x.dim(); ++i) {
    out[i] += (b2[i] * c1 - b1[i] * c2) * s + (b1[i] * c1 + b2[i] * c2) * cm1;
  }
  return UnitVector::normalized(std::move(out));
}

std::vector<std::vector<double>> rotation_matrix(const PlaneBasis& basis,
                                                 AngularDistance theta) {
  const int n = basis.dim();
  if (n > 64) {
    throw InvalidParameterError(
        "rotation_matrix is a cross-check path restricted to dim <= 64");
  }
  const double s = std::sin(theta.radians());
  const double cm1 = std::cos(theta.radians()) - 1.0;
  const auto& b1 = basis.b1().components();
  const auto& b2 = basis.b2().components();
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    r[i][i] = 1.0;
    for (int j = 0; j < n; ++j) {
      r[i][j] += (b2[i] * b1[j] - b1[i] * b2[j]) * s +
                 (b1[i] * b1[j] + b2[i] * b2[j]) * cm1;
    }
  }
  return r;
}

double log_unit_sphere_area(int dim) {
  if (dim < 2) {
    throw InvalidParameterError("log_unit_sphere_area requires dim >= 2");
  }
  const double half = static_cast<double>(dim) / 2.0;
  return std::log(2.0) + half * std::log(kPi) - std::lgamma(half);
}

}  // namespace avatarpriv
