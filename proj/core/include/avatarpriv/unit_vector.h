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

#ifndef AVATARPRIV_UNIT_VECTOR_H_
#define AVATARPRIV_UNIT_VECTOR_H_

#include <cstddef>
#include <vector>

namespace avatarpriv {

// Point on the unit hypersphere S^{dim-1}. Construction always goes through a
// factory that enforces the invariants: dim >= 2 and |v|_2 = 1 (the factories
// rescale, so the stored norm is exact to within one rounding).
class UnitVector {
 public:
  // Scales an arbitrary vector to unit norm.
  // Throws ZeroVectorError if |v|_2 < 1e-12, InvalidParameterError if dim < 2.
  static UnitVector normalized(std::vector<double> v);

  // Accepts a vector already claimed to be unit norm (within tol), without
  // rescaling. Throws InvalidParameterError on violation.
  static UnitVector from_unit(std::vector<double> v, double tol = 1e-9);

  // Standard basis vector e_index in R^dim.
  static UnitVector axis(int dim, int index);

  int dim() const { return static_cast<int>(components_.size()); }
  double operator[](std::size_t i) const { return components_[i]; }
  const std::vector<double>& components() const { return components_; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  explicit UnitVector(std::vector<double> v) : components_(std::move(v)) {}

  std::vector<double> components_;
};

// Inner product. Throws DimMismatchError.
double dot(const UnitVector& x, const UnitVector& y);

double norm(const std::vector<double>& v);

}  // namespace avatarpriv

#endif  // AVATARPRIV_UNIT_VECTOR_H_
