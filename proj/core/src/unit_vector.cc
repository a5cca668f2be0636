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

#include "avatarpriv/unit_vector.h"

#include <cmath>
#include <string>

#include "avatarpriv/errors.h"

namespace avatarpriv {

double norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double c : v) sum += c * c;
  return std::sqrt(sum);
}

UnitVector UnitVector::normalized(std::vector<double> v) {
  if (v.size() < 2) {
    throw InvalidParameterError("UnitVector requires dim >= 2, got " +
                                std::to_string(v.size()));
  }
  const double n = norm(v);
  if (n < 1e-12) {
    throw ZeroVectorError("cannot normalize a (near-)zero vector, |v| = " +
                          std::to_string(n));
  }
  for (double& c : v) c /= n;
  return UnitVector(std::move(v));
}

UnitVector UnitVector::from_unit(std::vector<double> v, double tol) {
  if (v.size() < 2) {
    throw InvalidParameterError("UnitVector requires dim >= 2, got " +
                                std::to_string(v.size()));
  }
  const double n = norm(v);
  if (std::abs(n - 1.0) > tol) {
    throw InvalidParameterError("vector is not unit norm: |v| = " +
                                std::to_string(n));
  }
  // Accepted as-is (no rescale) so serialization round trips stay bit-exact.
  return UnitVector(std::move(v));
}

UnitVector UnitVector::axis(int dim, int index) {
  if (dim < 2) {
    throw InvalidParameterError("UnitVector requires dim >= 2");
  }
  if (index < 0 || index >= dim) {
    throw InvalidParameterError("axis index out of range");
  }
  std::vector<double> v(dim, 0.0);
  v[index] = 1.0;
  return UnitVector(std::move(v));
}

double dot(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) {
    throw DimMismatchError("dot: dim " + std::to_string(x.dim()) + " vs " +
                           std::to_string(y.dim()));
  }
  double sum = 0.0;
  const auto& a = x.components();
  const auto& b = y.components();
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace avatarpriv
