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

#include "avatarpriv/random.h"

#include <cmath>

#include "avatarpriv/errors.h"

namespace avatarpriv {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 0x9e3779b97f4a7c15ULL));
}

RandomStream::RandomStream(std::uint64_t seed)
    : engine_(seed), root_seed_(seed) {}

std::uint64_t RandomStream::raw() {
  ++raw_draws_;
  return engine_();
}

double RandomStream::uniform() {
  return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  return static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_spare_gaussian_) {
    has_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_gaussian_ = v * factor;
  has_spare_gaussian_ = true;
  return u * factor;
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw InvalidParameterError("gamma shape must be positive");
  }
  if (shape < 1.0) {
    // Boost the shape, then apply the standard power-of-uniform correction.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::beta(double a, double b) {
  const double ga = gamma(a);
  const double gb = gamma(b);
  const double sum = ga + gb;
  if (sum == 0.0) return 0.5;
  return ga / sum;
}

double RandomStream::laplace(double scale) {
  return scale * (std::log(uniform_open()) - std::log(uniform_open()));
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(mix_seed(root_seed_, index));
}

std::uint64_t RandomStream::fingerprint() const {
  return splitmix64(root_seed_ ^ splitmix64(raw_draws_));
}

}  // namespace avatarpriv
