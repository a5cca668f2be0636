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

#include "avatarpriv/vmf.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "avatarpriv/errors.h"
#include "avatarpriv/special.h"

namespace avatarpriv {
namespace {

constexpr int kMaxRejectionIterations = 1000000;

// Cosine component w in [-1, 1] from Wood's rejection scheme:
//   b  = (-2k + sqrt(4k^2 + (n-1)^2)) / (n-1)
//   x0 = (1 - b) / (1 + b)
//   c  = k x0 + (n-1) ln(1 - x0^2)
//   accept Z ~ Beta((n-1)/2, (n-1)/2), U ~ Uniform when
//   k w + (n-1) ln(1 - x0 w) - c >= ln U  with  w = (1-(1+b)Z)/(1-(1-b)Z).
// Expected acceptance is bounded below independent of dimension.
double sample_cosine(int dim, double kappa, RandomStream& rng) {
  const double m = dim - 1.0;
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m)) / m;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m * std::log(1.0 - x0 * x0);
  for (int iter = 0; iter < kMaxRejectionIterations; ++iter) {
    const double z = rng.beta(0.5 * m, 0.5 * m);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_open();
    if (kappa * w + m * std::log(1.0 - x0 * w) - c >= std::log(u)) {
      return w;
    }
  }
  throw SamplerStallError(
      "vmf cosine rejection loop exceeded its iteration cap (kappa = " +
      std::to_string(kappa) + ", dim = " + std::to_string(dim) + ")");
}

}  // namespace

VmfParams::VmfParams(UnitVector mean, double concentration)
    : mu(std::move(mean)), kappa(concentration) {
  if (!(kappa >= 0.0)) {
    throw InvalidParameterError("vmf kappa must be >= 0");
  }
}

UnitVector sample_vmf(const VmfParams& params, RandomStream& rng) {
  const int n = params.mu.dim();
  if (params.kappa == 0.0) {
    // Wood's envelope degenerates at kappa = 0; the law is uniform.
    return uniform_sample(n, rng);
  }
  const double w = sample_cosine(n, params.kappa, rng);

  // Uniform direction on the (n-2)-subsphere orthogonal to the pole e_1.
  std::vector<double> tangent(n - 1);
  double tnorm;
  do {
    for (double& c : tangent) c = rng.gaussian();
    tnorm = norm(tangent);
  } while (tnorm < 1e-12);

  const double scale = std::sqrt(std::max(0.0, 1.0 - w * w)) / tnorm;
  std::vector<double> y(n);
  y[0] = w;
  for (int i = 1; i < n; ++i) y[i] = tangent[i - 1] * scale;

  // Householder reflection taking the pole e_1 to mu.
  std::vector<double> u(params.mu.components());
  u[0] -= 1.0;  // u = mu - e_1; H = I - 2 u u^T / |u|^2 maps e_1 -> mu
  double unorm2 = 0.0;
  for (double c : u) unorm2 += c * c;
  if (unorm2 > 1e-24) {
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += u[i] * y[i];
    const double f = 2.0 * proj / unorm2;
    for (int i = 0; i < n; ++i) y[i] -= f * u[i];
  }
  return UnitVector::normalized(std::move(y));
}

double log_density(const UnitVector& y, const VmfParams& params) {
  if (y.dim() != params.mu.dim()) {
    throw DimMismatchError("log_density: dimension mismatch");
  }
  if (!(params.kappa > 0.0)) {
    throw InvalidParameterError(
        "log_density requires kappa > 0; the kappa = 0 law is uniform with "
        "log density -log_unit_sphere_area(dim)");
  }
  const double n = params.mu.dim();
  const double nu = 0.5 * n - 1.0;
  return nu * std::log(params.kappa) -
         0.5 * n * std::log(2.0 * std::numbers::pi) -
         log_bessel_i(nu, params.kappa) + params.kappa * dot(params.mu, y);
}

double mean_resultant_length(int dim, double kappa) {
  if (dim < 2) {
    throw InvalidParameterError("mean_resultant_length requires dim >= 2");
  }
  if (!(kappa >= 0.0)) {
    throw InvalidParameterError("mean_resultant_length requires kappa >= 0");
  }
  if (kappa == 0.0) return 0.0;
  return bessel_i_ratio(0.5 * dim - 1.0, kappa);
}

}  // namespace avatarpriv
