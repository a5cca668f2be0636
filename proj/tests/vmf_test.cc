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

#include "gtest/gtest.h"
#include "avatarpriv/errors.h"
#include "avatarpriv/geometry.h"
#include "test_support.h"

namespace avatarpriv {
namespace {

using ::avatarpriv::testing::OracleRng;

constexpr double kPi = std::numbers::pi;

// coth(10) - 1/10, frozen from a 50-digit evaluation.
constexpr double kA3Kappa10 = 0.9000000041223072533738;
// I_1(2) / I_0(2), frozen from a 50-digit evaluation.
constexpr double kA2Kappa2 = 0.6977746579640079820068;

TEST(VmfParams, RejectsNegativeKappa) {
  EXPECT_THROW(VmfParams(UnitVector::axis(3, 0), -1.0), InvalidParameterError);
}

TEST(SampleVmf, KappaZeroIsUniform) {
  RandomStream rng(2024);
  const UnitVector mu = UnitVector::axis(8, 3);
  const VmfParams params(mu, 0.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += dot(mu, sample_vmf(params, rng));
  EXPECT_NEAR(sum / n, 0.0, 0.005);
}

TEST(SampleVmf, MeanResultantLengthDim3) {
  RandomStream rng(31337);
  OracleRng direction(9);
  const UnitVector mu = UnitVector::from_unit(direction.unit_vector(3));
  const VmfParams params(mu, 10.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += dot(mu, sample_vmf(params, rng));
  EXPECT_NEAR(sum / n, kA3Kappa10, 0.001);
}

TEST(SampleVmf, MeanResultantLengthDim2) {
  RandomStream rng(555);
  const UnitVector mu = UnitVector::normalized({0.6, -0.8});
  const VmfParams params(mu, 2.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += dot(mu, sample_vmf(params, rng));
  EXPECT_NEAR(sum / n, kA2Kappa2, 0.002);
}

// Kolmogorov-Smirnov agreement between sampled <mu, y> and the analytic
// marginal at dim 3, where the CDF is (e^{k t} - e^{-k}) / (e^k - e^{-k}).
TEST(SampleVmf, CosineMarginalMatchesDensityDim3) {
  for (const double kappa : {0.5, 5.0, 50.0}) {
    RandomStream rng(17 + static_cast<std::uint64_t>(kappa * 10));
    OracleRng direction(3);
    const UnitVector mu = UnitVector::from_unit(direction.unit_vector(3));
    const VmfParams params(mu, kappa);
    const int n = 1000000;
    std::vector<double> ts(n);
    for (int i = 0; i < n; ++i) ts[i] = dot(mu, sample_vmf(params, rng));
    const auto cdf = [kappa](double t) {
      return std::expm1(kappa * (t + 1.0)) / std::expm1(2.0 * kappa);
    };
    const double d = testing::ks_statistic(std::move(ts), cdf);
    EXPECT_LT(d, testing::ks_critical(n, 0.001)) << "kappa=" << kappa;
  }
}

TEST(SampleVmf, MeanDisplacementDecreasesInKappa) {
  double previous = kPi;
  for (const double kappa : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    RandomStream rng(808);
    const UnitVector mu = UnitVector::axis(16, 0);
    const VmfParams params(mu, kappa);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      sum += angular_distance(mu, sample_vmf(params, rng)).radians();
    }
    const double mean_disp = sum / n;
    EXPECT_LT(mean_disp, previous) << "kappa=" << kappa;
    previous = mean_disp;
  }
}

// Sampling with a rotated mean is distributionally identical to rotating the
// samples, checked through first moments at dim 3.
TEST(SampleVmf, RotationalEquivariance) {
  const UnitVector mu = UnitVector::normalized({1.0, 2.0, -0.5});
  const PlaneBasis p1(UnitVector::axis(3, 0), UnitVector::axis(3, 1));
  const PlaneBasis p2(UnitVector::axis(3, 1), UnitVector::axis(3, 2));
  const auto a1 = AngularDistance::from_radians(0.7);
  const auto a2 = AngularDistance::from_radians(1.9);
  const auto q = [&](const UnitVector& v) {
    return rotate_in_plane(rotate_in_plane(v, p1, a1), p2, a2);
  };
  const UnitVector q_mu = q(mu);

  const int n = 200000;
  std::vector<double> mean_rotated_samples(3, 0.0);
  std::vector<double> mean_rotated_mean(3, 0.0);
  RandomStream rng_a(4001), rng_b(4002);
  for (int i = 0; i < n; ++i) {
    const UnitVector ya = q(sample_vmf(VmfParams(mu, 5.0), rng_a));
    const UnitVector yb = sample_vmf(VmfParams(q_mu, 5.0), rng_b);
    for (int c = 0; c < 3; ++c) {
      mean_rotated_samples[c] += ya[c];
      mean_rotated_mean[c] += yb[c];
    }
  }
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(mean_rotated_samples[c] / n, mean_rotated_mean[c] / n, 0.01);
  }
}

TEST(SampleVmf, DeterministicForFixedSeed) {
  const UnitVector mu = UnitVector::axis(12, 5);
  RandomStream a(99), b(99);
  const UnitVector ya = sample_vmf(VmfParams(mu, 42.0), a);
  const UnitVector yb = sample_vmf(VmfParams(mu, 42.0), b);
  EXPECT_EQ(ya.components(), yb.components());
}

TEST(LogDensity, DifferenceIsKappaTimesCosineGap) {
  OracleRng rng(21);
  const UnitVector mu = UnitVector::from_unit(rng.unit_vector(24));
  const UnitVector y1 = UnitVector::from_unit(rng.unit_vector(24));
  const UnitVector y2 = UnitVector::from_unit(rng.unit_vector(24));
  const double kappa = 17.5;
  const VmfParams params(mu, kappa);
  const double lhs = log_density(y1, params) - log_density(y2, params);
  const double rhs = kappa * (dot(mu, y1) - dot(mu, y2));
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(LogDensity, ClosedFormAtMeanDim3) {
  // ln(kappa / (4 pi sinh kappa)) + kappa at kappa = 1, frozen from a
  // 50-digit evaluation.
  const UnitVector mu = UnitVector::axis(3, 1);
  const double got = log_density(mu, VmfParams(mu, 1.0));
  EXPECT_NEAR(got, -1.692463608540486426588, 1e-10);
}

// The density integrates to one over S^2 (surface element 2 pi dt).
TEST(LogDensity, QuadratureNormalizationDim3) {
  const UnitVector mu = UnitVector::axis(3, 0);
  const VmfParams params(mu, 5.0);
  const auto integrand = [&](double t) {
    const UnitVector y = UnitVector::normalized(
        {t, std::sqrt(std::max(0.0, 1.0 - t * t)), 0.0});
    return std::exp(log_density(y, params)) * 2.0 * kPi;
  };
  const double integral = testing::simpson(integrand, -1.0, 1.0, 20000);
  EXPECT_NEAR(integral, 1.0, 1e-6);
}

TEST(LogDensity, ErrorsOnBadInputs) {
  const UnitVector mu = UnitVector::axis(3, 0);
  EXPECT_THROW(log_density(UnitVector::axis(4, 0), VmfParams(mu, 1.0)),
               DimMismatchError);
  EXPECT_THROW(log_density(mu, VmfParams(mu, 0.0)), InvalidParameterError);
}

TEST(MeanResultantLength, KnownValuesAndMonotonicity) {
  EXPECT_DOUBLE_EQ(mean_resultant_length(3, 0.0), 0.0);
  EXPECT_NEAR(mean_resultant_length(3, 10.0), kA3Kappa10, 1e-10);
  EXPECT_NEAR(mean_resultant_length(2, 2.0), kA2Kappa2, 1e-10);
  double previous = 0.0;
  for (const double kappa :
       {0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 1000.0, 1.0e6}) {
    const double a = mean_resultant_length(512, kappa);
    EXPECT_GT(a, previous);
    EXPECT_LT(a, 1.0);
    previous = a;
  }
}

}  // namespace
}  // namespace avatarpriv
