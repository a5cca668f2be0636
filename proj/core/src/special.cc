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

#include "avatarpriv/special.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "avatarpriv/errors.h"

namespace avatarpriv {
namespace special_detail {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 200000;
constexpr int kMaxCfIterations = 1000000;

// Gauss continued fraction for I_{nu+1}(x)/I_nu(x):
//   (x/2) / ((nu+1) + (x/2)^2 / ((nu+2) + (x/2)^2 / (...)))
// evaluated with the modified Lentz scheme. Converges for all nu >= 0, x > 0;
// the iteration count grows like sqrt(x) for large arguments.
double ratio_continued_fraction(double nu, double x) {
  const double tiny = 1e-300;
  const double q = 0.25 * x * x;
  double f = tiny, c = tiny, d = 0.0;
  for (int k = 1; k <= kMaxCfIterations; ++k) {
    const double a = (k == 1) ? 0.5 * x : q;
    const double b = nu + k;
    d = b + a * d;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return f;
  }
  throw SamplerStallError("bessel ratio continued fraction did not converge");
}

// Coefficients of the polynomials u_k(t) from the uniform asymptotic
// expansion of I_nu (ascending powers of t, starting at t^k).
const double kU1[] = {3.0 / 24, -5.0 / 24};
const double kU2[] = {81.0 / 1152, -462.0 / 1152, 385.0 / 1152};
const double kU3[] = {30375.0 / 414720, -369603.0 / 414720, 765765.0 / 414720,
                      -425425.0 / 414720};
const double kU4[] = {4465125.0 / 39813120, -94121676.0 / 39813120,
                      349922430.0 / 39813120, -446185740.0 / 39813120,
                      185910725.0 / 39813120};
const double kU5[] = {1519035525.0 / 6688604160, -49286948607.0 / 6688604160,
                      284499769554.0 / 6688604160, -614135872350.0 / 6688604160,
                      566098157625.0 / 6688604160,
                      -188699385875.0 / 6688604160};
const double kU6[] = {2757049477875.0 / 4815794995200,
                      -127577298354750.0 / 4815794995200,
                      1050760774457901.0 / 4815794995200,
                      -3369032068261860.0 / 4815794995200,
                      5104696716244125.0 / 4815794995200,
                      -3685299006138750.0 / 4815794995200,
                      1023694168371875.0 / 4815794995200};

double poly_in_t2(const double* coeffs, int count, double t, int lead_power) {
  // coeffs multiply t^{lead_power}, t^{lead_power+2}, ...
  const double t2 = t * t;
  double acc = 0.0;
  double p = std::pow(t, lead_power);
  for (int i = 0; i < count; ++i) {
    acc += coeffs[i] * p;
    p *= t2;
  }
  return acc;
}

// Large-argument asymptotic sum sum_k (-1)^k a_k(nu) / x^k with
// a_k = prod_j (4 nu^2 - (2j-1)^2) / (k! 8^k). Valid well inside the region
// where the leading terms decay; returns the sum only.
double hankel_sum(double nu, double x) {
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0, total = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 60; ++k) {
    const double num = mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= -num / (8.0 * x * k);
    if (std::abs(term) > prev) break;  // asymptotic tail started growing
    total += term;
    if (std::abs(term) < 1e-17 * std::abs(total)) break;
    prev = std::abs(term);
  }
  return total;
}

double log_half_integer_anchor(double x) {
  // ln I_{1/2}(x) = ln(sqrt(2/(pi x)) sinh x), written to avoid overflow.
  return 0.5 * std::log(2.0 / (kPi * x)) + x + std::log1p(-std::exp(-2.0 * x)) -
         std::log(2.0);
}

}  // namespace

double log_bessel_i_series(double nu, double x) {
  const double half = 0.5 * x;
  const double log_prefix = nu * std::log(half) - std::lgamma(nu + 1.0);
  const double q = half * half;
  double term = 1.0, total = 1.0, log_scale = 0.0;
  for (int m = 1; m <= kMaxSeriesTerms; ++m) {
    term *= q / (m * (nu + m));
    total += term;
    if (term < 1e-17 * total) {
      return log_prefix + log_scale + std::log(total);
    }
    if (total > 1e250) {
      log_scale += std::log(total);
      term /= total;
      total = 1.0;
    }
  }
  throw SamplerStallError("log_bessel_i series did not converge");
}

double log_bessel_i_olver(double nu, double x) {
  const double z = x / nu;
  const double s = std::sqrt(1.0 + z * z);
  const double t = 1.0 / s;
  const double eta = s + std::log(z / (1.0 + s));
  double sum = 1.0;
  double nu_k = nu;
  sum += poly_in_t2(kU1, 2, t, 1) / nu_k;
  nu_k *= nu;
  sum += poly_in_t2(kU2, 3, t, 2) / nu_k;
  nu_k *= nu;
  sum += poly_in_t2(kU3, 4, t, 3) / nu_k;
  nu_k *= nu;
  sum += poly_in_t2(kU4, 5, t, 4) / nu_k;
  nu_k *= nu;
  sum += poly_in_t2(kU5, 6, t, 5) / nu_k;
  nu_k *= nu;
  sum += poly_in_t2(kU6, 7, t, 6) / nu_k;
  return nu * eta - 0.5 * std::log(2.0 * kPi * nu) -
         0.25 * std::log(1.0 + z * z) + std::log(sum);
}

double log_bessel_i_hankel(double nu, double x) {
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(hankel_sum(nu, x));
}

bool hankel_applicable(double nu, double x) {
  return x >= 25.0 * (4.0 * nu * nu + 3.0);
}

double log_bessel_i_chain(double nu, double x) {
  const double frac = nu - std::floor(nu);
  const int steps = static_cast<int>(std::llround(nu - frac));
  double anchor;
  if (frac == 0.0) {
    anchor = log_bessel_i_hankel(0.0, x);  // x >= 20 here, fully converged
  } else {
    anchor = log_half_integer_anchor(x);
  }
  if (steps == 0) return anchor;
  // Ratios r_k = I_{k+1+frac}/I_{k+frac}, seeded at the top order by the
  // continued fraction, then walked down via 1/r_{k-1} = r_k + 2(k+frac)/x
  // (the stable direction), accumulating ln of each.
  double r = ratio_continued_fraction(frac + steps - 1, x);
  double acc = std::log(r);
  for (int k = steps - 1; k >= 1; --k) {
    r = 1.0 / (r + 2.0 * (k + frac) / x);
    acc += std::log(r);
  }
  return anchor + acc;
}

}  // namespace special_detail

double log_bessel_i(double nu, double x) {
  using namespace special_detail;
  if (!(nu >= 0.0) || !(x >= 0.0)) {
    throw InvalidParameterError("log_bessel_i requires nu >= 0 and x >= 0");
  }
  if (x == 0.0) {
    return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (x < std::max(nu, 20.0)) return log_bessel_i_series(nu, x);
  if (nu >= 50.0) return log_bessel_i_olver(nu, x);
  if (hankel_applicable(nu, x)) return log_bessel_i_hankel(nu, x);
  const double frac = nu - std::floor(nu);
  if (frac == 0.0 || frac == 0.5) return log_bessel_i_chain(nu, x);
  return log_bessel_i_series(nu, x);
}

double bessel_i_ratio(double nu, double x) {
  using namespace special_detail;
  if (!(nu >= 0.0) || !(x >= 0.0)) {
    throw InvalidParameterError("bessel_i_ratio requires nu >= 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (hankel_applicable(nu + 1.0, x)) {
    // Both asymptotic sums converge; the e^x / sqrt(2 pi x) factors cancel
    // exactly, so the ratio carries no cancellation at large x.
    return hankel_sum(nu + 1.0, x) / hankel_sum(nu, x);
  }
  return ratio_continued_fraction(nu, x);
}

}  // namespace avatarpriv
