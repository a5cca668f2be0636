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

#ifndef AVATARPRIV_SPECIAL_H_
#define AVATARPRIV_SPECIAL_H_

namespace avatarpriv {

// ln I_nu(x) for nu >= 0, x >= 0, evaluated without forming I_nu itself, so
// arguments far beyond the overflow point of I_nu are fine. Routing:
//   x < max(nu, 20)      rescaled power series (all nu)
//   nu >= 50             uniform asymptotic expansion in 1/nu (Olver form)
//   x >= 25(4 nu^2 + 3)  large-argument asymptotic series
//   otherwise            ratio chain: continued-fraction seed walked down to
//                        an exactly-known anchor (I_0 or I_{1/2}); requires
//                        2 nu integral, which holds for every sphere
//                        dimension. Non-integral 2 nu falls back to the
//                        series.
// Relative accuracy ~1e-13 over the routed domain.
double log_bessel_i(double nu, double x);

// I_{nu+1}(x) / I_nu(x), computed directly (Gauss continued fraction, or the
// ratio of large-argument asymptotic sums when both converge) so no
// cancellation occurs even when the ratio is within 1e-12 of 1.
double bessel_i_ratio(double nu, double x);

namespace special_detail {

// Individual branches, exposed for crossover consistency tuning/tests.
double log_bessel_i_series(double nu, double x);
double log_bessel_i_olver(double nu, double x);
double log_bessel_i_hankel(double nu, double x);
double log_bessel_i_chain(double nu, double x);

bool hankel_applicable(double nu, double x);

}  // namespace special_detail

}  // namespace avatarpriv

#endif  // AVATARPRIV_SPECIAL_H_
