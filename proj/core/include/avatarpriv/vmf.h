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
// Exact von Mises-Fisher sampling and log-density in arbitrary dimension.
// When used as a privacy mechanism the concentration equals the privacy
// parameter directly (the domain is the unit sphere, so the sensitivity
// scaling factor is absorbed).

#ifndef AVATARPRIV_VMF_H_
#define AVATARPRIV_VMF_H_

#include "avatarpriv/geometry.h"
#include "avatarpriv/random.h"
#include "avatarpriv/unit_vector.h"

namespace avatarpriv {

struct VmfParams {
  UnitVector mu;
  double kappa;  // >= 0; kappa = 0 is the uniform law

  VmfParams(UnitVector mean, double concentration);
};

// Draw from VMF(mu, kappa). Rejection sampling of the cosine component from
// the exact marginal (Wood's envelope) combined with a uniform tangent
// direction, mapped to the pole mu by a Householder reflection. kappa = 0
// dispatches to uniform_sample.
UnitVector sample_vmf(const VmfParams& params, RandomStream& rng);

// ln of the VMF density at y:
//   (n/2 - 1) ln kappa - (n/2) ln(2 pi) - ln I_{n/2-1}(kappa) + kappa <mu, y>.
// Requires kappa > 0 (the uniform case is -log_unit_sphere_area).
double log_density(const UnitVector& y, const VmfParams& params);

// A_n(kappa) = I_{n/2}(kappa) / I_{n/2-1}(kappa), the expected projection of
// a sample onto its mean direction. Zero at kappa = 0, strictly increasing,
// always below 1.
double mean_resultant_length(int dim, double kappa);

}  // namespace avatarpriv

#endif  // AVATARPRIV_VMF_H_
