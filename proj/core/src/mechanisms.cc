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

#include "avatarpriv/mechanisms.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>
#include <utility>

#include "avatarpriv/errors.h"
#include "avatarpriv/vmf.h"

namespace avatarpriv {

const char kReversalWarning[] =
    "theta = 180 deg moves every input to its antipode, which is a "
    "deterministic operation: repeating the rotation restores the original "
    "embedding. Use a smaller angle (or compose with the LDP mechanism) when "
    "reversibility matters.";

bool warrants_reversal_warning(AngularDistance theta) {
  return theta.radians() > std::numbers::pi - 1e-9;
}

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kIdentity:
      return "identity";
    case MechanismKind::kAvatarLdp:
      return "ldp";
    case MechanismKind::kAvatarRotation:
      return "rotation";
    case MechanismKind::kComposeLdpRotation:
      return "compose";
    case MechanismKind::kUniformBaseline:
      return "uniform";
    case MechanismKind::kLaplaceBaseline:
      return "laplace";
  }
  throw InvalidSpecError("unknown mechanism kind");
}

MechanismKind mechanism_kind_from_string(const std::string& name) {
  if (name == "identity") return MechanismKind::kIdentity;
  if (name == "ldp") return MechanismKind::kAvatarLdp;
  if (name == "rotation") return MechanismKind::kAvatarRotation;
  if (name == "compose") return MechanismKind::kComposeLdpRotation;
  if (name == "uniform") return MechanismKind::kUniformBaseline;
  if (name == "laplace") return MechanismKind::kLaplaceBaseline;
  throw InvalidSpecError("unknown mechanism kind: \"" + name + "\"");
}

MechanismSpec MechanismSpec::identity() {
  return MechanismSpec{MechanismKind::kIdentity, {}, {}, true};
}

MechanismSpec MechanismSpec::avatar_ldp(double epsilon) {
  return MechanismSpec{MechanismKind::kAvatarLdp, epsilon, {}, true};
}

MechanismSpec MechanismSpec::avatar_rotation(AngularDistance theta) {
  return MechanismSpec{MechanismKind::kAvatarRotation, {}, theta, true};
}

MechanismSpec MechanismSpec::compose_ldp_rotation(double epsilon,
                                                  AngularDistance theta) {
  return MechanismSpec{MechanismKind::kComposeLdpRotation, epsilon, theta,
                       true};
}

MechanismSpec MechanismSpec::uniform_baseline() {
  return MechanismSpec{MechanismKind::kUniformBaseline, {}, {}, true};
}

MechanismSpec MechanismSpec::laplace_baseline(double epsilon,
                                              bool renormalize) {
  return MechanismSpec{MechanismKind::kLaplaceBaseline, epsilon, {},
                       renormalize};
}

void MechanismSpec::validate() const {
  const bool needs_epsilon = kind == MechanismKind::kAvatarLdp ||
                             kind == MechanismKind::kComposeLdpRotation ||
                             kind == MechanismKind::kLaplaceBaseline;
  const bool needs_theta = kind == MechanismKind::kAvatarRotation ||
                           kind == MechanismKind::kComposeLdpRotation;
  if (needs_epsilon) {
    if (!epsilon.has_value()) {
      throw InvalidSpecError(to_string(kind) + " requires epsilon");
    }
    if (!(*epsilon > 0.0)) {
      throw InvalidSpecError("epsilon must be positive");
    }
  } else if (epsilon.has_value()) {
    throw InvalidSpecError(to_string(kind) + " does not take epsilon");
  }
  if (needs_theta) {
    if (!theta.has_value()) {
      throw InvalidSpecError(to_string(kind) + " requires theta");
    }
  } else if (theta.has_value()) {
    throw InvalidSpecError(to_string(kind) + " does not take theta");
  }
}

std::string MechanismSpec::label() const {
  std::ostringstream out;
  out << to_string(kind);
  if (epsilon.has_value()) out << " eps=" << *epsilon;
  if (theta.has_value()) out << " theta=" << theta->degrees();
  if (kind == MechanismKind::kLaplaceBaseline && !renormalize_output) {
    out << " raw";
  }
  return out.str();
}

bool operator==(const MechanismSpec& a, const MechanismSpec& b) {
  const auto theta_rad = [](const MechanismSpec& s) {
    return s.theta.has_value() ? std::optional<double>(s.theta->radians())
                               : std::nullopt;
  };
  return a.kind == b.kind && a.epsilon == b.epsilon &&
         theta_rad(a) == theta_rad(b) &&
         a.renormalize_output == b.renormalize_output;
}

MechanismSpec parse_mechanism_spec(const std::string& text) {
  std::string kind_part = text;
  std::string params_part;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    kind_part = text.substr(0, colon);
    params_part = text.substr(colon + 1);
  }
  MechanismSpec spec;
  spec.kind = mechanism_kind_from_string(kind_part);

  std::stringstream params(params_part);
  std::string item;
  while (std::getline(params, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InvalidSpecError("malformed mechanism parameter: \"" + item +
                             "\" (expected key=value)");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "eps") {
        spec.epsilon = std::stod(value);
      } else if (key == "theta-deg") {
        spec.theta = AngularDistance::from_degrees(std::stod(value));
      } else if (key == "renorm") {
        spec.renormalize_output = (value == "1" || value == "true");
      } else {
        throw InvalidSpecError("unknown mechanism parameter: \"" + key + "\"");
      }
    } catch (const std::invalid_argument&) {
      throw InvalidSpecError("bad numeric value in \"" + item + "\"");
    } catch (const InvalidParameterError& e) {
      throw InvalidSpecError(e.what());
    }
  }
  spec.validate();
  return spec;
}

namespace {

PrivatizedEmbedding make_output(std::vector<double> v, int source_dim,
                                const MechanismSpec& spec,
                                std::uint64_t fingerprint) {
  return PrivatizedEmbedding{std::move(v), source_dim, spec, fingerprint};
}

// Rotation step shared by avatar_rotation and the composition: draw the
// random plane, redrawing z on the (measure-zero) collinear event.
UnitVector rotate_random_plane(const UnitVector& x, AngularDistance theta,
                               RandomStream& rng) {
  if (theta.radians() == 0.0) return x;
  for (;;) {
    const UnitVector z = uniform_sample(x.dim(), rng);
    try {
      const PlaneBasis basis = orthonormal_pair(x, z);
      return rotate_in_plane(x, basis, theta);
    } catch (const DegeneratePlaneError&) {
      continue;
    }
  }
}

}  // namespace

PrivatizedEmbedding avatar_ldp(const UnitVector& x, double epsilon,
                               RandomStream& rng) {
  if (!(epsilon > 0.0)) {
    throw InvalidParameterError("avatar_ldp requires epsilon > 0");
  }
  const std::uint64_t fp = rng.fingerprint();
  UnitVector y = sample_vmf(VmfParams(x, epsilon), rng);
  return make_output(y.components(), x.dim(),
                     MechanismSpec::avatar_ldp(epsilon), fp);
}

PrivatizedEmbedding avatar_rotation(const UnitVector& x, AngularDistance theta,
                                    RandomStream& rng) {
  const std::uint64_t fp = rng.fingerprint();
  UnitVector y = rotate_random_plane(x, theta, rng);
  return make_output(y.components(), x.dim(),
                     MechanismSpec::avatar_rotation(theta), fp);
}

PrivatizedEmbedding compose_ldp_rotation(const UnitVector& x, double epsilon,
                                         AngularDistance theta,
                                         RandomStream& rng) {
  if (!(epsilon > 0.0)) {
    throw InvalidParameterError("compose_ldp_rotation requires epsilon > 0");
  }
  const std::uint64_t fp = rng.fingerprint();
  const UnitVector noised = sample_vmf(VmfParams(x, epsilon), rng);
  UnitVector y = rotate_random_plane(noised, theta, rng);
  return make_output(y.components(), x.dim(),
                     MechanismSpec::compose_ldp_rotation(epsilon, theta), fp);
}

PrivatizedEmbedding uniform_baseline(const UnitVector& x, RandomStream& rng) {
  const std::uint64_t fp = rng.fingerprint();
  UnitVector y = uniform_sample(x.dim(), rng);
  return make_output(y.components(), x.dim(), MechanismSpec::uniform_baseline(),
                     fp);
}

PrivatizedEmbedding laplace_baseline(const UnitVector& x, double epsilon,
                                     bool renormalize, RandomStream& rng) {
  if (!(epsilon > 0.0)) {
    throw InvalidParameterError("laplace_baseline requires epsilon > 0");
  }
  const std::uint64_t fp = rng.fingerprint();
  const double scale = 2.0 / epsilon;
  std::vector<double> out(x.components());
  for (double& c : out) c += rng.laplace(scale);
  if (renormalize) {
    out = UnitVector::normalized(std::move(out)).components();
  }
  return make_output(std::move(out), x.dim(),
                     MechanismSpec::laplace_baseline(epsilon, renormalize), fp);
}

PrivatizedEmbedding apply(const MechanismSpec& spec, const UnitVector& x,
                          RandomStream& rng) {
  spec.validate();
  switch (spec.kind) {
    case MechanismKind::kIdentity: {
      return make_output(x.components(), x.dim(), spec, rng.fingerprint());
    }
    case MechanismKind::kAvatarLdp:
      return avatar_ldp(x, *spec.epsilon, rng);
    case MechanismKind::kAvatarRotation:
      return avatar_rotation(x, *spec.theta, rng);
    case MechanismKind::kComposeLdpRotation:
      return compose_ldp_rotation(x, *spec.epsilon, *spec.theta, rng);
    case MechanismKind::kUniformBaseline:
      return uniform_baseline(x, rng);
    case MechanismKind::kLaplaceBaseline:
      return laplace_baseline(x, *spec.epsilon, spec.renormalize_output, rng);
  }
  throw InvalidSpecError("unknown mechanism kind");
}

std::vector<PrivatizedEmbedding> apply_batch(const MechanismSpec& spec,
                                             const std::vector<UnitVector>& xs,
                                             std::uint64_t seed, int workers) {
  spec.validate();
  if (workers < 1) {
    throw InvalidParameterError("apply_batch requires workers >= 1");
  }
  std::vector<PrivatizedEmbedding> out(xs.size());
  const RandomStream root(seed);
  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream sub = root.substream(i);
      out[i] = apply(spec, xs[i], sub);
    }
  };
  if (workers == 1 || xs.size() < 2) {
    run_range(0, xs.size());
    return out;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (xs.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(xs.size(), begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(run_range, begin, end);
  }
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace avatarpriv
