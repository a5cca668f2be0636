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

#ifndef AVATARPRIV_RANDOM_H_
#define AVATARPRIV_RANDOM_H_

#include <cstdint>
#include <random>

namespace avatarpriv {

// Mixes two 64-bit words into a well-distributed seed (splitmix64 finalizer).
// Used to derive per-record substreams so batch results do not depend on
// worker count or iteration order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Seeded random stream. All randomness in the library flows through caller
// supplied streams; there is no global generator. Every distribution is
// implemented on top of raw 64-bit draws so sequences are reproducible for a
// given seed independent of the C++ standard library in use.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t raw();

  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1]
  double gaussian();      // standard normal (Marsaglia polar, cached spare)
  double gamma(double shape);  // shape > 0, unit scale (Marsaglia-Tsang)
  double beta(double a, double b);
  double laplace(double scale);  // mean 0; difference of exponentials

  // Stream derived from this stream's root seed and an index. Derivation
  // depends only on (root seed, index), never on how much of this stream has
  // been consumed.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t root_seed() const { return root_seed_; }

  // Opaque identifier of the current stream state, recorded in privatized
  // outputs for audit reproduction.
  std::uint64_t fingerprint() const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t root_seed_;
  std::uint64_t raw_draws_ = 0;
  bool has_spare_gaussian_ = false;
  double spare_gaussian_ = 0.0;
};

}  // namespace avatarpriv

#endif  // AVATARPRIV_RANDOM_H_
