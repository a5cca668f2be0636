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

#include "avatarpriv/eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "avatarpriv/errors.h"

namespace avatarpriv {
namespace {

constexpr double kPi = std::numbers::pi;

double angle_between(const std::vector<double>& a, double a_norm,
                     const UnitVector& b) {
  double ip = 0.0;
  const auto& bc = b.components();
  for (std::size_t i = 0; i < a.size(); ++i) ip += a[i] * bc[i];
  return std::acos(std::clamp(ip / a_norm, -1.0, 1.0));
}

// 1-based rank of the nearest gallery record carrying `identity`, with
// distance ties resolved toward the earlier record. Returns gallery size + 1
// when the identity is absent.
std::size_t identity_rank(const std::vector<double>& query,
                          std::int64_t identity,
                          const IdentityDatabase& gallery) {
  const double qn = norm(query);
  if (qn < 1e-12) {
    throw ZeroVectorError("query embedding is (near-)zero");
  }
  double best_own = std::numeric_limits<double>::infinity();
  std::size_t best_own_index = 0;
  std::vector<double> dist(gallery.records.size());
  for (std::size_t g = 0; g < gallery.records.size(); ++g) {
    dist[g] = angle_between(query, qn, gallery.records[g].embedding);
    if (gallery.records[g].identity_id == identity && dist[g] < best_own) {
      best_own = dist[g];
      best_own_index = g;
    }
  }
  if (!std::isfinite(best_own)) return gallery.records.size() + 1;
  std::size_t preceding = 0;
  for (std::size_t g = 0; g < gallery.records.size(); ++g) {
    if (dist[g] < best_own || (dist[g] == best_own && g < best_own_index)) {
      ++preceding;
    }
  }
  return preceding + 1;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double rank_k_identification(const std::vector<PrivatizedQuery>& queries,
                             const IdentityDatabase& gallery, int k) {
  if (k < 1) throw InvalidParameterError("rank_k requires k >= 1");
  if (gallery.records.empty()) {
    throw EmptyGalleryError("rank_k_identification: empty gallery");
  }
  if (queries.empty()) {
    throw EmptyInputError("rank_k_identification: no queries");
  }
  std::size_t hits = 0;
  for (const auto& q : queries) {
    if (identity_rank(q.embedding, q.identity_id, gallery) <=
        static_cast<std::size_t>(k)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

EerResult compute_eer(const std::vector<double>& genuine,
                      const std::vector<double>& impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw EmptyInputError("compute_eer requires nonempty score lists");
  }
  std::vector<double> gen(genuine), imp(impostor);
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  std::vector<double> pool;
  pool.reserve(gen.size() + imp.size());
  pool.insert(pool.end(), gen.begin(), gen.end());
  pool.insert(pool.end(), imp.begin(), imp.end());
  std::sort(pool.begin(), pool.end());

  // FAR counts impostor scores strictly below the threshold and FRR genuine
  // scores strictly above it, so the sweep brackets the crossing instead of
  // landing past it when pooled values repeat.
  const auto far_at = [&](double t) {
    return static_cast<double>(std::lower_bound(imp.begin(), imp.end(), t) -
                               imp.begin()) /
           static_cast<double>(imp.size());
  };
  const auto frr_at = [&](double t) {
    return static_cast<double>(gen.end() -
                               std::upper_bound(gen.begin(), gen.end(), t)) /
           static_cast<double>(gen.size());
  };

  double prev_far = far_at(pool.front());
  double prev_frr = frr_at(pool.front());
  double prev_t = pool.front();
  if (prev_far - prev_frr >= 0.0) {
    return EerResult{0.5 * (prev_far + prev_frr), prev_t};
  }
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const double t = pool[i];
    const double far = far_at(t);
    const double frr = frr_at(t);
    if (far - frr >= 0.0) {
      // Linear interpolation between the bracketing thresholds; the solution
      // depends only on the ranks, so the EER is invariant under strictly
      // increasing transforms of both score lists.
      const double denom = (far - prev_far) - (frr - prev_frr);
      const double s = denom > 0.0 ? (prev_frr - prev_far) / denom : 1.0;
      const double eer = prev_far + s * (far - prev_far);
      return EerResult{eer, prev_t + s * (t - prev_t)};
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  return EerResult{0.5 * (prev_far + prev_frr), prev_t};
}

std::map<std::string, double> attribute_preservation(const IdentityDatabase& db,
                                                     const MechanismSpec& spec,
                                                     RandomStream& rng) {
  if (db.attribute_directions.empty()) {
    throw NoAttributesError("database carries no attribute directions");
  }
  if (db.records.empty()) {
    throw EmptyInputError("attribute_preservation: empty database");
  }
  std::map<std::string, std::size_t> agree;
  for (const auto& [name, unused] : db.attribute_directions) agree[name] = 0;

  for (std::size_t i = 0; i < db.records.size(); ++i) {
    RandomStream sub = rng.substream(i);
    const PrivatizedEmbedding out = apply(spec, db.records[i].embedding, sub);
    for (const auto& [name, direction] : db.attribute_directions) {
      double ip = 0.0;
      const auto& d = direction.components();
      for (std::size_t c = 0; c < out.vector.size(); ++c) {
        ip += d[c] * out.vector[c];
      }
      const int predicted = ip >= 0.0 ? 1 : 0;
      const auto label = db.records[i].attributes.find(name);
      if (label != db.records[i].attributes.end() &&
          label->second == predicted) {
        ++agree[name];
      }
    }
  }
  std::map<std::string, double> rates;
  for (const auto& [name, count] : agree) {
    rates[name] =
        static_cast<double>(count) / static_cast<double>(db.records.size());
  }
  return rates;
}

DisplacementStats displacement_stats(const MechanismSpec& spec, int dim,
                                     int trials, RandomStream& rng,
                                     int histogram_bins) {
  if (trials < 1) throw InvalidParameterError("trials must be >= 1");
  if (histogram_bins < 1) throw InvalidParameterError("need >= 1 bin");
  spec.validate();
  DisplacementStats stats;
  stats.histogram.assign(histogram_bins, 0);
  stats.bin_width = kPi / histogram_bins;
  std::vector<double> displacements(trials);
  for (int t = 0; t < trials; ++t) {
    RandomStream sub = rng.substream(t);
    const UnitVector x = uniform_sample(dim, sub);
    const PrivatizedEmbedding out = apply(spec, x, sub);
    const double vn = norm(out.vector);
    if (vn < 1e-12) {
      throw ZeroVectorError("privatized output is (near-)zero");
    }
    const double d = angle_between(out.vector, vn, x);
    displacements[t] = d;
    const int bin = std::min(histogram_bins - 1,
                             static_cast<int>(d / stats.bin_width));
    ++stats.histogram[bin];
  }
  double sum = 0.0;
  for (double d : displacements) sum += d;
  stats.mean = sum / trials;
  stats.median = median_of(std::move(displacements));
  return stats;
}

AttackReport averaging_attack(const UnitVector& x, std::int64_t true_identity,
                              const MechanismSpec& spec, int m,
                              const IdentityDatabase& gallery,
                              RandomStream& rng) {
  if (m < 1) throw InvalidParameterError("averaging_attack requires m >= 1");
  if (gallery.records.empty()) {
    throw EmptyGalleryError("averaging_attack: empty gallery");
  }
  spec.validate();
  std::vector<double> mean(x.dim(), 0.0);
  for (int i = 0; i < m; ++i) {
    RandomStream sub = rng.substream(i);
    const PrivatizedEmbedding out = apply(spec, x, sub);
    for (int c = 0; c < x.dim(); ++c) mean[c] += out.vector[c];
  }
  const double mnorm = norm(mean);
  AttackReport report;
  report.observations = m;
  if (mnorm < 1e-12) {
    // Releases cancelled; the estimate carries no direction.
    report.cosine_to_true = 0.0;
    report.rank1_after_attack = 0.0;
    return report;
  }
  double ip = 0.0;
  for (int c = 0; c < x.dim(); ++c) ip += mean[c] * x[c];
  report.cosine_to_true = std::clamp(ip / mnorm, -1.0, 1.0);
  report.rank1_after_attack =
      identity_rank(mean, true_identity, gallery) == 1 ? 1.0 : 0.0;
  return report;
}

std::vector<EvalReport> privacy_utility_sweep(
    const std::vector<IdentityRecord>& queries, const IdentityDatabase& gallery,
    const std::vector<MechanismSpec>& specs, const std::vector<int>& k_values,
    std::uint64_t seed) {
  if (specs.empty()) throw InvalidParameterError("sweep requires >= 1 spec");
  if (queries.empty()) throw EmptyInputError("sweep requires queries");
  if (gallery.records.empty()) throw EmptyGalleryError("sweep: empty gallery");
  for (int k : k_values) {
    if (k < 1) throw InvalidParameterError("rank-k values must be >= 1");
  }
  for (const auto& spec : specs) spec.validate();

  // Gallery records per identity, and the identity list for impostor draws.
  std::map<std::int64_t, std::vector<std::size_t>> own_entries;
  for (std::size_t g = 0; g < gallery.records.size(); ++g) {
    own_entries[gallery.records[g].identity_id].push_back(g);
  }
  std::vector<std::int64_t> identities;
  identities.reserve(own_entries.size());
  for (const auto& [id, unused] : own_entries) identities.push_back(id);

  const RandomStream root(seed);
  std::vector<EvalReport> reports;
  reports.reserve(specs.size());

  for (std::size_t si = 0; si < specs.size(); ++si) {
    const MechanismSpec& spec = specs[si];
    const RandomStream spec_root = root.substream(si);
    // Disjoint substream spaces: privatization and pair sampling.
    const RandomStream priv_root = spec_root.substream(0);
    const RandomStream pair_root = spec_root.substream(1);

    EvalReport report;
    report.mechanism = spec;
    report.num_queries = static_cast<int>(queries.size());
    report.seed = spec_root.root_seed();

    std::vector<PrivatizedQuery> privatized(queries.size());
    std::vector<double> displacements(queries.size());
    std::vector<double> genuine, impostor;
    genuine.reserve(queries.size());
    impostor.reserve(queries.size());

    std::map<std::string, std::size_t> agree;
    for (const auto& [name, unused] : gallery.attribute_directions) {
      agree[name] = 0;
    }

    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      RandomStream sub = priv_root.substream(qi);
      const PrivatizedEmbedding out = apply(spec, queries[qi].embedding, sub);
      privatized[qi] =
          PrivatizedQuery{queries[qi].identity_id, out.vector};
      const double vn = norm(out.vector);
      if (vn < 1e-12) throw ZeroVectorError("privatized query is zero");
      displacements[qi] =
          angle_between(out.vector, vn, queries[qi].embedding);

      RandomStream pair_rng = pair_root.substream(qi);
      const auto own = own_entries.find(queries[qi].identity_id);
      if (own != own_entries.end() && identities.size() > 1) {
        const auto& mine = own->second;
        const std::size_t own_pick = std::min(
            mine.size() - 1,
            static_cast<std::size_t>(pair_rng.uniform() * mine.size()));
        genuine.push_back(
            angle_between(out.vector, vn,
                          gallery.records[mine[own_pick]].embedding));
        // One impostor identity per query keeps the two lists balanced.
        std::int64_t other;
        do {
          const std::size_t pick = std::min(
              identities.size() - 1,
              static_cast<std::size_t>(pair_rng.uniform() *
                                       identities.size()));
          other = identities[pick];
        } while (other == queries[qi].identity_id);
        const auto& theirs = own_entries.at(other);
        const std::size_t imp_pick = std::min(
            theirs.size() - 1,
            static_cast<std::size_t>(pair_rng.uniform() * theirs.size()));
        impostor.push_back(
            angle_between(out.vector, vn,
                          gallery.records[theirs[imp_pick]].embedding));
      }

      for (const auto& [name, direction] : gallery.attribute_directions) {
        double ip = 0.0;
        const auto& dc = direction.components();
        for (std::size_t c = 0; c < out.vector.size(); ++c) {
          ip += dc[c] * out.vector[c];
        }
        const int predicted = ip >= 0.0 ? 1 : 0;
        const auto label = queries[qi].attributes.find(name);
        if (label != queries[qi].attributes.end() &&
            label->second == predicted) {
          ++agree[name];
        }
      }
    }

    for (int k : k_values) {
      report.rank_k[k] = rank_k_identification(privatized, gallery, k);
    }
    if (!genuine.empty() && !impostor.empty()) {
      const EerResult eer = compute_eer(genuine, impostor);
      report.eer = eer.eer;
      report.eer_threshold = eer.threshold;
    }
    double sum = 0.0;
    for (double d : displacements) sum += d;
    report.mean_displacement = sum / displacements.size();
    report.median_displacement = median_of(displacements);
    for (const auto& [name, count] : agree) {
      report.attribute_accuracy[name] =
          static_cast<double>(count) / static_cast<double>(queries.size());
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace avatarpriv
