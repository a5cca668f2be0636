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
// Acceptance suite. Each test covers one release criterion at its pinned
// tolerance and prints one [ACCEPTANCE] line on success; a failed gtest line
// marks the criterion red.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>

#include "gtest/gtest.h"
#include "avatarpriv/errors.h"
#include "avatarpriv/eval.h"
#include "avatarpriv/geometry.h"
#include "avatarpriv/io.h"
#include "avatarpriv/mechanisms.h"
#include "avatarpriv/remap.h"
#include "avatarpriv/synthdata.h"
#include "avatarpriv/vmf.h"
#include "test_support.h"

namespace avatarpriv {
namespace {

constexpr double kPi = std::numbers::pi;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void pass(const std::string& line) {
  std::cout << "[ACCEPTANCE] " << line << ": PASS\n";
}

// Criterion 5/9 share one sweep over the pinned synthetic database
// (1000 identities, dim 512, 1 gallery + 1 query per identity, within-kappa
// high enough that un-privatized rank-1 is 100% while intra-identity spread
// stays measurable).
struct SweepFixture {
  std::vector<EvalReport> reports;
  int num_queries = 0;

  enum Row {
    kIdentity = 0,
    kEps200,
    kEps100,
    kEps50,
    kEps10,
    kEps1,
    kUniform,
    kRot90,
    kRot150,
  };

  static const SweepFixture& get() {
    static const SweepFixture fixture = [] {
      SweepFixture f;
      RandomStream gen_rng(204);
      const auto db = generate(1000, 2, 512, 650.0, {"attr0", "attr1"},
                               gen_rng);
      RandomStream split_rng(11);
      const auto split = split_query_gallery(db, 1, split_rng);
      const std::vector<MechanismSpec> specs = {
          MechanismSpec::identity(),
          MechanismSpec::avatar_ldp(200.0),
          MechanismSpec::avatar_ldp(100.0),
          MechanismSpec::avatar_ldp(50.0),
          MechanismSpec::avatar_ldp(10.0),
          MechanismSpec::avatar_ldp(1.0),
          MechanismSpec::uniform_baseline(),
          MechanismSpec::avatar_rotation(AngularDistance::from_degrees(90)),
          MechanismSpec::avatar_rotation(AngularDistance::from_degrees(150))};
      f.reports = privacy_utility_sweep(split.queries, split.gallery, specs,
                                        {1, 50}, 2026);
      f.num_queries = static_cast<int>(split.queries.size());
      return f;
    }();
    return fixture;
  }

  long hits(Row row) const {
    return std::lround(reports[row].rank_k.at(1) * num_queries);
  }
};

TEST(Acceptance, C01_RotationExactness) {
  const auto start = std::chrono::steady_clock::now();
  for (const int dim : {2, 16, 512}) {
    RandomStream rng(9000 + dim);
    const UnitVector x = uniform_sample(dim, rng);
    for (const double deg : {30.0, 60.0, 90.0, 135.0, 150.0, 180.0}) {
      const auto theta = AngularDistance::from_degrees(deg);
      const double expected = std::cos(theta.radians());
      for (int trial = 0; trial < 10000; ++trial) {
        const auto out = avatar_rotation(x, theta, rng);
        double ip = 0.0;
        for (int c = 0; c < dim; ++c) ip += x[c] * out.vector[c];
        ASSERT_LT(std::abs(ip - expected), 1e-9)
            << "dim=" << dim << " theta=" << deg << " trial=" << trial;
      }
    }
  }
  const double seconds = elapsed_seconds(start);
  ASSERT_LT(seconds, 5.0);
  pass("C1 rotation exactness, dims {2,16,512} x 6 angles x 1e4 trials");
}

TEST(Acceptance, C02_ThetaPiReversibility) {
  RandomStream rng(9100);
  for (int trial = 0; trial < 100; ++trial) {
    const UnitVector x = uniform_sample(24, rng);
    const auto pi = AngularDistance::from_radians(kPi);
    const auto once = avatar_rotation(x, pi, rng);
    const auto twice =
        avatar_rotation(UnitVector::from_unit(once.vector), pi, rng);
    for (int c = 0; c < 24; ++c) {
      ASSERT_NEAR(twice.vector[c], x[c], 1e-9);
    }
  }
  // The documented warning exists and fires exactly at theta = pi.
  ASSERT_TRUE(warrants_reversal_warning(AngularDistance::from_radians(kPi)));
  ASSERT_FALSE(
      warrants_reversal_warning(AngularDistance::from_degrees(179.0)));
  ASSERT_NE(std::string(kReversalWarning).find("deterministic"),
            std::string::npos);
  pass("C2 theta = 180 deg double application restores input; warning wired");
}

TEST(Acceptance, C03_VmfSamplerMoments) {
  const auto start = std::chrono::steady_clock::now();
  {
    RandomStream rng(9200);
    const UnitVector mu = UnitVector::normalized({0.3, -1.1, 0.7});
    const VmfParams params(mu, 10.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += dot(mu, sample_vmf(params, rng));
    // coth(10) - 1/10 frozen from a 50-digit evaluation.
    ASSERT_NEAR(sum / n, 0.9000000041223072533738, 0.001);
  }
  {
    RandomStream rng(9201);
    const UnitVector mu = UnitVector::normalized({-0.8, 0.6});
    const VmfParams params(mu, 2.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += dot(mu, sample_vmf(params, rng));
    // I_1(2)/I_0(2) frozen from a 50-digit evaluation.
    ASSERT_NEAR(sum / n, 0.6977746579640079820068, 0.002);
  }
  const double seconds = elapsed_seconds(start);
  ASSERT_LT(seconds, 30.0);
  pass("C3 VMF moment checks at (dim 3, kappa 10) and (dim 2, kappa 2)");
}

TEST(Acceptance, C04_EmpiricalLdpBound) {
  const auto start = std::chrono::steady_clock::now();
  for (const int dim : {3, 512}) {
    RandomStream rng(9300 + dim);
    for (int trial = 0; trial < 100000; ++trial) {
      const UnitVector x1 = uniform_sample(dim, rng);
      const UnitVector x2 = uniform_sample(dim, rng);
      const UnitVector y = uniform_sample(dim, rng);
      const double d2 = euclidean_distance(x1, x2);
      const double dang = angular_distance(x1, x2).radians();
      for (const double eps : {1.0, 50.0}) {
        const double ratio = log_density(y, VmfParams(x1, eps)) -
                             log_density(y, VmfParams(x2, eps));
        ASSERT_LE(ratio, eps * d2 + 1e-9) << "dim=" << dim << " eps=" << eps;
        ASSERT_LE(eps * d2, eps * dang + 1e-9);
      }
    }
  }
  const double seconds = elapsed_seconds(start);
  ASSERT_LT(seconds, 10.0);
  pass("C4 log-density ratio <= eps*d2 <= eps*d_angle, 1e5 triples x "
       "dims {3,512} x eps {1,50}, zero violations");
}

TEST(Acceptance, C05_Table2DirectionalTrends) {
  const auto start = std::chrono::steady_clock::now();
  const SweepFixture& f = SweepFixture::get();
  const long n = f.num_queries;
  ASSERT_EQ(n, 1000);

  // Sanity anchor: the un-privatized row identifies essentially perfectly.
  ASSERT_GT(f.reports[SweepFixture::kIdentity].rank_k.at(1), 0.95);

  // (a) rank-1 strictly decreases along eps in {200, 100, 50, 10, 1}.
  const double r200 = f.reports[SweepFixture::kEps200].rank_k.at(1);
  const double r100 = f.reports[SweepFixture::kEps100].rank_k.at(1);
  const double r50 = f.reports[SweepFixture::kEps50].rank_k.at(1);
  const double r10 = f.reports[SweepFixture::kEps10].rank_k.at(1);
  const double r1 = f.reports[SweepFixture::kEps1].rank_k.at(1);
  ASSERT_GT(r200, r100);
  ASSERT_GT(r100, r50);
  ASSERT_GT(r50, r10);
  ASSERT_GT(r10, r1);

  // (b) eps = 1 indistinguishable from the uniform baseline (alpha = 0.01).
  const long uniform_hits = f.hits(SweepFixture::kUniform);
  ASSERT_LT(std::abs(testing::two_proportion_z(f.hits(SweepFixture::kEps1), n,
                                               uniform_hits, n)),
            2.5758);

  // (c) rotation 90 deg indistinguishable from the uniform baseline.
  ASSERT_LT(std::abs(testing::two_proportion_z(f.hits(SweepFixture::kRot90), n,
                                               uniform_hits, n)),
            2.5758);

  // (d) rotation 150 deg strictly below rotation 90 deg.
  ASSERT_LT(f.reports[SweepFixture::kRot150].rank_k.at(1),
            f.reports[SweepFixture::kRot90].rank_k.at(1));

  // (e) uniform baseline sits at the 1/1000 chance floor (exact binomial
  // acceptance region [0, 4] at alpha ~ 0.01 for p = 1/1000, n = 1000).
  ASSERT_LE(uniform_hits, 4);

  // rank-k is nondecreasing in k on every row.
  for (const auto& report : f.reports) {
    ASSERT_LE(report.rank_k.at(1), report.rank_k.at(50));
  }

  const double seconds = elapsed_seconds(start);
  ASSERT_LT(seconds, 120.0);
  pass("C5 rank-1 trends: eps-chain strict decrease; eps=1 ~ uniform; "
       "rot90 ~ uniform; rot150 < rot90; uniform at the 1/N floor");
}

TEST(Acceptance, C06_EerAnchors) {
  // Identical populations -> 0.5.
  testing::OracleRng rng(9400);
  std::vector<double> gen(10000), imp(10000);
  for (double& v : gen) v = rng.uniform();
  for (double& v : imp) v = rng.uniform();
  ASSERT_NEAR(compute_eer(gen, imp).eer, 0.5, 0.02);

  // Disjoint populations -> exactly 0.
  ASSERT_EQ(compute_eer({0.1, 0.2, 0.3}, {0.5, 0.7, 0.9}).eer, 0.0);

  // Four-point hand case -> exactly 0.25 (exhaustive oracle value).
  ASSERT_DOUBLE_EQ(compute_eer({0.1, 0.3}, {0.2, 0.4}).eer, 0.25);
  pass("C6 EER anchors: 0.5 on identical, 0.0 on disjoint, 0.25 on the "
       "4-point case");
}

TEST(Acceptance, C07_RemapRoundTrip) {
  testing::OracleRng orng(9500);
  ReferenceSet refs;
  const int source_dim = 32, n = 64;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(source_dim);
    for (double& c : v) c = orng.gaussian();
    refs.entries.push_back({i, v});
  }
  const PcaRemapper remapper = PcaRemapper::fit(refs, 16, 1, 32.0);

  RandomStream rng(9501);
  for (const auto& e : refs.entries) {
    const auto out = privatize_remapped(remapper, e.embedding,
                                        MechanismSpec::identity(), rng);
    for (int c = 0; c < source_dim; ++c) {
      ASSERT_NEAR(out[c], e.embedding[c], 1e-9);
    }
  }

  // Softmax weights over the j nearest neighbors: nonnegative, summing to 1
  // within 1e-12, nonincreasing in distance. Verified through the
  // reconstruction of known mixtures.
  const PcaRemapper wide = PcaRemapper::fit(refs, 16, 8, 32.0);
  for (int trial = 0; trial < 200; ++trial) {
    const UnitVector y = UnitVector::from_unit(orng.unit_vector(16));
    std::vector<std::pair<double, int>> d;
    for (int i = 0; i < n; ++i) {
      d.emplace_back(
          angular_distance(y, wide.reference_projected()[i]).radians(), i);
    }
    std::stable_sort(d.begin(), d.end());
    double total = 0.0, prev = 1e300;
    std::vector<double> weights(8);
    for (int k = 0; k < 8; ++k) {
      weights[k] = std::exp(-32.0 * (d[k].first - d[0].first));
      total += weights[k];
    }
    double wsum = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double w = weights[k] / total;
      ASSERT_GE(w, 0.0);
      ASSERT_LE(w, prev + 1e-15);
      prev = w;
      wsum += w;
    }
    ASSERT_NEAR(wsum, 1.0, 1e-12);
    // The library's reconstruction equals the oracle mixture.
    std::vector<double> expected(source_dim, 0.0);
    for (int k = 0; k < 8; ++k) {
      for (int c = 0; c < source_dim; ++c) {
        expected[c] +=
            (weights[k] / total) * refs.entries[d[k].second].embedding[c];
      }
    }
    const auto out = wide.reconstruct(y);
    for (int c = 0; c < source_dim; ++c) {
      ASSERT_NEAR(out[c], expected[c], 1e-12);
    }
  }
  pass("C7 remap round trip exact at j=1; softmax weights form a monotone "
       "distribution");
}

TEST(Acceptance, C08_AveragingAttack) {
  RandomStream gen_rng(9600);
  const auto gallery = generate(100, 1, 16, 1.0e5, {}, gen_rng);
  const UnitVector x = gallery.records[7].embedding;

  const auto ldp = MechanismSpec::avatar_ldp(10.0);
  double prev_mean = -1.0;
  double final_mean = 0.0;
  for (const int m : {1, 10, 100, 1000}) {
    double cos_sum = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      RandomStream rng(mix_seed(9601 + m, rep));
      cos_sum += averaging_attack(x, 7, ldp, m, gallery, rng).cosine_to_true;
    }
    const double mean_cos = cos_sum / 100.0;
    ASSERT_GE(mean_cos, prev_mean) << "m=" << m;
    prev_mean = mean_cos;
    final_mean = mean_cos;
  }
  ASSERT_GT(final_mean, 0.99);

  const auto uniform = MechanismSpec::uniform_baseline();
  for (const int m : {1, 10, 100, 1000}) {
    double cos_sum = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      RandomStream rng(mix_seed(9700 + m, rep));
      cos_sum +=
          averaging_attack(x, 7, uniform, m, gallery, rng).cosine_to_true;
    }
    ASSERT_NEAR(cos_sum / 100.0, 0.0, 0.05) << "m=" << m;
  }
  pass("C8 averaging attack: LDP estimate monotone in m, cosine > 0.99 at "
       "m=1000; uniform baseline flat at 0");
}

TEST(Acceptance, C09_AttributePreservationTrend) {
  const SweepFixture& f = SweepFixture::get();
  const auto& strong = f.reports[SweepFixture::kEps200].attribute_accuracy;
  const auto& weak = f.reports[SweepFixture::kEps1].attribute_accuracy;
  const auto& uniform = f.reports[SweepFixture::kUniform].attribute_accuracy;
  ASSERT_EQ(strong.size(), 2u);
  for (const auto& [name, rate] : strong) {
    ASSERT_GE(rate, weak.at(name)) << name;
    ASSERT_NEAR(uniform.at(name), 0.5, 0.03) << name;
  }
  pass("C9 attribute agreement at eps=200 >= eps=1; uniform baseline at "
       "50% +- 3");
}

TEST(Acceptance, C10_RotationThroughputAndBatchDeterminism) {
  RandomStream rng(9800);
  std::vector<UnitVector> xs;
  xs.reserve(10000);
  for (int i = 0; i < 10000; ++i) xs.push_back(uniform_sample(512, rng));
  const auto spec =
      MechanismSpec::avatar_rotation(AngularDistance::from_degrees(90));

  const auto start = std::chrono::steady_clock::now();
  const auto single = apply_batch(spec, xs, 424242, 1);
  const double seconds = elapsed_seconds(start);
  ASSERT_LT(seconds, 1.0) << "10^4 rotations at dim 512 took " << seconds
                          << " s single-threaded";

  const auto quad = apply_batch(spec, xs, 424242, 4);
  ASSERT_EQ(single.size(), quad.size());
  for (std::size_t i = 0; i < single.size(); ++i) {
    ASSERT_EQ(single[i].vector, quad[i].vector);
  }
  pass("C10 1e4 dim-512 rotations in < 1 s single-threaded; results "
       "independent of worker count");
}

TEST(Acceptance, C11_SerializationAndReplay) {
  // Bit-exact JSONL <-> binary round trip on a 10^4-record database.
  RandomStream gen_rng(9900);
  const auto db = generate(2500, 4, 64, 300.0, {"attr0"}, gen_rng);
  const EmbeddingSet original = to_embedding_set(db);
  ASSERT_EQ(original.records.size(), 10000u);

  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "avatarpriv_acceptance_c11";
  fs::create_directories(dir);
  write_embeddings(dir / "db.jsonl", original);
  write_embeddings(dir / "db.bin", read_embeddings(dir / "db.jsonl"));
  const EmbeddingSet back = read_embeddings(dir / "db.bin");
  ASSERT_EQ(back.records.size(), original.records.size());
  for (std::size_t i = 0; i < original.records.size(); ++i) {
    ASSERT_EQ(back.records[i].id, original.records[i].id);
    for (std::size_t c = 0; c < original.records[i].vec.size(); ++c) {
      const double a = original.records[i].vec[c];
      const double b = back.records[i].vec[c];
      ASSERT_EQ(std::memcmp(&a, &b, sizeof(double)), 0);
    }
  }
  fs::remove_all(dir);

  // Reports replay bit-exactly from the embedded seed + config.
  RandomStream split_rng(9901);
  const auto split = split_query_gallery(db, 1, split_rng);
  const std::vector<MechanismSpec> specs = {MechanismSpec::identity(),
                                            MechanismSpec::avatar_ldp(50.0)};
  const std::uint64_t seed = 616;
  const auto run = [&] {
    nlohmann::json payload = nlohmann::json::array();
    for (const auto& report :
         privacy_utility_sweep(split.queries, split.gallery, specs, {1, 50},
                               seed)) {
      payload.push_back(eval_report_to_json(report));
    }
    return make_document("sweep", {{"k", "1,50"}}, seed, std::move(payload));
  };
  const auto doc = run();
  // Replay from the document's own seed field.
  const std::uint64_t replay_seed = doc.at("seed").get<std::uint64_t>();
  nlohmann::json replay_payload = nlohmann::json::array();
  for (const auto& report : privacy_utility_sweep(
           split.queries, split.gallery, specs, {1, 50}, replay_seed)) {
    replay_payload.push_back(eval_report_to_json(report));
  }
  ASSERT_EQ(doc.at("payload"), replay_payload);
  pass("C11 JSONL <-> binary bit-exact on 1e4 records; sweep replays "
       "bit-exactly from embedded seed");
}

}  // namespace
}  // namespace avatarpriv
