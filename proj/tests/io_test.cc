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

#include "avatarpriv/io.h"

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "avatarpriv/errors.h"
#include "avatarpriv/geometry.h"
#include "test_support.h"

namespace avatarpriv {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("avatarpriv_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

EmbeddingSet awkward_set() {
  // Values chosen to stress decimal round-tripping.
  EmbeddingSet set;
  set.dim = 4;
  set.records.push_back(
      {0, {0.1, 1.0 / 3.0, -2.5e-17, 1.7976931348623157e308}, {{"a", 1}}});
  set.records.push_back(
      {18446744073709551615ull,
       {5e-324, -0.0, 3.141592653589793, 0.30000000000000004},
       {}});
  return set;
}

TEST(EmbeddingFiles, JsonlBinaryRoundTripIsBitExact) {
  const TempDir tmp;
  const EmbeddingSet original = awkward_set();
  write_embeddings(tmp / "a.jsonl", original);
  const EmbeddingSet from_jsonl = read_embeddings(tmp / "a.jsonl");
  write_embeddings(tmp / "a.bin", from_jsonl);
  const EmbeddingSet from_bin = read_embeddings(tmp / "a.bin");
  write_embeddings(tmp / "b.jsonl", from_bin);
  const EmbeddingSet final_set = read_embeddings(tmp / "b.jsonl");

  ASSERT_EQ(final_set.records.size(), original.records.size());
  for (std::size_t i = 0; i < original.records.size(); ++i) {
    ASSERT_EQ(final_set.records[i].id, original.records[i].id);
    ASSERT_EQ(final_set.records[i].vec.size(), original.records[i].vec.size());
    for (std::size_t c = 0; c < original.records[i].vec.size(); ++c) {
      const double a = original.records[i].vec[c];
      const double b = final_set.records[i].vec[c];
      ASSERT_EQ(std::memcmp(&a, &b, sizeof(double)), 0)
          << "record " << i << " component " << c;
    }
  }
  // Attributes survive the jsonl legs (the binary form drops them by design).
  const EmbeddingSet jsonl_only = read_embeddings(tmp / "a.jsonl");
  EXPECT_EQ(jsonl_only.records[0].attrs.at("a"), 1);
}

TEST(EmbeddingFiles, RereadingRewrittenFileIsByteIdentical) {
  const TempDir tmp;
  write_embeddings(tmp / "x.jsonl", awkward_set());
  std::ifstream first(tmp / "x.jsonl", std::ios::binary);
  const std::string bytes1((std::istreambuf_iterator<char>(first)),
                           std::istreambuf_iterator<char>());
  write_embeddings(tmp / "y.jsonl", read_embeddings(tmp / "x.jsonl"));
  std::ifstream second(tmp / "y.jsonl", std::ios::binary);
  const std::string bytes2((std::istreambuf_iterator<char>(second)),
                           std::istreambuf_iterator<char>());
  EXPECT_EQ(bytes1, bytes2);
}

TEST(EmbeddingFiles, MalformedInputsRejected) {
  const TempDir tmp;
  {
    std::ofstream out(tmp / "bad.jsonl");
    out << "{\"id\": 1}\n";
  }
  EXPECT_THROW(read_embeddings(tmp / "bad.jsonl"), IoError);
  {
    std::ofstream out(tmp / "ragged.jsonl");
    out << "{\"id\": 1, \"vec\": [1.0, 0.0]}\n";
    out << "{\"id\": 2, \"vec\": [1.0]}\n";
  }
  EXPECT_THROW(read_embeddings(tmp / "ragged.jsonl"), DimMismatchError);
  {
    std::ofstream out(tmp / "bad.bin", std::ios::binary);
    out << "NOPE";
  }
  EXPECT_THROW(read_embeddings(tmp / "bad.bin"), IoError);
  {
    std::ofstream out(tmp / "trunc.bin", std::ios::binary);
    out << "EMB1";
    const std::uint32_t dim = 4, count = 100;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
  }
  EXPECT_THROW(read_embeddings(tmp / "trunc.bin"), IoError);
  EXPECT_THROW(read_embeddings(tmp / "missing.jsonl"), IoError);
  EXPECT_THROW(read_embeddings(tmp / "no_extension"), IoError);
}

TEST(DatabaseMeta, RoundTripsMeansAndDirections) {
  RandomStream rng(7);
  const auto db = generate(12, 2, 6, 40.0, {"attr0"}, rng);
  const auto meta = database_meta_to_json(db);
  const auto set = to_embedding_set(db);
  const auto rebuilt = database_from_parts(set, &meta);
  ASSERT_EQ(rebuilt.records.size(), db.records.size());
  for (const auto& [id, mean] : db.identity_means) {
    ASSERT_EQ(rebuilt.identity_means.at(id).components(), mean.components());
  }
  ASSERT_EQ(rebuilt.attribute_directions.at("attr0").components(),
            db.attribute_directions.at("attr0").components());
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    ASSERT_EQ(rebuilt.records[i].attributes, db.records[i].attributes);
  }
}

TEST(MechanismJson, RoundTrip) {
  const auto specs = {
      MechanismSpec::identity(), MechanismSpec::avatar_ldp(42.0),
      MechanismSpec::avatar_rotation(AngularDistance::from_degrees(135)),
      MechanismSpec::compose_ldp_rotation(7.0,
                                          AngularDistance::from_degrees(45)),
      MechanismSpec::uniform_baseline(),
      MechanismSpec::laplace_baseline(3.0, false)};
  for (const auto& spec : specs) {
    const auto j = mechanism_to_json(spec);
    EXPECT_TRUE(mechanism_from_json(j) == spec) << j.dump();
  }
}

TEST(RemapperJson, RoundTripPreservesProjections) {
  testing::OracleRng orng(5);
  ReferenceSet refs;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(10);
    for (double& c : v) c = orng.gaussian();
    refs.entries.push_back({i, v});
  }
  const PcaRemapper fitted = PcaRemapper::fit(refs, 4, 3, 16.0);
  const auto doc = remapper_to_json(fitted);
  const PcaRemapper loaded = remapper_from_json(doc);
  ASSERT_EQ(loaded.source_dim(), fitted.source_dim());
  ASSERT_EQ(loaded.target_dim(), fitted.target_dim());
  for (const auto& e : refs.entries) {
    ASSERT_EQ(loaded.project(e.embedding).components(),
              fitted.project(e.embedding).components());
  }
  // Tampered component rows must be rejected on load.
  auto corrupt = doc;
  corrupt["components"][0][0] = 5.0;
  EXPECT_THROW(remapper_from_json(corrupt), InvalidParameterError);
}

TEST(Documents, EnvelopeCarriesConfigSeedVersion) {
  const auto doc = make_document("sweep", {{"dim", 16}}, 99,
                                 nlohmann::json::array());
  EXPECT_EQ(doc["artifact"], "avatarpriv");
  EXPECT_EQ(doc["command"], "sweep");
  EXPECT_EQ(doc["seed"], 99);
  EXPECT_EQ(doc["config"]["dim"], 16);
  EXPECT_TRUE(doc.contains("version"));
}

TEST(Documents, AtomicWriteLeavesNoTempFile) {
  const TempDir tmp;
  write_json_atomic(tmp / "doc.json", {{"k", 1}});
  EXPECT_TRUE(fs::exists(tmp / "doc.json"));
  EXPECT_FALSE(fs::exists(tmp / "doc.json.tmp"));
  const auto back = read_json(tmp / "doc.json");
  EXPECT_EQ(back["k"], 1);
}

TEST(SweepTable, RendersMethodAndColumns) {
  EvalReport report;
  report.mechanism = MechanismSpec::avatar_ldp(50.0);
  report.rank_k[1] = 0.5491;
  report.rank_k[50] = 0.8314;
  report.eer = 0.0893;
  report.median_displacement = 0.3;
  report.attribute_accuracy["gender"] = 0.7496;
  const std::string table = render_sweep_table({report});
  EXPECT_NE(table.find("ldp eps=50"), std::string::npos);
  EXPECT_NE(table.find("rank-1%"), std::string::npos);
  EXPECT_NE(table.find("rank-50%"), std::string::npos);
  EXPECT_NE(table.find("54.91"), std::string::npos);
  EXPECT_NE(table.find("8.93"), std::string::npos);
  EXPECT_NE(table.find("74.96"), std::string::npos);
}

}  // namespace
}  // namespace avatarpriv
