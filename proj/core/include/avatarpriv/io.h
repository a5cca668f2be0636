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
// File formats and report documents. Two embedding formats:
//   JSON Lines: one object per record, fields id (integer), attrs (object,
//     optional), vec (array of numbers). Doubles use shortest round-trip
//     decimals, so jsonl -> binary -> jsonl is bit-exact.
//   Binary: magic "EMB1", then little-endian u32 dim, u32 record count, and
//     per record u64 id plus dim IEEE-754 doubles. Attributes live only in
//     the JSONL form.
// All writes are atomic (write temp, then rename).

#ifndef AVATARPRIV_IO_H_
#define AVATARPRIV_IO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avatarpriv/eval.h"
#include "avatarpriv/mechanisms.h"
#include "avatarpriv/remap.h"
#include "avatarpriv/synthdata.h"

namespace avatarpriv {

enum class FileFormat { kJsonl, kBinary };

// Deduced from the extension: .jsonl / .json -> kJsonl, .bin -> kBinary.
std::optional<FileFormat> format_from_path(const std::filesystem::path& path);

struct EmbeddingRecord {
  std::uint64_t id = 0;
  std::vector<double> vec;
  std::map<std::string, int> attrs;
};

struct EmbeddingSet {
  int dim = 0;
  std::vector<EmbeddingRecord> records;
};

// Throws IoError on malformed content, DimMismatchError on inconsistent
// record dimensions. Format defaults to the path extension.
EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             std::optional<FileFormat> format = {});
void write_embeddings(const std::filesystem::path& path,
                      const EmbeddingSet& set,
                      std::optional<FileFormat> format = {});

EmbeddingSet to_embedding_set(const IdentityDatabase& db);

// Sidecar document carrying what the record files cannot: identity means and
// attribute hyperplane directions.
nlohmann::json database_meta_to_json(const IdentityDatabase& db);

// Rebuilds a database from records plus an optional meta document (records
// only: means and directions stay empty).
IdentityDatabase database_from_parts(const EmbeddingSet& set,
                                     const nlohmann::json* meta);

nlohmann::json mechanism_to_json(const MechanismSpec& spec);
MechanismSpec mechanism_from_json(const nlohmann::json& j);

nlohmann::json remapper_to_json(const PcaRemapper& remapper);
PcaRemapper remapper_from_json(const nlohmann::json& j);

nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json attack_report_to_json(const AttackReport& report);

// Wraps a payload with the artifact version, command name, full config, and
// seed so every emitted document is replayable.
nlohmann::json make_document(const std::string& command,
                             const nlohmann::json& config, std::uint64_t seed,
                             nlohmann::json payload);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json_atomic(const std::filesystem::path& path,
                       const nlohmann::json& j);
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Fixed-width table over the sweep reports: method, rank-k columns, EER,
// displacement, then attribute columns.
std::string render_sweep_table(const std::vector<EvalReport>& reports);

}  // namespace avatarpriv

#endif  // AVATARPRIV_IO_H_
