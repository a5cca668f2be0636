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

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "avatarpriv/errors.h"
#include "avatarpriv/version.h"

static_assert(std::endian::native == std::endian::little,
              "binary embedding format assumes a little-endian host");

namespace avatarpriv {
namespace {

constexpr char kBinaryMagic[4] = {'E', 'M', 'B', '1'};

void append_raw(std::string& out, const void* data, std::size_t size) {
  out.append(static_cast<const char*>(data), size);
}

EmbeddingSet read_jsonl(std::istream& in, const std::string& name) {
  EmbeddingSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("vec") ||
        !j["vec"].is_array()) {
      throw IoError(name + ":" + std::to_string(line_no) +
                    ": record needs integer \"id\" and array \"vec\"");
    }
    EmbeddingRecord rec;
    rec.id = j["id"].get<std::uint64_t>();
    rec.vec = j["vec"].get<std::vector<double>>();
    if (j.contains("attrs")) {
      rec.attrs = j["attrs"].get<std::map<std::string, int>>();
    }
    if (set.records.empty()) {
      set.dim = static_cast<int>(rec.vec.size());
    } else if (static_cast<int>(rec.vec.size()) != set.dim) {
      throw DimMismatchError(name + ":" + std::to_string(line_no) +
                             ": record dim " + std::to_string(rec.vec.size()) +
                             " != " + std::to_string(set.dim));
    }
    set.records.push_back(std::move(rec));
  }
  return set;
}

std::string render_jsonl(const EmbeddingSet& set) {
  std::string out;
  for (const auto& rec : set.records) {
    nlohmann::json j;
    j["id"] = rec.id;
    if (!rec.attrs.empty()) j["attrs"] = rec.attrs;
    j["vec"] = rec.vec;
    out += j.dump();
    out += '\n';
  }
  return out;
}

EmbeddingSet read_binary(std::istream& in, const std::string& name) {
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  const char* p = content.data();
  std::size_t remaining = content.size();
  const auto take = [&](void* dst, std::size_t size) {
    if (remaining < size) {
      throw IoError(name + ": truncated binary embedding file");
    }
    std::memcpy(dst, p, size);
    p += size;
    remaining -= size;
  };
  char magic[4];
  take(magic, 4);
  if (std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw IoError(name + ": bad magic, not an EMB1 file");
  }
  std::uint32_t dim = 0, count = 0;
  take(&dim, 4);
  take(&count, 4);
  if (dim == 0) throw IoError(name + ": zero dimension");
  EmbeddingSet set;
  set.dim = static_cast<int>(dim);
  set.records.resize(count);
  for (auto& rec : set.records) {
    take(&rec.id, 8);
    rec.vec.resize(dim);
    take(rec.vec.data(), sizeof(double) * dim);
  }
  if (remaining != 0) {
    throw IoError(name + ": trailing bytes after the declared records");
  }
  return set;
}

std::string render_binary(const EmbeddingSet& set) {
  std::string out;
  out.reserve(12 + set.records.size() * (8 + sizeof(double) * set.dim));
  append_raw(out, kBinaryMagic, 4);
  const std::uint32_t dim = static_cast<std::uint32_t>(set.dim);
  const std::uint32_t count = static_cast<std::uint32_t>(set.records.size());
  append_raw(out, &dim, 4);
  append_raw(out, &count, 4);
  for (const auto& rec : set.records) {
    if (static_cast<int>(rec.vec.size()) != set.dim) {
      throw DimMismatchError("record dim does not match the set dim");
    }
    append_raw(out, &rec.id, 8);
    append_raw(out, rec.vec.data(), sizeof(double) * rec.vec.size());
  }
  return out;
}

std::vector<double> json_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string(what) + " must be an array");
  return j.get<std::vector<double>>();
}

}  // namespace

std::optional<FileFormat> format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json") return FileFormat::kJsonl;
  if (ext == ".bin") return FileFormat::kBinary;
  return std::nullopt;
}

EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             std::optional<FileFormat> format) {
  if (!format.has_value()) format = format_from_path(path);
  if (!format.has_value()) {
    throw IoError("cannot deduce embedding format from \"" + path.string() +
                  "\" (expected .jsonl or .bin)");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path.string() + "\"");
  return *format == FileFormat::kJsonl ? read_jsonl(in, path.string())
                                       : read_binary(in, path.string());
}

void write_embeddings(const std::filesystem::path& path,
                      const EmbeddingSet& set,
                      std::optional<FileFormat> format) {
  if (!format.has_value()) format = format_from_path(path);
  if (!format.has_value()) {
    throw IoError("cannot deduce embedding format from \"" + path.string() +
                  "\" (expected .jsonl or .bin)");
  }
  write_text_atomic(path, *format == FileFormat::kJsonl ? render_jsonl(set)
                                                        : render_binary(set));
}

EmbeddingSet to_embedding_set(const IdentityDatabase& db) {
  EmbeddingSet set;
  set.dim = db.dim;
  set.records.reserve(db.records.size());
  for (const auto& rec : db.records) {
    set.records.push_back(
        EmbeddingRecord{static_cast<std::uint64_t>(rec.identity_id),
                        rec.embedding.components(), rec.attributes});
  }
  return set;
}

nlohmann::json database_meta_to_json(const IdentityDatabase& db) {
  nlohmann::json means = nlohmann::json::object();
  for (const auto& [id, mean] : db.identity_means) {
    means[std::to_string(id)] = mean.components();
  }
  nlohmann::json directions = nlohmann::json::object();
  for (const auto& [name, dir] : db.attribute_directions) {
    directions[name] = dir.components();
  }
  return nlohmann::json{{"format", "avatarpriv-db-meta"},
                        {"version", 1},
                        {"dim", db.dim},
                        {"identity_means", means},
                        {"attribute_directions", directions}};
}

IdentityDatabase database_from_parts(const EmbeddingSet& set,
                                     const nlohmann::json* meta) {
  IdentityDatabase db;
  db.dim = set.dim;
  db.records.reserve(set.records.size());
  for (const auto& rec : set.records) {
    db.records.push_back(
        IdentityRecord{static_cast<std::int64_t>(rec.id),
                       UnitVector::normalized(rec.vec), rec.attrs});
  }
  if (meta != nullptr) {
    if (!meta->contains("dim") || (*meta)["dim"].get<int>() != set.dim) {
      throw IoError("meta document dim does not match the record file");
    }
    for (const auto& [key, value] : (*meta)["identity_means"].items()) {
      db.identity_means.emplace(
          std::stoll(key), UnitVector::from_unit(json_vector(value, "mean")));
    }
    for (const auto& [key, value] :
         (*meta)["attribute_directions"].items()) {
      db.attribute_directions.emplace(
          key, UnitVector::from_unit(json_vector(value, "direction")));
    }
  }
  return db;
}

nlohmann::json mechanism_to_json(const MechanismSpec& spec) {
  nlohmann::json j{{"kind", to_string(spec.kind)}};
  if (spec.epsilon.has_value()) j["epsilon"] = *spec.epsilon;
  if (spec.theta.has_value()) j["theta_degrees"] = spec.theta->degrees();
  if (spec.kind == MechanismKind::kLaplaceBaseline) {
    j["renormalize"] = spec.renormalize_output;
  }
  return j;
}

MechanismSpec mechanism_from_json(const nlohmann::json& j) {
  MechanismSpec spec;
  spec.kind = mechanism_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("epsilon")) spec.epsilon = j["epsilon"].get<double>();
  if (j.contains("theta_degrees")) {
    spec.theta = AngularDistance::from_degrees(j["theta_degrees"].get<double>());
  }
  if (j.contains("renormalize")) {
    spec.renormalize_output = j["renormalize"].get<bool>();
  }
  spec.validate();
  return spec;
}

nlohmann::json remapper_to_json(const PcaRemapper& remapper) {
  return nlohmann::json{{"format", "avatarpriv-remapper"},
                        {"version", 1},
                        {"source_dim", remapper.source_dim()},
                        {"target_dim", remapper.target_dim()},
                        {"j", remapper.neighbor_count()},
                        {"lambda", remapper.lambda()},
                        {"dataset_mean", remapper.dataset_mean()},
                        {"components", remapper.components()},
                        {"reference_original", remapper.reference_original()}};
}

PcaRemapper remapper_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "avatarpriv-remapper") {
    throw IoError("not a remapper document");
  }
  if (j.value("version", 0) != 1) {
    throw IoError("unsupported remapper document version");
  }
  return PcaRemapper::from_state(
      j.at("dataset_mean").get<std::vector<double>>(),
      j.at("components").get<std::vector<std::vector<double>>>(),
      j.at("reference_original").get<std::vector<std::vector<double>>>(),
      j.at("j").get<int>(), j.at("lambda").get<double>());
}

nlohmann::json eval_report_to_json(const EvalReport& report) {
  nlohmann::json rank = nlohmann::json::object();
  for (const auto& [k, rate] : report.rank_k) rank[std::to_string(k)] = rate;
  return nlohmann::json{{"mechanism", mechanism_to_json(report.mechanism)},
                        {"rank_k", rank},
                        {"eer", report.eer},
                        {"eer_threshold", report.eer_threshold},
                        {"mean_displacement", report.mean_displacement},
                        {"median_displacement", report.median_displacement},
                        {"attribute_accuracy", report.attribute_accuracy},
                        {"num_queries", report.num_queries},
                        {"seed", report.seed}};
}

nlohmann::json attack_report_to_json(const AttackReport& report) {
  return nlohmann::json{{"observations", report.observations},
                        {"cosine_to_true", report.cosine_to_true},
                        {"rank1_after_attack", report.rank1_after_attack}};
}

nlohmann::json make_document(const std::string& command,
                             const nlohmann::json& config, std::uint64_t seed,
                             nlohmann::json payload) {
  return nlohmann::json{{"artifact", "avatarpriv"},
                        {"version", kVersion},
                        {"command", command},
                        {"config", config},
                        {"seed", seed},
                        {"payload", std::move(payload)}};
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path.string() + "\"");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write \"" + tmp.string() + "\"");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to \"" + tmp.string() + "\"");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename \"" + tmp.string() + "\" to \"" +
                  path.string() + "\": " + ec.message());
  }
}

void write_json_atomic(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

std::string render_sweep_table(const std::vector<EvalReport>& reports) {
  std::set<int> ks;
  std::set<std::string> attrs;
  for (const auto& r : reports) {
    for (const auto& [k, unused] : r.rank_k) ks.insert(k);
    for (const auto& [a, unused] : r.attribute_accuracy) attrs.insert(a);
  }
  std::ostringstream out;
  out << std::left << std::setw(28) << "method";
  for (int k : ks) {
    out << std::right << std::setw(12) << ("rank-" + std::to_string(k) + "%");
  }
  out << std::right << std::setw(10) << "eer%" << std::setw(12)
      << "disp(deg)";
  for (const auto& a : attrs) out << std::right << std::setw(10) << (a + "%");
  out << '\n';
  out << std::fixed;
  for (const auto& r : reports) {
    out << std::left << std::setw(28) << r.mechanism.label();
    out << std::setprecision(2);
    for (int k : ks) {
      const auto it = r.rank_k.find(k);
      if (it == r.rank_k.end()) {
        out << std::right << std::setw(12) << "-";
      } else {
        out << std::right << std::setw(12) << 100.0 * it->second;
      }
    }
    out << std::right << std::setw(10) << 100.0 * r.eer;
    out << std::right << std::setw(12)
        << r.median_displacement * 180.0 / 3.14159265358979323846;
    for (const auto& a : attrs) {
      const auto it = r.attribute_accuracy.find(a);
      if (it == r.attribute_accuracy.end()) {
        out << std::right << std::setw(10) << "-";
      } else {
        out << std::right << std::setw(10) << 100.0 * it->second;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace avatarpriv
