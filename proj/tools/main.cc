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
// avatarpriv command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data error (malformed files, dimension mismatches, degenerate inputs).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "avatarpriv/errors.h"
#include "avatarpriv/eval.h"
#include "avatarpriv/geometry.h"
#include "avatarpriv/io.h"
#include "avatarpriv/mechanisms.h"
#include "avatarpriv/random.h"
#include "avatarpriv/remap.h"
#include "avatarpriv/synthdata.h"
#include "avatarpriv/version.h"
#include "avatarpriv/vmf.h"

namespace {

namespace fs = std::filesystem;
using namespace avatarpriv;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  std::uint64_t seed = kDefaultSeed;
  if (const char* env = std::getenv("AVATARPRIV_SEED"); env != nullptr) {
    seed = std::strtoull(env, nullptr, 10);
  }
  if (flag_seed.has_value()) seed = *flag_seed;
  std::cerr << "seed: " << seed << "\n";
  return seed;
}

std::optional<FileFormat> parse_format(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "jsonl") return FileFormat::kJsonl;
  if (text == "bin") return FileFormat::kBinary;
  throw InvalidParameterError("--format must be jsonl or bin");
}

// Paths are validated before any compute starts.
void require_readable(const fs::path& path) {
  if (!fs::exists(path)) {
    throw IoError("input file does not exist: \"" + path.string() + "\"");
  }
}

void require_writable_dir(const fs::path& path) {
  const fs::path parent =
      path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) {
    throw IoError("output directory does not exist: \"" + parent.string() +
                  "\"");
  }
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_csv(text)) out.push_back(std::stoi(item));
  return out;
}

// Mechanism flags shared by privatize / eval / attack.
struct MechanismFlags {
  std::string kind = "identity";
  std::optional<double> epsilon;
  std::optional<double> theta_degrees;
  bool renormalize = true;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind,
                    "mechanism kind: identity|ldp|rotation|compose|uniform|"
                    "laplace")
        ->capture_default_str();
    cmd->add_option("--epsilon", epsilon,
                    "privacy parameter (ldp, compose, laplace)");
    cmd->add_option("--theta-degrees", theta_degrees,
                    "rotation angle in degrees (rotation, compose)");
    cmd->add_flag("--renormalize,!--no-renormalize", renormalize,
                  "project laplace output back to the sphere (default on)");
  }

  MechanismSpec build() const {
    MechanismSpec spec;
    spec.kind = mechanism_kind_from_string(kind);
    spec.epsilon = epsilon;
    if (theta_degrees.has_value()) {
      spec.theta = AngularDistance::from_degrees(*theta_degrees);
    }
    spec.renormalize_output = renormalize;
    spec.validate();
    if (spec.theta.has_value() && warrants_reversal_warning(*spec.theta)) {
      std::cerr << "warning: " << kReversalWarning << "\n";
    }
    return spec;
  }

  nlohmann::json config_json() const {
    nlohmann::json j{{"kind", kind}, {"renormalize", renormalize}};
    if (epsilon) j["epsilon"] = *epsilon;
    if (theta_degrees) j["theta_degrees"] = *theta_degrees;
    return j;
  }
};

IdentityDatabase load_database(const fs::path& records_path,
                               const std::string& meta_flag) {
  const EmbeddingSet set = read_embeddings(records_path);
  fs::path meta_path = meta_flag.empty()
                           ? fs::path(records_path.string() + ".meta.json")
                           : fs::path(meta_flag);
  if (fs::exists(meta_path)) {
    const nlohmann::json meta = read_json(meta_path);
    return database_from_parts(set, &meta);
  }
  if (!meta_flag.empty()) {
    throw IoError("meta document not found: \"" + meta_path.string() + "\"");
  }
  return database_from_parts(set, nullptr);
}

int run_gen(int identities, int samples, int dim, double within_kappa,
            const std::string& attributes, const std::string& out,
            const std::string& meta_out, const std::string& format,
            std::uint64_t seed) {
  require_writable_dir(out);
  const auto out_format = parse_format(format);
  RandomStream rng(seed);
  const auto db =
      generate(identities, samples, dim, within_kappa, split_csv(attributes),
               rng);
  write_embeddings(out, to_embedding_set(db), out_format);
  const fs::path meta_path =
      meta_out.empty() ? fs::path(out + ".meta.json") : fs::path(meta_out);
  nlohmann::json meta = database_meta_to_json(db);
  meta["seed"] = seed;
  meta["generator"] = {{"identities", identities},
                       {"samples", samples},
                       {"dim", dim},
                       {"within_kappa", within_kappa},
                       {"attributes", attributes}};
  write_json_atomic(meta_path, meta);
  std::cerr << "wrote " << db.records.size() << " records to " << out
            << " (meta: " << meta_path.string() << ")\n";
  return 0;
}

int run_privatize(const std::string& in, const std::string& out,
                  const MechanismFlags& mech, const std::string& remapper_path,
                  const std::string& format, int workers, std::uint64_t seed) {
  require_readable(in);
  require_writable_dir(out);
  const auto out_format = parse_format(format);
  if (!remapper_path.empty()) require_readable(remapper_path);
  const MechanismSpec spec = mech.build();
  const EmbeddingSet input = read_embeddings(in);
  EmbeddingSet output;
  output.dim = input.dim;
  output.records.reserve(input.records.size());

  if (!remapper_path.empty()) {
    const PcaRemapper remapper = remapper_from_json(read_json(remapper_path));
    const RandomStream root(seed);
    for (std::size_t i = 0; i < input.records.size(); ++i) {
      RandomStream sub = root.substream(i);
      EmbeddingRecord rec = input.records[i];
      rec.vec = privatize_remapped(remapper, rec.vec, spec, sub);
      output.records.push_back(std::move(rec));
    }
  } else {
    std::vector<UnitVector> xs;
    xs.reserve(input.records.size());
    for (const auto& rec : input.records) {
      xs.push_back(UnitVector::normalized(rec.vec));
    }
    const auto privatized = apply_batch(spec, xs, seed, workers);
    for (std::size_t i = 0; i < input.records.size(); ++i) {
      EmbeddingRecord rec = input.records[i];
      rec.vec = privatized[i].vector;
      output.records.push_back(std::move(rec));
    }
  }
  write_embeddings(out, output, out_format);
  std::cerr << "privatized " << output.records.size() << " records ("
            << spec.label() << ") -> " << out << "\n";
  return 0;
}

int run_fit_remap(const std::string& refs_path, int target_dim, int j,
                  double lambda, const std::string& out) {
  require_readable(refs_path);
  require_writable_dir(out);
  const EmbeddingSet set = read_embeddings(refs_path);
  ReferenceSet refs;
  refs.entries.reserve(set.records.size());
  for (const auto& rec : set.records) {
    refs.entries.push_back(
        {static_cast<std::int64_t>(rec.id), rec.vec});
  }
  const PcaRemapper remapper = PcaRemapper::fit(refs, target_dim, j, lambda);
  write_json_atomic(out, remapper_to_json(remapper));
  std::cerr << "fitted remapper " << remapper.source_dim() << " -> "
            << remapper.target_dim() << " on " << refs.entries.size()
            << " references -> " << out << "\n";
  return 0;
}

int run_sweep(const std::string& db_path, const std::string& meta_path,
              const std::vector<std::string>& spec_texts,
              const std::string& k_list, int queries_per_identity,
              const std::string& out, const std::string& table_out,
              std::uint64_t seed, const std::string& command) {
  require_readable(db_path);
  if (!out.empty()) require_writable_dir(out);
  if (!table_out.empty()) require_writable_dir(table_out);
  const IdentityDatabase db = load_database(db_path, meta_path);
  RandomStream split_rng = RandomStream(seed).substream(0);
  const auto split = split_query_gallery(db, queries_per_identity, split_rng);

  std::vector<MechanismSpec> specs;
  for (const auto& text : spec_texts) {
    specs.push_back(parse_mechanism_spec(text));
    if (specs.back().theta.has_value() &&
        warrants_reversal_warning(*specs.back().theta)) {
      std::cerr << "warning: " << kReversalWarning << "\n";
    }
  }
  const std::vector<int> k_values = parse_int_list(k_list);
  const auto reports = privacy_utility_sweep(
      split.queries, split.gallery, specs, k_values,
      RandomStream(seed).substream(1).root_seed());

  nlohmann::json payload = nlohmann::json::array();
  for (const auto& report : reports) {
    payload.push_back(eval_report_to_json(report));
  }
  const nlohmann::json config{{"db", db_path},
                              {"meta", meta_path},
                              {"specs", spec_texts},
                              {"k", k_list},
                              {"queries_per_identity", queries_per_identity}};
  const auto doc = make_document(command, config, seed, std::move(payload));
  if (!out.empty()) write_json_atomic(out, doc);

  const std::string table = render_sweep_table(reports);
  std::cout << table;
  if (!table_out.empty()) write_text_atomic(table_out, table);
  return 0;
}

int run_attack(const std::string& db_path, const std::string& meta_path,
               int index, const MechanismFlags& mech,
               const std::string& m_grid, int repetitions,
               const std::string& out, std::uint64_t seed) {
  require_readable(db_path);
  if (!out.empty()) require_writable_dir(out);
  const MechanismSpec spec = mech.build();
  const IdentityDatabase db = load_database(db_path, meta_path);
  if (index < 0 || index >= static_cast<int>(db.records.size())) {
    throw InvalidParameterError("--index out of range");
  }
  const auto& target = db.records[index];
  const RandomStream root(seed);

  nlohmann::json payload = nlohmann::json::array();
  std::cerr << "attacking record " << index << " (identity "
            << target.identity_id << ") with " << spec.label() << "\n";
  const auto grid = parse_int_list(m_grid);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const int m = grid[gi];
    double cos_sum = 0.0, hit_sum = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
      RandomStream rng =
          root.substream(mix_seed(gi, static_cast<std::uint64_t>(rep)));
      const AttackReport r =
          averaging_attack(target.embedding, target.identity_id, spec, m, db,
                           rng);
      cos_sum += r.cosine_to_true;
      hit_sum += r.rank1_after_attack;
    }
    AttackReport aggregate;
    aggregate.observations = m;
    aggregate.cosine_to_true = cos_sum / repetitions;
    aggregate.rank1_after_attack = hit_sum / repetitions;
    auto j = attack_report_to_json(aggregate);
    j["repetitions"] = repetitions;
    payload.push_back(std::move(j));
    std::cout << "m=" << m << " mean_cosine=" << aggregate.cosine_to_true
              << " rank1_rate=" << aggregate.rank1_after_attack << "\n";
  }
  const nlohmann::json config{{"db", db_path},    {"meta", meta_path},
                              {"index", index},   {"mechanism", mech.config_json()},
                              {"m_grid", m_grid}, {"repetitions", repetitions}};
  if (!out.empty()) {
    write_json_atomic(out, make_document("attack", config, seed,
                                         std::move(payload)));
  }
  return 0;
}

int run_check_dp(double epsilon, int dim, int trials, const std::string& out,
                 std::uint64_t seed) {
  if (epsilon <= 0.0) throw InvalidParameterError("--epsilon must be > 0");
  const RandomStream root(seed);
  double max_slack_d2 = -1e300, max_slack_dang = -1e300;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng = root.substream(t);
    const UnitVector x1 = uniform_sample(dim, rng);
    const UnitVector x2 = uniform_sample(dim, rng);
    const UnitVector y = uniform_sample(dim, rng);
    const double ratio = log_density(y, VmfParams(x1, epsilon)) -
                         log_density(y, VmfParams(x2, epsilon));
    const double d2 = euclidean_distance(x1, x2);
    const double dang = angular_distance(x1, x2).radians();
    max_slack_d2 = std::max(max_slack_d2, ratio - epsilon * d2);
    max_slack_dang = std::max(max_slack_dang, ratio - epsilon * dang);
  }
  std::cout << "trials: " << trials << " dim: " << dim
            << " epsilon: " << epsilon << "\n";
  std::cout << "max slack vs eps*d2:      " << max_slack_d2 << "\n";
  std::cout << "max slack vs eps*d_angle: " << max_slack_dang << "\n";
  const bool ok = max_slack_d2 <= 1e-9 && max_slack_dang <= 1e-9;
  std::cout << (ok ? "bound satisfied" : "BOUND VIOLATED") << "\n";
  if (!out.empty()) {
    const nlohmann::json config{
        {"epsilon", epsilon}, {"dim", dim}, {"trials", trials}};
    write_json_atomic(out, make_document("check-dp", config, seed,
                                         {{"max_slack_d2", max_slack_d2},
                                          {"max_slack_dang", max_slack_dang},
                                          {"satisfied", ok}}));
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"avatarpriv: identity-embedding privatization toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic identity database");
  int identities = 100, samples = 2, dim = 64;
  double within_kappa = 650.0;
  std::string attributes = "attr0,attr1";
  std::string gen_out, gen_meta;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--identities", identities)->capture_default_str();
  gen->add_option("--samples", samples, "samples per identity")
      ->capture_default_str();
  gen->add_option("--dim", dim)->capture_default_str();
  gen->add_option("--within-kappa", within_kappa,
                  "intra-identity VMF concentration")
      ->capture_default_str();
  gen->add_option("--attributes", attributes, "comma-separated attribute names")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "output records (.jsonl or .bin)")
      ->required();
  gen->add_option("--meta", gen_meta, "meta sidecar path (default <out>.meta.json)");
  std::string gen_format;
  gen->add_option("--format", gen_format, "output format override: jsonl|bin");
  gen->add_option("--seed", gen_seed);

  // privatize
  auto* priv = app.add_subcommand("privatize", "apply a mechanism to an embedding file");
  std::string priv_in, priv_out, priv_remapper;
  int priv_workers = 1;
  std::optional<std::uint64_t> priv_seed;
  MechanismFlags priv_mech;
  priv->add_option("--in", priv_in)->required();
  priv->add_option("--out", priv_out)->required();
  priv_mech.attach(priv);
  priv->add_option("--remapper", priv_remapper,
                   "privatize through a fitted remapper document");
  priv->add_option("--workers", priv_workers)->capture_default_str();
  std::string priv_format;
  priv->add_option("--format", priv_format, "output format override: jsonl|bin");
  priv->add_option("--seed", priv_seed);

  // fit-remap
  auto* fitr = app.add_subcommand("fit-remap", "fit a PCA remapper from references");
  std::string refs_path, fitr_out;
  int target_dim = 16, neighbor_j = 8;
  double lambda = 32.0;
  fitr->add_option("--refs", refs_path, "reference embedding file")->required();
  fitr->add_option("--target-dim", target_dim)->capture_default_str();
  fitr->add_option("--j", neighbor_j, "reconstruction neighbor count")
      ->capture_default_str();
  fitr->add_option("--lambda", lambda, "softmax temperature")
      ->capture_default_str();
  fitr->add_option("--out", fitr_out)->required();

  // eval (single mechanism) and sweep (multiple)
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one mechanism on a database");
  std::string eval_db, eval_meta, eval_k = "1,50", eval_out, eval_table;
  int eval_qpi = 1;
  std::optional<std::uint64_t> eval_seed;
  MechanismFlags eval_mech;
  eval_cmd->add_option("--db", eval_db)->required();
  eval_cmd->add_option("--meta", eval_meta);
  eval_mech.attach(eval_cmd);
  eval_cmd->add_option("--k", eval_k, "comma-separated rank-k values")
      ->capture_default_str();
  eval_cmd->add_option("--queries-per-identity", eval_qpi)
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "report document (json)");
  eval_cmd->add_option("--table", eval_table, "write the table to a file");
  eval_cmd->add_option("--seed", eval_seed);

  auto* sweep = app.add_subcommand("sweep", "evaluate a list of mechanisms");
  std::string sweep_db, sweep_meta, sweep_k = "1,50", sweep_out, sweep_table;
  int sweep_qpi = 1;
  std::optional<std::uint64_t> sweep_seed;
  std::vector<std::string> sweep_specs;
  sweep->add_option("--db", sweep_db)->required();
  sweep->add_option("--meta", sweep_meta);
  sweep->add_option("--spec", sweep_specs,
                    "mechanism, e.g. ldp:eps=50 or rotation:theta-deg=90 "
                    "(repeatable)")
      ->required();
  sweep->add_option("--k", sweep_k)->capture_default_str();
  sweep->add_option("--queries-per-identity", sweep_qpi)
      ->capture_default_str();
  sweep->add_option("--out", sweep_out);
  sweep->add_option("--table", sweep_table);
  sweep->add_option("--seed", sweep_seed);

  // attack
  auto* attack = app.add_subcommand("attack", "averaging attack over an m-grid");
  std::string attack_db, attack_meta, attack_m = "1,10,100,1000", attack_out;
  int attack_index = 0, attack_reps = 100;
  std::optional<std::uint64_t> attack_seed;
  MechanismFlags attack_mech;
  attack->add_option("--db", attack_db)->required();
  attack->add_option("--meta", attack_meta);
  attack->add_option("--index", attack_index, "target record index")
      ->capture_default_str();
  attack_mech.attach(attack);
  attack->add_option("--m-grid", attack_m)->capture_default_str();
  attack->add_option("--repetitions", attack_reps)->capture_default_str();
  attack->add_option("--out", attack_out);
  attack->add_option("--seed", attack_seed);

  // check-dp
  auto* check = app.add_subcommand("check-dp", "empirical metric-privacy bound check");
  double check_eps = 50.0;
  int check_dim = 16, check_trials = 100000;
  std::string check_out;
  std::optional<std::uint64_t> check_seed;
  check->add_option("--epsilon", check_eps)->capture_default_str();
  check->add_option("--dim", check_dim)->capture_default_str();
  check->add_option("--trials", check_trials)->capture_default_str();
  check->add_option("--out", check_out);
  check->add_option("--seed", check_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      return run_gen(identities, samples, dim, within_kappa, attributes,
                     gen_out, gen_meta, gen_format, resolve_seed(gen_seed));
    }
    if (priv->parsed()) {
      return run_privatize(priv_in, priv_out, priv_mech, priv_remapper,
                           priv_format, priv_workers,
                           resolve_seed(priv_seed));
    }
    if (fitr->parsed()) {
      return run_fit_remap(refs_path, target_dim, neighbor_j, lambda,
                           fitr_out);
    }
    if (eval_cmd->parsed()) {
      const MechanismSpec spec = eval_mech.build();
      std::string spec_text = to_string(spec.kind);
      std::vector<std::string> texts;
      {
        // Re-encode the flag form as a spec string for the config record.
        std::string params;
        if (spec.epsilon) params += "eps=" + std::to_string(*spec.epsilon);
        if (spec.theta) {
          if (!params.empty()) params += ",";
          params += "theta-deg=" + std::to_string(spec.theta->degrees());
        }
        if (spec.kind == MechanismKind::kLaplaceBaseline &&
            !spec.renormalize_output) {
          if (!params.empty()) params += ",";
          params += "renorm=false";
        }
        texts.push_back(params.empty() ? spec_text
                                       : spec_text + ":" + params);
      }
      return run_sweep(eval_db, eval_meta, texts, eval_k, eval_qpi, eval_out,
                       eval_table, resolve_seed(eval_seed), "eval");
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_db, sweep_meta, sweep_specs, sweep_k, sweep_qpi,
                       sweep_out, sweep_table, resolve_seed(sweep_seed),
                       "sweep");
    }
    if (attack->parsed()) {
      return run_attack(attack_db, attack_meta, attack_index, attack_mech,
                        attack_m, attack_reps, attack_out,
                        resolve_seed(attack_seed));
    }
    if (check->parsed()) {
      return run_check_dp(check_eps, check_dim, check_trials, check_out,
                          resolve_seed(check_seed));
    }
  } catch (const InvalidSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
