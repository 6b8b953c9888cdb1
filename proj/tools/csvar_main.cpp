// Copyright 2026 The csvar Authors
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
// csvar: command-line front end for the shuffler, the dataset generator,
// the federated simulator and the attack/metric evaluators.
//
// Exit status: 0 on success, 2 on usage or input errors, 1 otherwise.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csvar/csvar.hpp"
#include "experiment_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace csvar::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

ImageTensor pad_for_regions(const ImageTensor& image) {
  return reflect_pad_to_multiple(image, region_size(image.height(), image.width()));
}

// ---- variance-map -------------------------------------------------------

struct VarianceMapArgs {
  std::string image;
  std::string out;
  std::string stats;
};

int run_variance_map(const VarianceMapArgs& a) {
  const ImageTensor image = pad_for_regions(read_image(a.image));
  const int s = region_size(image.height(), image.width());
  const RegionGrid grid = partition_regions(image, s);
  const VarianceMap vmap = variance_map(image, grid);

  json j;
  j["height"] = image.height();
  j["width"] = image.width();
  j["channels"] = image.channels();
  j["region_size"] = s;
  j["rows"] = vmap.rows;
  j["cols"] = vmap.cols;
  j["min"] = vmap.min();
  j["max"] = vmap.max();
  j["median"] = vmap.median;
  j["values"] = vmap.values;

  write_variance_heatmap(vmap, a.out);
  if (!a.stats.empty()) write_file(a.stats, j.dump(2) + "\n");
  print_json(j);
  return kExitOk;
}

// ---- shuffle ------------------------------------------------------------

struct ShuffleArgs {
  std::string image;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t image_id = 0;
  std::string mode = "channel-wise";
  std::optional<int> block_size;
  std::optional<double> dp_sigma;
};

ShuffleConfig make_shuffle_config(std::uint64_t seed, std::uint64_t epoch,
                                  const std::string& mode, std::optional<int> block_size,
                                  std::optional<double> dp_sigma) {
  ShuffleConfig cfg;
  cfg.master_seed = seed;
  cfg.epoch = epoch;
  cfg.mode = parse_shuffle_mode(mode);
  cfg.block_size_override = block_size;
  cfg.dp_sigma = dp_sigma;
  return cfg;
}

int run_shuffle(const ShuffleArgs& a) {
  const ImageTensor image = pad_for_regions(read_image(a.image));
  const ShuffleConfig cfg = make_shuffle_config(a.seed, a.epoch, a.mode, a.block_size, a.dp_sigma);
  cfg.validate(region_size(image.height(), image.width()));
  write_image(a.out, obfuscate(image, cfg, a.image_id));
  return kExitOk;
}

// ---- generate -----------------------------------------------------------

struct GenerateArgs {
  std::string format = "idx";
  std::string images;
  std::string labels;
  std::optional<std::size_t> limit;
  std::uint64_t epochs = 10;
  std::string out;
  std::uint64_t seed = 0;
  std::string mode = "channel-wise";
  std::optional<int> block_size;
  std::optional<double> dp_sigma;
};

int run_generate(const GenerateArgs& a) {
  if (a.epochs < 1) throw Error(ErrorCode::kInvalidArgument, "--epochs must be >= 1");
  DatasetPaths paths;
  paths.format = a.format;
  paths.train_images = a.images;
  paths.train_labels = a.labels;
  paths.train_limit = a.limit;
  if (paths.format != "idx" && paths.format != "cifar") {
    throw Error(ErrorCode::kInvalidArgument, "--format must be 'idx' or 'cifar'");
  }
  if (paths.format == "idx" && paths.train_labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "idx input needs --labels");
  }
  LabeledDataset ds = paths.format == "idx"
                          ? load_idx(paths.train_images, paths.train_labels)
                          : load_cifar_bin(std::vector<fs::path>{paths.train_images});
  if (a.limit && *a.limit < ds.size()) {
    std::vector<std::size_t> idx(*a.limit);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    ds = ds.subset(idx);
  }
  if (ds.empty()) throw Error(ErrorCode::kInvalidArgument, "input dataset is empty");
  ds = pad_to_region_multiple(ds);
  const ShuffleConfig cfg = make_shuffle_config(a.seed, 0, a.mode, a.block_size, a.dp_sigma);
  cfg.validate(region_size(ds.height(), ds.width()));

  const DatasetManifest manifest =
      generate_epoch_variants(ds, cfg, a.epochs, a.out, fs::path(a.images).filename().string());
  json j;
  j["manifest"] = (fs::path(a.out) / "manifest.json").string();
  j["count"] = manifest.count;
  j["epochs"] = manifest.epochs;
  j["height"] = manifest.height;
  j["width"] = manifest.width;
  j["channels"] = manifest.channels;
  j["mode"] = manifest.mode;
  print_json(j);
  return kExitOk;
}

// ---- simulate -----------------------------------------------------------

struct CohortIndices {
  std::vector<std::size_t> members;     // into the (limited) training split
  std::vector<std::size_t> nonmembers;  // into the (limited) test split
};

CohortIndices cohorts_for(const ExperimentConfig& c, const LoadedData& data) {
  CohortIndices out;
  if (c.member_count) {
    MiaCohorts drawn = sample_cohorts(data.train.size(), data.test.size(), *c.member_count, c.seed);
    out.members = std::move(drawn.members);
    out.nonmembers = std::move(drawn.nonmembers);
  } else {
    out.members.resize(data.train.size());
    std::iota(out.members.begin(), out.members.end(), std::size_t{0});
    out.nonmembers.resize(data.test.size());
    std::iota(out.nonmembers.begin(), out.nonmembers.end(), std::size_t{0});
  }
  return out;
}

int run_simulate(const ExperimentConfig& c, const std::string& out_dir) {
  c.validate();
  const TrainConfig train_cfg = c.train_config();
  const LoadedData data = load_datasets(c.data);
  const CohortIndices cohorts = cohorts_for(c, data);
  const LabeledDataset train = data.train.subset(cohorts.members);
  const ClientPartition partition = partition_clients(train.labels, c.clients, c.alpha, c.seed);

  EpochVariants variants;
  if (train_cfg.protection.kind == ProtectionKind::kCsvar) {
    if (!c.variants.empty()) {
      variants = load_all_variants(c.variants);
    } else {
      const ShuffleConfig shuffle_cfg = shuffle_config_for(train_cfg.protection, c.seed);
      shuffle_cfg.validate(region_size(train.height(), train.width()));
      variants = generate_variants(train.images, shuffle_cfg, c.variant_epochs);
    }
  }

  const FederatedResult result = run_federated(
      train, data.test, partition, train_cfg, variants.empty() ? nullptr : &variants,
      [](const RoundReport& r, const ModelParams&) {
        std::fprintf(stderr, "round %d accuracy %.4f loss %.4f\n", r.round, r.accuracy,
                     r.mean_loss);
      });

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "config.json", c.to_json().dump(2) + "\n");
  write_file(dir / "rounds.csv", reports_to_csv(result.reports));
  write_file(dir / "summary.json", reports_to_json(result));
  save_model(result.final_params, dir / "model.bin");
  json members;
  members["train_indices"] = cohorts.members;
  members["nonmember_indices"] = cohorts.nonmembers;
  write_file(dir / "members.json", members.dump() + "\n");

  json j;
  j["protection"] = c.protection;
  j["rounds"] = c.rounds;
  j["initial_accuracy"] = result.initial_accuracy;
  j["final_accuracy"] =
      result.reports.empty() ? result.initial_accuracy : result.reports.back().accuracy;
  print_json(j);
  return kExitOk;
}

// ---- attack-mia ---------------------------------------------------------

struct AttackArgs {
  std::string run;
  std::string model;
  std::string config;
  std::optional<std::size_t> member_count;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::vector<std::size_t> index_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::kMalformedHeader, std::string("members file lacks '") + key + "'");
  }
  return j[key].get<std::vector<std::size_t>>();
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": " + e.what());
  }
}

int run_attack(const AttackArgs& a) {
  fs::path model_path;
  ExperimentConfig c;
  CohortIndices cohorts;
  std::optional<LoadedData> data;
  if (!a.run.empty()) {
    const fs::path run(a.run);
    model_path = run / "model.bin";
    c = ExperimentConfig::from_json(parse_json_file(run / "config.json"));
    const json members = parse_json_file(run / "members.json");
    cohorts.members = index_list(members, "train_indices");
    cohorts.nonmembers = index_list(members, "nonmember_indices");
    data = load_datasets(c.data);
  } else {
    if (a.model.empty() || a.config.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "give --run DIR, or --model with --config");
    }
    model_path = a.model;
    c = ExperimentConfig::from_json(parse_json_file(a.config));
    if (a.member_count) c.member_count = a.member_count;
    if (a.seed) c.seed = *a.seed;
    data = load_datasets(c.data);
    cohorts = cohorts_for(c, *data);
  }
  const ModelParams params = load_model(model_path);
  const auto check = [](const std::vector<std::size_t>& idx, std::size_t n, const char* what) {
    if (idx.empty()) throw Error(ErrorCode::kEmptyCohort, std::string(what) + " cohort is empty");
    for (std::size_t i : idx) {
      if (i >= n) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " index out of range");
    }
  };
  check(cohorts.members, data->train.size(), "member");
  check(cohorts.nonmembers, data->test.size(), "nonmember");
  const LabeledDataset members = data->train.subset(cohorts.members);
  const LabeledDataset nonmembers = data->test.subset(cohorts.nonmembers);
  const Matrix member_x = to_features(members.images);
  if (member_x.cols() != params.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "model input size does not match the dataset");
  }
  const std::vector<double> member_losses = per_sample_losses(params, member_x, members.labels);
  const std::vector<double> nonmember_losses =
      per_sample_losses(params, to_features(nonmembers.images), nonmembers.labels);
  const MiaReport report = mia_threshold_attack(member_losses, nonmember_losses);

  const fs::path out = !a.out.empty() ? fs::path(a.out) : fs::path(a.run);
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required without --run");
  fs::create_directories(out);
  write_file(out / "roc.csv", report.roc_csv());
  write_file(out / "mia.json", report.summary_json());
  std::cout << report.summary_json();
  return kExitOk;
}

// ---- metrics ------------------------------------------------------------

int run_metrics(const std::string& original, const std::string& transformed,
                const std::string& out) {
  // `shuffle` pads its output, so both sides are compared in padded form.
  const ObfuscationReport report = obfuscation_report(pad_for_regions(read_image(original)),
                                                      pad_for_regions(read_image(transformed)));
  const std::string text = report.to_json();
  if (!out.empty()) write_file(out, text);
  std::cout << text;
  return kExitOk;
}

// Copies every option of `sub` that was given on the command line into `j`,
// keyed by the option's long name with dashes turned into underscores.
void apply_overrides(const CLI::App& sub, json& j) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    if (opt->get_lnames().empty()) continue;
    std::string key = opt->get_lnames().front();
    if (key == "config" || key == "out" || key == "help") continue;
    for (char& ch : key) {
      if (ch == '-') ch = '_';
    }
    const std::string value = opt->as<std::string>();
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      parsed = value;
    }
    j[key] = parsed.is_structured() ? json(value) : parsed;
  }
}

}  // namespace

int main_impl(int argc, char** argv) {
  CLI::App app{"csvar: variance-aware image shuffling toolkit"};
  app.require_subcommand(1);

  VarianceMapArgs vm;
  auto* vm_cmd = app.add_subcommand("variance-map", "Write a per-region variance heatmap");
  vm_cmd->add_option("image", vm.image, "Input PGM/PPM image")->required();
  vm_cmd->add_option("--out", vm.out, "Output heatmap (PGM)")->required();
  vm_cmd->add_option("--stats", vm.stats, "Also write the statistics JSON here");

  ShuffleArgs sh;
  auto* sh_cmd = app.add_subcommand("shuffle", "Shuffle (or noise) one image");
  sh_cmd->add_option("image", sh.image, "Input PGM/PPM image")->required();
  sh_cmd->add_option("--out", sh.out, "Output image")->required();
  sh_cmd->add_option("--seed", sh.seed, "Master seed");
  sh_cmd->add_option("--epoch", sh.epoch, "Epoch index");
  sh_cmd->add_option("--image-id", sh.image_id, "Image index used in seed derivation");
  sh_cmd->add_option("--mode", sh.mode, "spatial-only | channel-wise");
  sh_cmd->add_option("--block-size", sh.block_size, "Fixed block size (power of two dividing S)");
  sh_cmd->add_option("--dp-sigma", sh.dp_sigma, "Apply Gaussian noise instead of shuffling");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write per-epoch shuffled dataset variants");
  gen_cmd->add_option("--format", gen.format, "idx | cifar");
  gen_cmd->add_option("--images", gen.images, "IDX images or CIFAR batch")->required();
  gen_cmd->add_option("--labels", gen.labels, "IDX labels");
  gen_cmd->add_option("--limit", gen.limit, "Use only the first N samples");
  gen_cmd->add_option("--epochs", gen.epochs, "Number of epoch variants");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--mode", gen.mode, "spatial-only | channel-wise");
  gen_cmd->add_option("--block-size", gen.block_size, "Fixed block size");
  gen_cmd->add_option("--dp-sigma", gen.dp_sigma, "Write noised variants instead");

  std::string sim_config;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a federated training simulation");
  sim_cmd->add_option("--config", sim_config, "Experiment config (JSON)");
  sim_cmd->add_option("--out", sim_out, "Run output directory")->required();
  std::vector<std::string> override_values(experiment_config_keys().size());
  for (std::size_t i = 0; i < override_values.size(); ++i) {
    const std::string& key = experiment_config_keys()[i];
    std::string flag = "--" + key;
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    sim_cmd->add_option(flag, override_values[i], "Override config field '" + key + "'");
  }

  AttackArgs atk;
  auto* atk_cmd = app.add_subcommand("attack-mia", "Loss-threshold membership inference");
  atk_cmd->add_option("--run", atk.run, "Directory written by `simulate`");
  atk_cmd->add_option("--model", atk.model, "Model file (.bin with .json header)");
  atk_cmd->add_option("--config", atk.config, "Experiment config naming the datasets");
  atk_cmd->add_option("--member-count", atk.member_count, "Cohort size");
  atk_cmd->add_option("--seed", atk.seed, "Cohort sampling seed");
  atk_cmd->add_option("--out", atk.out, "Output directory (default: --run)");
  atk_cmd->get_option("--run")->excludes("--model")->excludes("--config");

  std::string met_original;
  std::string met_transformed;
  std::string met_out;
  auto* met_cmd = app.add_subcommand("metrics", "Obfuscation metrics for an image pair");
  met_cmd->add_option("original", met_original, "Original image")->required();
  met_cmd->add_option("transformed", met_transformed, "Transformed image")->required();
  met_cmd->add_option("--out", met_out, "Also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*vm_cmd) return run_variance_map(vm);
  if (*sh_cmd) return run_shuffle(sh);
  if (*gen_cmd) return run_generate(gen);
  if (*sim_cmd) {
    json j = json::object();
    if (!sim_config.empty()) j = parse_json_file(sim_config);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
    apply_overrides(*sim_cmd, j);
    return run_simulate(ExperimentConfig::from_json(j), sim_out);
  }
  if (*atk_cmd) return run_attack(atk);
  if (*met_cmd) return run_metrics(met_original, met_transformed, met_out);
  return kExitUsage;
}

}  // namespace csvar::cli

int main(int argc, char** argv) {
  try {
    return csvar::cli::main_impl(argc, argv);
  } catch (const csvar::Error& e) {
    std::fprintf(stderr, "csvar: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "csvar: %s\n", e.what());
    return 1;
  }
}
