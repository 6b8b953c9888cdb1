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
// Python bindings. Images are uint8 numpy arrays shaped (H, W) or (H, W, C);
// image stacks are (N, H, W) or (N, H, W, C).
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "csvar/csvar.hpp"

namespace py = pybind11;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

csvar::ImageTensor to_image(const U8Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) {
    throw py::value_error("image must have shape (H, W) or (H, W, C)");
  }
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
  return csvar::ImageTensor(h, w, c, std::move(data));
}

U8Array from_image(const csvar::ImageTensor& img, bool squeeze) {
  std::vector<py::ssize_t> shape{img.height(), img.width()};
  if (!squeeze || img.channels() != 1) shape.push_back(img.channels());
  U8Array out(shape);
  std::memcpy(out.mutable_data(), img.data().data(), img.size());
  return out;
}

std::vector<csvar::ImageTensor> to_images(const U8Array& a) {
  if (a.ndim() != 3 && a.ndim() != 4) {
    throw py::value_error("image stack must have shape (N, H, W) or (N, H, W, C)");
  }
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto h = static_cast<int>(a.shape(1));
  const auto w = static_cast<int>(a.shape(2));
  const int c = a.ndim() == 4 ? static_cast<int>(a.shape(3)) : 1;
  const std::size_t stride = static_cast<std::size_t>(h) * w * c;
  std::vector<csvar::ImageTensor> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = a.data() + i * stride;
    out.emplace_back(h, w, c, std::vector<std::uint8_t>(p, p + stride));
  }
  return out;
}

U8Array from_images(const std::vector<csvar::ImageTensor>& images, std::vector<py::ssize_t> lead) {
  const csvar::ImageTensor& first = images.front();
  lead.insert(lead.end(), {first.height(), first.width(), first.channels()});
  U8Array out(lead);
  std::uint8_t* dst = out.mutable_data();
  for (const auto& img : images) {
    std::memcpy(dst, img.data().data(), img.size());
    dst += img.size();
  }
  return out;
}

csvar::LabeledDataset to_dataset(const U8Array& images, const py::array_t<int>& labels) {
  csvar::LabeledDataset ds;
  ds.images = to_images(images);
  ds.labels.assign(labels.data(), labels.data() + labels.size());
  if (ds.labels.size() != ds.images.size()) {
    throw py::value_error("one label per image required");
  }
  const int top = ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end());
  ds.num_classes = top + 1;
  return ds;
}

py::tuple dataset_to_arrays(const csvar::LabeledDataset& ds) {
  if (ds.empty()) throw py::value_error("dataset is empty");
  py::array_t<int> labels(static_cast<py::ssize_t>(ds.labels.size()));
  std::copy(ds.labels.begin(), ds.labels.end(), labels.mutable_data());
  return py::make_tuple(from_images(ds.images, {static_cast<py::ssize_t>(ds.size())}), labels);
}

csvar::ShuffleConfig shuffle_config(std::uint64_t seed, std::uint64_t epoch, const std::string& mode,
                                    std::optional<int> block_size,
                                    std::optional<double> dp_sigma) {
  csvar::ShuffleConfig cfg;
  cfg.master_seed = seed;
  cfg.epoch = epoch;
  cfg.mode = csvar::parse_shuffle_mode(mode);
  cfg.block_size_override = block_size;
  cfg.dp_sigma = dp_sigma;
  return cfg;
}

py::dict variance_info(const U8Array& image) {
  const csvar::ImageTensor img = to_image(image);
  const int s = csvar::region_size(img.height(), img.width());
  const csvar::RegionGrid grid = csvar::partition_regions(img, s);
  const csvar::VarianceMap vmap = csvar::variance_map(img, grid);
  const csvar::PartitionPlan plan = csvar::plan_partition(vmap, s);
  py::array_t<double> values({vmap.rows, vmap.cols});
  std::copy(vmap.values.begin(), vmap.values.end(), values.mutable_data());
  py::array_t<int> blocks({plan.rows, plan.cols});
  std::copy(plan.block_sizes.begin(), plan.block_sizes.end(), blocks.mutable_data());
  py::dict d;
  d["region_size"] = s;
  d["values"] = values;
  d["median"] = vmap.median;
  d["block_sizes"] = blocks;
  return d;
}

py::dict run_federated(const U8Array& train_images, const py::array_t<int>& train_labels,
                       const U8Array& test_images, const py::array_t<int>& test_labels,
                       const std::string& protection, int rounds, int clients,
                       std::optional<double> alpha, int local_epochs, int batch_size,
                       double learning_rate, int hidden, double dp_sigma, const std::string& mode,
                       std::optional<int> block_size, std::uint64_t variant_epochs,
                       std::uint64_t seed) {
  csvar::LabeledDataset train = to_dataset(train_images, train_labels);
  csvar::LabeledDataset test = to_dataset(test_images, test_labels);
  train.num_classes = test.num_classes = std::max(train.num_classes, test.num_classes);

  csvar::TrainConfig cfg;
  cfg.rounds = rounds;
  cfg.clients = clients;
  cfg.local_epochs = local_epochs;
  cfg.batch_size = batch_size;
  cfg.learning_rate = learning_rate;
  cfg.hidden = hidden;
  cfg.master_seed = seed;
  cfg.protection.kind = csvar::parse_protection(protection);
  cfg.protection.dp_sigma = dp_sigma;
  cfg.protection.mode = csvar::parse_shuffle_mode(mode);
  cfg.protection.block_size = block_size;
  cfg.validate();

  csvar::FederatedResult result;
  {
    py::gil_scoped_release release;
    const csvar::ClientPartition partition =
        csvar::partition_clients(train.labels, clients, alpha, seed);
    csvar::EpochVariants variants;
    if (cfg.protection.kind == csvar::ProtectionKind::kCsvar) {
      variants = csvar::generate_variants(
          train.images, csvar::shuffle_config_for(cfg.protection, seed), variant_epochs);
    }
    result = csvar::run_federated(train, test, partition, cfg,
                                  variants.empty() ? nullptr : &variants);
  }

  std::vector<double> accuracy;
  std::vector<double> loss;
  for (const auto& r : result.reports) {
    accuracy.push_back(r.accuracy);
    loss.push_back(r.mean_loss);
  }
  const csvar::Matrix train_x = csvar::to_features(train.images);
  const csvar::Matrix test_x = csvar::to_features(test.images);
  py::dict d;
  d["initial_accuracy"] = result.initial_accuracy;
  d["accuracy"] = accuracy;
  d["mean_loss"] = loss;
  d["train_losses"] = csvar::per_sample_losses(result.final_params, train_x, train.labels);
  d["test_losses"] = csvar::per_sample_losses(result.final_params, test_x, test.labels);
  d["parameters"] = result.final_params.flatten();
  return d;
}

}  // namespace

PYBIND11_MODULE(_csvar, m) {
  m.doc() = "Variance-aware image shuffling, federated simulation and attack metrics.";

  py::register_exception<csvar::Error>(m, "CsvarError", PyExc_ValueError);

  m.def("region_size", &csvar::region_size, py::arg("height"), py::arg("width"),
        "Smallest power of two S >= 2 with S*S >= max(height, width).");

  m.def(
      "pad_to_region_multiple",
      [](const U8Array& image) {
        const csvar::ImageTensor img = to_image(image);
        const int s = csvar::region_size(img.height(), img.width());
        return from_image(csvar::reflect_pad_to_multiple(img, s), image.ndim() == 2);
      },
      py::arg("image"), "Reflect-pad an image so both sides are multiples of its region size.");

  m.def("variance_map", &variance_info, py::arg("image"),
        "Per-region variances, their median and the block size chosen for each region.");

  m.def(
      "shuffle",
      [](const U8Array& image, std::uint64_t seed, std::uint64_t epoch, std::uint64_t image_id,
         const std::string& mode, std::optional<int> block_size) {
        const csvar::ImageTensor img = to_image(image);
        const csvar::ShuffleConfig cfg = shuffle_config(seed, epoch, mode, block_size, std::nullopt);
        return from_image(csvar::csvar_shuffle(img, cfg, image_id), image.ndim() == 2);
      },
      py::arg("image"), py::arg("seed") = 0, py::arg("epoch") = 0, py::arg("image_id") = 0,
      py::arg("mode") = "channel-wise", py::arg("block_size") = py::none(),
      "Block-shuffle every region of an image whose sides are multiples of its region size.");

  m.def(
      "gaussian_obfuscate",
      [](const U8Array& image, double sigma, std::uint64_t seed) {
        return from_image(csvar::gaussian_obfuscate(to_image(image), sigma, seed),
                          image.ndim() == 2);
      },
      py::arg("image"), py::arg("sigma"), py::arg("seed") = 0,
      "Add rounded, clamped Gaussian noise to every sample.");

  m.def(
      "generate_variants",
      [](const U8Array& images, std::uint64_t seed, std::uint64_t epochs, const std::string& mode,
         std::optional<int> block_size, std::optional<double> dp_sigma) {
        const std::vector<csvar::ImageTensor> imgs = to_images(images);
        if (imgs.empty()) throw py::value_error("image stack is empty");
        const csvar::ShuffleConfig cfg = shuffle_config(seed, 0, mode, block_size, dp_sigma);
        csvar::EpochVariants variants;
        {
          py::gil_scoped_release release;
          variants = csvar::generate_variants(imgs, cfg, epochs);
        }
        std::vector<csvar::ImageTensor> flat;
        flat.reserve(imgs.size() * variants.size());
        for (auto& epoch : variants) {
          for (auto& img : epoch) flat.push_back(std::move(img));
        }
        return from_images(flat, {static_cast<py::ssize_t>(epochs),
                                  static_cast<py::ssize_t>(imgs.size())});
      },
      py::arg("images"), py::arg("seed") = 0, py::arg("epochs") = 10,
      py::arg("mode") = "channel-wise", py::arg("block_size") = py::none(),
      py::arg("dp_sigma") = py::none(),
      "Shuffled copies of an (N, H, W[, C]) stack for epochs 0..epochs-1, shaped (E, N, H, W, C).");

  m.def("derive_region_seed", &csvar::derive_region_seed, py::arg("master_seed"),
        py::arg("image_id"), py::arg("epoch"), py::arg("region_row"), py::arg("region_col"),
        py::arg("channel"));
  m.def("derive_noise_seed", &csvar::derive_noise_seed, py::arg("master_seed"),
        py::arg("image_id"), py::arg("epoch"));

  m.def(
      "ncc", [](const U8Array& a, const U8Array& b) { return csvar::ncc(to_image(a), to_image(b)); },
      py::arg("original"), py::arg("other"));
  m.def(
      "inter_channel_correlation",
      [](const U8Array& a) { return csvar::inter_channel_correlation(to_image(a)); },
      py::arg("image"));
  m.def(
      "histogram_l1",
      [](const U8Array& a, const U8Array& b) {
        return csvar::per_channel_histogram_l1(to_image(a), to_image(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "mia_threshold_attack",
      [](const std::vector<double>& member_losses, const std::vector<double>& nonmember_losses) {
        const csvar::MiaReport r = csvar::mia_threshold_attack(member_losses, nonmember_losses);
        std::vector<double> fpr;
        std::vector<double> tpr;
        for (const auto& p : r.roc_points) {
          fpr.push_back(p.fpr);
          tpr.push_back(p.tpr);
        }
        py::dict d;
        d["auc"] = r.auc;
        d["rank_auc"] = r.rank_auc;
        d["fpr"] = fpr;
        d["tpr"] = tpr;
        return d;
      },
      py::arg("member_losses"), py::arg("nonmember_losses"),
      "Loss-threshold membership inference: ROC curve and AUC.");

  m.def(
      "partition_clients",
      [](const std::vector<int>& labels, int num_clients, std::optional<double> alpha,
         std::uint64_t seed) {
        return csvar::partition_clients(labels, num_clients, alpha, seed).assignments;
      },
      py::arg("labels"), py::arg("num_clients"), py::arg("alpha") = py::none(),
      py::arg("seed") = 0, "IID (alpha=None) or Dirichlet(alpha) split of sample indices.");

  m.def(
      "load_idx",
      [](const std::filesystem::path& images, const std::filesystem::path& labels) {
        return dataset_to_arrays(csvar::load_idx(images, labels));
      },
      py::arg("images"), py::arg("labels"), "Read IDX image/label files as (images, labels).");
  m.def(
      "load_cifar",
      [](const std::vector<std::filesystem::path>& paths) {
        return dataset_to_arrays(csvar::load_cifar_bin(paths));
      },
      py::arg("paths"), "Read CIFAR-10 binary batches as (images, labels).");

  m.def("run_federated", &run_federated, py::arg("train_images"), py::arg("train_labels"),
        py::arg("test_images"), py::arg("test_labels"), py::arg("protection") = "none",
        py::arg("rounds") = 20, py::arg("clients") = 4, py::arg("alpha") = py::none(),
        py::arg("local_epochs") = 1, py::arg("batch_size") = 32, py::arg("learning_rate") = 0.1,
        py::arg("hidden") = 128, py::arg("dp_sigma") = 50.0, py::arg("mode") = "channel-wise",
        py::arg("block_size") = py::none(), py::arg("variant_epochs") = 10, py::arg("seed") = 0,
        "Federated averaging of an MLP; returns per-round accuracy and final per-sample losses.");
}
