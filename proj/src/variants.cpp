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
#include "csvar/variants.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "csvar/error.hpp"

namespace csvar {

namespace {

using nlohmann::json;

std::string epoch_file_name(std::uint64_t epoch) {
  char name[32];
  std::snprintf(name, sizeof(name), "epoch_%04llu.bin",
                static_cast<unsigned long long>(epoch));
  return name;
}

std::string manifest_mode(const ShuffleConfig& config) {
  return config.dp_sigma ? "dp" : std::string(to_string(config.mode));
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::string DatasetManifest::to_json() const {
  json j;
  j["source"] = source;
  j["shape"] = {count, height, width, channels};
  j["num_classes"] = num_classes;
  j["epochs"] = epochs;
  j["master_seed"] = master_seed;
  j["mode"] = mode;
  j["block_size"] = block_size ? json(*block_size) : json(nullptr);
  j["dp_sigma"] = dp_sigma ? json(*dp_sigma) : json(nullptr);
  j["layout"] = "planar-u8";
  j["files"] = json::array();
  for (const VariantFile& f : files) {
    j["files"].push_back({{"epoch", f.epoch}, {"path", f.path}, {"sha256", f.sha256}});
  }
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    DatasetManifest m;
    m.source = j.at("source").get<std::string>();
    const auto& shape = j.at("shape");
    if (!shape.is_array() || shape.size() != 4) {
      throw Error(ErrorCode::kMalformedHeader, "manifest shape must be [count, H, W, C]");
    }
    m.count = shape[0].get<std::size_t>();
    m.height = shape[1].get<int>();
    m.width = shape[2].get<int>();
    m.channels = shape[3].get<int>();
    m.num_classes = j.at("num_classes").get<int>();
    m.epochs = j.at("epochs").get<std::uint64_t>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.mode = j.at("mode").get<std::string>();
    if (j.contains("block_size") && !j["block_size"].is_null()) {
      m.block_size = j["block_size"].get<int>();
    }
    if (j.contains("dp_sigma") && !j["dp_sigma"].is_null()) {
      m.dp_sigma = j["dp_sigma"].get<double>();
    }
    for (const auto& f : j.at("files")) {
      m.files.push_back(VariantFile{f.at("epoch").get<std::uint64_t>(),
                                    f.at("path").get<std::string>(),
                                    f.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, std::string("manifest: ") + e.what());
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

EpochVariants generate_variants(std::span<const ImageTensor> images,
                                const ShuffleConfig& config, std::uint64_t epochs) {
  EpochVariants variants(epochs, std::vector<ImageTensor>(images.size()));
  parallel_for(epochs * images.size(), [&](std::size_t k) {
    const std::uint64_t e = k / images.size();
    const std::size_t i = k % images.size();
    ShuffleConfig cfg = config;
    cfg.epoch = e;
    variants[e][i] = obfuscate(images[i], cfg, i);
  });
  return variants;
}

std::string encode_variant_blob(std::span<const ImageTensor> images) {
  std::string blob;
  if (!images.empty()) blob.reserve(images.size() * images.front().size());
  for (const ImageTensor& img : images) {
    for (int c = 0; c < img.channels(); ++c) {
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          blob.push_back(static_cast<char>(img.at(y, x, c)));
        }
      }
    }
  }
  return blob;
}

std::vector<ImageTensor> decode_variant_blob(std::string_view bytes, std::size_t count,
                                             int height, int width, int channels) {
  const std::size_t plane = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  const std::size_t per_image = plane * static_cast<std::size_t>(channels);
  if (bytes.size() != count * per_image) {
    throw Error(ErrorCode::kTruncatedFile, "variant blob has " + std::to_string(bytes.size()) +
                                               " bytes, expected " +
                                               std::to_string(count * per_image));
  }
  std::vector<ImageTensor> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ImageTensor img(height, width, channels);
    const std::string_view src = bytes.substr(i * per_image, per_image);
    for (int c = 0; c < channels; ++c) {
      for (std::size_t p = 0; p < plane; ++p) {
        img.data()[p * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)] =
            static_cast<std::uint8_t>(src[static_cast<std::size_t>(c) * plane + p]);
      }
    }
    images.push_back(std::move(img));
  }
  return images;
}

DatasetManifest generate_epoch_variants(const LabeledDataset& dataset,
                                        const ShuffleConfig& config, std::uint64_t epochs,
                                        const std::filesystem::path& out_dir,
                                        std::string source) {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset is empty");
  dataset.validate();
  config.validate(region_size(dataset.height(), dataset.width()));

  DatasetManifest manifest;
  manifest.source = std::move(source);
  manifest.count = dataset.size();
  manifest.height = dataset.height();
  manifest.width = dataset.width();
  manifest.channels = dataset.channels();
  manifest.num_classes = dataset.num_classes;
  manifest.epochs = epochs;
  manifest.master_seed = config.master_seed;
  manifest.mode = manifest_mode(config);
  manifest.block_size = config.block_size_override;
  manifest.dp_sigma = config.dp_sigma;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());

  for (std::uint64_t e = 0; e < epochs; ++e) {
    std::vector<ImageTensor> shuffled(dataset.size());
    parallel_for(dataset.size(), [&](std::size_t i) {
      ShuffleConfig cfg = config;
      cfg.epoch = e;
      shuffled[i] = obfuscate(dataset.images[i], cfg, i);
    });
    const std::string blob = encode_variant_blob(shuffled);
    const std::string name = epoch_file_name(e);
    write_file(out_dir / name, blob);
    manifest.files.push_back(VariantFile{e, name, sha256_hex(blob)});
  }
  write_file(out_dir / "manifest.json", manifest.to_json());
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& manifest_path) {
  DatasetManifest manifest = DatasetManifest::from_json(read_file(manifest_path));
  const auto dir = manifest_path.parent_path();
  for (const VariantFile& f : manifest.files) {
    if (!std::filesystem::exists(dir / f.path)) {
      throw Error(ErrorCode::kMissingVariant, "variant file " + f.path + " is missing");
    }
    if (sha256_hex(read_file(dir / f.path)) != f.sha256) {
      throw Error(ErrorCode::kChecksumMismatch, "checksum mismatch for " + f.path);
    }
  }
  return manifest;
}

std::vector<ImageTensor> load_epoch_variant(const DatasetManifest& manifest,
                                            const std::filesystem::path& manifest_dir,
                                            std::uint64_t epoch) {
  const auto it = std::find_if(manifest.files.begin(), manifest.files.end(),
                               [&](const VariantFile& f) { return f.epoch == epoch; });
  if (it == manifest.files.end()) {
    throw Error(ErrorCode::kMissingVariant,
                "manifest has no variant for epoch " + std::to_string(epoch));
  }
  const auto path = manifest_dir / it->path;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingVariant, "variant file " + it->path + " is missing");
  }
  const std::string blob = read_file(path);
  if (sha256_hex(blob) != it->sha256) {
    throw Error(ErrorCode::kChecksumMismatch, "checksum mismatch for " + it->path);
  }
  return decode_variant_blob(blob, manifest.count, manifest.height, manifest.width,
                             manifest.channels);
}

EpochVariants load_all_variants(const std::filesystem::path& manifest_path) {
  const DatasetManifest manifest = DatasetManifest::from_json(read_file(manifest_path));
  EpochVariants variants;
  for (std::uint64_t e = 0; e < manifest.epochs; ++e) {
    variants.push_back(load_epoch_variant(manifest, manifest_path.parent_path(), e));
  }
  return variants;
}

}  // namespace csvar
