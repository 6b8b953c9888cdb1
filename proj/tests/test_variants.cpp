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
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "csvar/dataset.hpp"
#include "csvar/variants.hpp"
#include "test_support.hpp"

namespace csvar {
namespace {

namespace fs = std::filesystem;

LabeledDataset small_dataset(int n, int channels, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  LabeledDataset ds;
  ds.num_classes = 10;
  for (int i = 0; i < n; ++i) {
    ds.images.push_back(testing::random_image(gen, 32, 32, channels));
    ds.labels.push_back(i % 10);
  }
  return ds;
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(VariantBlob, PlanarRoundTrip) {
  ImageTensor img(1, 2, 3, {1, 2, 3, 4, 5, 6});
  const std::vector<ImageTensor> images{img};
  const std::string blob = encode_variant_blob(images);
  EXPECT_EQ(blob, std::string("\x01\x04\x02\x05\x03\x06", 6));
  EXPECT_EQ(decode_variant_blob(blob, 1, 1, 2, 3), images);
  EXPECT_CSVAR_ERROR(decode_variant_blob(blob.substr(1), 1, 1, 2, 3), kTruncatedFile);
}

TEST(GenerateVariants, LayoutAndCounts) {
  const LabeledDataset ds = small_dataset(10, 3, 41);
  const fs::path dir = testing::scratch_dir("variants_layout");
  ShuffleConfig cfg;
  cfg.master_seed = 7;
  const DatasetManifest m = generate_epoch_variants(ds, cfg, 3, dir, "unit");
  EXPECT_EQ(m.files.size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  std::size_t blobs = 0;
  for (const auto& entry : fs::directory_iterator(dir)) blobs += entry.path().extension() == ".bin";
  EXPECT_EQ(blobs, 3u);
  for (const VariantFile& f : m.files) EXPECT_EQ(fs::file_size(dir / f.path), 10u * 32 * 32 * 3);

  const auto json = nlohmann::json::parse(read_file(dir / "manifest.json"));
  for (const char* key : {"source", "shape", "num_classes", "epochs", "master_seed", "mode", "files"}) {
    EXPECT_TRUE(json.contains(key)) << key;
  }
  EXPECT_EQ(json["shape"], nlohmann::json::array({10, 32, 32, 3}));
  EXPECT_EQ(json["mode"], "channel-wise");

  const EpochVariants loaded = load_all_variants(dir / "manifest.json");
  const EpochVariants direct = generate_variants(ds.images, cfg, 3);
  ASSERT_EQ(loaded, direct);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ShuffleConfig e2 = cfg;
    e2.epoch = 2;
    EXPECT_EQ(loaded[2][i], csvar_shuffle(ds.images[i], e2, i));
  }
}

TEST(GenerateVariants, ReproducibleChecksums) {
  const LabeledDataset ds = small_dataset(12, 1, 42);
  ShuffleConfig cfg;
  cfg.master_seed = 99;
  cfg.mode = ShuffleMode::kSpatialOnly;
  const DatasetManifest a = generate_epoch_variants(ds, cfg, 2, testing::scratch_dir("rep_a"), "s");
  const DatasetManifest b = generate_epoch_variants(ds, cfg, 2, testing::scratch_dir("rep_b"), "s");
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) EXPECT_EQ(a.files[i].sha256, b.files[i].sha256);
  EXPECT_EQ(a.to_json(), b.to_json());

  cfg.master_seed = 100;
  const DatasetManifest c = generate_epoch_variants(ds, cfg, 2, testing::scratch_dir("rep_c"), "s");
  for (std::size_t i = 0; i < a.files.size(); ++i) EXPECT_NE(a.files[i].sha256, c.files[i].sha256);
  EXPECT_NE(a.files[0].sha256, a.files[1].sha256);
}

TEST(GenerateVariants, DpModeRecordsSigma) {
  const LabeledDataset ds = small_dataset(4, 1, 43);
  ShuffleConfig cfg;
  cfg.dp_sigma = 50.0;
  const fs::path dir = testing::scratch_dir("variants_dp");
  const DatasetManifest m = generate_epoch_variants(ds, cfg, 1, dir, "dp");
  EXPECT_EQ(m.mode, "dp");
  const DatasetManifest back = load_manifest(dir / "manifest.json");
  EXPECT_EQ(back.dp_sigma, 50.0);
  EXPECT_EQ(back.to_json(), m.to_json());
}

TEST(GenerateVariants, DetectsTamperingAndMissingFiles) {
  const LabeledDataset ds = small_dataset(3, 3, 44);
  const fs::path dir = testing::scratch_dir("variants_tamper");
  const DatasetManifest m = generate_epoch_variants(ds, ShuffleConfig{}, 2, dir, "t");
  {
    std::fstream f(dir / m.files[1].path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(5);
    f.put('\x7f');
  }
  EXPECT_CSVAR_ERROR(load_manifest(dir / "manifest.json"), kChecksumMismatch);
  EXPECT_CSVAR_ERROR(load_epoch_variant(m, dir, 1), kChecksumMismatch);
  EXPECT_NO_THROW(load_epoch_variant(m, dir, 0));
  EXPECT_CSVAR_ERROR(load_epoch_variant(m, dir, 5), kMissingVariant);
  fs::remove(dir / m.files[0].path);
  EXPECT_CSVAR_ERROR(load_epoch_variant(m, dir, 0), kMissingVariant);
}

TEST(GenerateVariants, RejectsBadInputsBeforeWriting) {
  const LabeledDataset ds = small_dataset(2, 1, 45);
  const fs::path dir = std::filesystem::temp_directory_path() / "csvar_test_variants_bad";
  fs::remove_all(dir);
  ShuffleConfig cfg;
  cfg.block_size_override = 3;
  EXPECT_CSVAR_ERROR(generate_epoch_variants(ds, cfg, 1, dir, "bad"), kInvalidOverride);
  EXPECT_CSVAR_ERROR(generate_epoch_variants(ds, ShuffleConfig{}, 0, dir, "bad"), kInvalidArgument);
  EXPECT_CSVAR_ERROR(generate_epoch_variants(LabeledDataset{}, ShuffleConfig{}, 1, dir, "bad"),
                     kInvalidArgument);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Manifest, RejectsMalformedJson) {
  EXPECT_CSVAR_ERROR(DatasetManifest::from_json("{"), kMalformedHeader);
  EXPECT_CSVAR_ERROR(DatasetManifest::from_json(R"({"shape": [1, 2]})"), kMalformedHeader);
}

}  // namespace
}  // namespace csvar
