#!/usr/bin/env python3
# Copyright 2026 The csvar Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the bundled evaluation datasets (data/datasets.tar.gz).

Two sources, both obtainable through ordinary package registries:

  * MNIST digits: the npm package `mnist` ships 10,000 real MNIST digits as
    JSON (x/255 rounded to 3 decimals, so round(x*255) restores the bytes).
    They are split, stratified by class, into 8,000 training and 2,000 test
    samples and written as standard IDX files.
  * Natural colour images: 32x32x3 crops of the photographs bundled with
    scikit-image and scikit-learn, written as CIFAR-10 binary records
    (label = index of the source photograph).

Usage: tools/fetch_data.py [--npm-dir DIR] [--out data/datasets.tar.gz]
"""

import argparse
import io
import json
import os
import struct
import subprocess
import tarfile
import tempfile

import numpy as np
from PIL import Image

SKIMAGE_PHOTOS = [
    "astronaut.png", "coffee.png", "chelsea.png", "rocket.jpg",
    "motorcycle_left.png", "hubble_deep_field.jpg", "retina.jpg", "ihc.png",
]
SKLEARN_PHOTOS = ["china.jpg", "flower.jpg"]


def npm_mnist_digits(npm_dir):
    if npm_dir is None:
        npm_dir = tempfile.mkdtemp()
        subprocess.run(["npm", "pack", "mnist@1.1.0"], cwd=npm_dir, check=True)
        with tarfile.open(os.path.join(npm_dir, "mnist-1.1.0.tgz")) as tf:
            tf.extractall(npm_dir)
        npm_dir = os.path.join(npm_dir, "package")
    images, labels = [], []
    for digit in range(10):
        with open(os.path.join(npm_dir, "src", "digits", f"{digit}.json")) as f:
            raw = np.asarray(json.load(f)["data"], dtype=np.float64)
        block = np.rint(raw * 255.0).clip(0, 255).astype(np.uint8).reshape(-1, 784)
        images.append(block)
        labels.extend([digit] * len(block))
    return np.concatenate(images), np.asarray(labels, dtype=np.uint8)


def idx_images(images):
    header = struct.pack(">IIII", 0x00000803, len(images), 28, 28)
    return header + images.tobytes()


def idx_labels(labels):
    return struct.pack(">II", 0x00000801, len(labels)) + labels.tobytes()


def natural_crops(count, rng):
    import skimage
    import sklearn.datasets

    sk_dir = os.path.join(os.path.dirname(skimage.__file__), "data")
    sl_dir = os.path.join(os.path.dirname(sklearn.datasets.__file__), "images")
    photos = [os.path.join(sk_dir, p) for p in SKIMAGE_PHOTOS]
    photos += [os.path.join(sl_dir, p) for p in SKLEARN_PHOTOS]
    sources = [Image.open(p).convert("RGB") for p in photos]
    records = bytearray()
    for i in range(count):
        label = i % len(sources)
        src = sources[label]
        side = int(rng.integers(32, min(src.size) // 2 + 1))
        x = int(rng.integers(0, src.size[0] - side + 1))
        y = int(rng.integers(0, src.size[1] - side + 1))
        crop = src.crop((x, y, x + side, y + side)).resize((32, 32), Image.BOX)
        planar = np.asarray(crop, dtype=np.uint8).transpose(2, 0, 1)
        records.append(label)
        records += planar.tobytes()
    return bytes(records)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--npm-dir", default=None,
                        help="already-extracted npm `mnist` package directory")
    parser.add_argument("--out", default="data/datasets.tar.gz")
    parser.add_argument("--natural-count", type=int, default=1000)
    args = parser.parse_args()

    rng = np.random.default_rng(20240611)
    images, labels = npm_mnist_digits(args.npm_dir)
    train_idx, test_idx = [], []
    for digit in range(10):
        idx = np.flatnonzero(labels == digit)
        rng.shuffle(idx)
        cut = len(idx) // 5
        test_idx.extend(idx[:cut])
        train_idx.extend(idx[cut:])
    train_idx = rng.permutation(train_idx)
    test_idx = rng.permutation(test_idx)

    files = {
        "mnist/train-images-idx3-ubyte": idx_images(images[train_idx]),
        "mnist/train-labels-idx1-ubyte": idx_labels(labels[train_idx]),
        "mnist/t10k-images-idx3-ubyte": idx_images(images[test_idx]),
        "mnist/t10k-labels-idx1-ubyte": idx_labels(labels[test_idx]),
        "natural32/data_batch_1.bin": natural_crops(args.natural_count, rng),
    }
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with tarfile.open(args.out, "w:gz") as tf:
        for name, payload in sorted(files.items()):
            info = tarfile.TarInfo(name)
            info.size = len(payload)
            info.mtime = 0
            tf.addfile(info, io.BytesIO(payload))
    print(f"wrote {args.out}: {len(train_idx)} train / {len(test_idx)} test digits, "
          f"{args.natural_count} natural crops")


if __name__ == "__main__":
    main()
