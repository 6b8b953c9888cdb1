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
"""Variance-aware image shuffling toolkit."""

from csvar._csvar import (
    CsvarError,
    derive_noise_seed,
    derive_region_seed,
    gaussian_obfuscate,
    generate_variants,
    histogram_l1,
    inter_channel_correlation,
    load_cifar,
    load_idx,
    mia_threshold_attack,
    ncc,
    pad_to_region_multiple,
    partition_clients,
    region_size,
    run_federated,
    shuffle,
    variance_map,
)

__all__ = [
    "CsvarError",
    "derive_noise_seed",
    "derive_region_seed",
    "gaussian_obfuscate",
    "generate_variants",
    "histogram_l1",
    "inter_channel_correlation",
    "load_cifar",
    "load_idx",
    "mia_threshold_attack",
    "ncc",
    "pad_to_region_multiple",
    "partition_clients",
    "region_size",
    "run_federated",
    "shuffle",
    "variance_map",
]
