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
#ifndef CSVAR_CSVAR_HPP_
#define CSVAR_CSVAR_HPP_

#include "csvar/dataset.hpp"
#include "csvar/error.hpp"
#include "csvar/fedsim.hpp"
#include "csvar/image.hpp"
#include "csvar/metrics.hpp"
#include "csvar/mia.hpp"
#include "csvar/mlp.hpp"
#include "csvar/netpbm.hpp"
#include "csvar/partition.hpp"
#include "csvar/regions.hpp"
#include "csvar/rng.hpp"
#include "csvar/shuffler.hpp"
#include "csvar/variants.hpp"

#endif  // CSVAR_CSVAR_HPP_
