// Copyright 2026 The CogScale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "cogscale/budget.hpp"
#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/dataset.hpp"
#include "cogscale/dataset_io.hpp"
#include "cogscale/esn.hpp"
#include "cogscale/harness.hpp"
#include "cogscale/hash.hpp"
#include "cogscale/metrics.hpp"
#include "cogscale/parallel.hpp"
#include "cogscale/rng.hpp"
#include "cogscale/taskgen.hpp"
