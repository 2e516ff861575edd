// Copyright 2026 The specphase Authors.
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

#include "specphase/assess.hpp"
#include "specphase/error.hpp"
#include "specphase/experiment.hpp"
#include "specphase/gen.hpp"
#include "specphase/graph.hpp"
#include "specphase/io.hpp"
#include "specphase/partition.hpp"
#include "specphase/rng.hpp"
#include "specphase/spectral.hpp"
#include "specphase/theory.hpp"
