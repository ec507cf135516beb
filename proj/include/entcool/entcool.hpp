// Copyright 2026 The entcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "entcool/cooling.hpp"
#include "entcool/entanglement.hpp"
#include "entcool/experiments.hpp"
#include "entcool/io.hpp"
#include "entcool/ising_model.hpp"
#include "entcool/plot_scripts.hpp"
#include "entcool/quantum_state.hpp"
#include "entcool/rng.hpp"
#include "entcool/spectrum_stats.hpp"
