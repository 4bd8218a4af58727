// Copyright 2026 The fieldprobe Authors
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

#ifndef FIELDPROBE_SRC_HARNESS_INTERNAL_H
#define FIELDPROBE_SRC_HARNESS_INTERNAL_H

#include <string>

#include "fieldprobe/harness.h"
#include "json.hpp"

namespace fieldprobe {

using Json = nlohmann::ordered_json;

/// Two-space indented JSON with floating-point numbers at 17 significant
/// digits; non-finite numbers become null.
std::string dump_json(const Json &value);

Json complex_json(Complex value);
Json config_echo(const ExperimentConfig &config);

FockVector make_state(const StateConfig &state, std::size_t dim);
/// The state for one sweep point (shot sweeps leave it unchanged).
StateConfig apply_sweep(StateConfig state, const SweepConfig &sweep, double value);

}  // namespace fieldprobe

#endif
