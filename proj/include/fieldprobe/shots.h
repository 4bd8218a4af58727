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

#ifndef FIELDPROBE_SHOTS_H
#define FIELDPROBE_SHOTS_H

#include <cstdint>

#include "fieldprobe/jc_dynamics.h"

namespace fieldprobe {

// Spin conventions: sigma_+ = |e><g|, sigma_x = (sigma_+ + sigma_-)/2,
// sigma_y = (sigma_+ - sigma_-)/(2i), so sigma_+ = sigma_x + i sigma_y and
// <sigma_x>, <sigma_y> lie in [-1/2, 1/2]. An inversion measurement returns the
// Pauli-normalized value in [-1, 1]; estimates are halved to this scale.

enum class Axis { kX, kY };

/// Probability of finding the atom excited after the pre-measurement rotation
/// for `axis`: R_x = exp[(sigma_- - sigma_+) pi/4], R_y = exp[i (sigma_+ + sigma_-) pi/4],
/// acting as rho -> R^dag rho R.
double rotated_excitation_probability(const JointState &joint, Axis axis);

/// <sigma_x> or <sigma_y> recovered from the rotated inversion: (2p - 1) / 2.
double sigma_expectation(const JointState &joint, Axis axis);

struct AxisEstimate {
    double value;
    double std_error;
};

/// Draws `shots` inversion outcomes for one axis from a generator seeded by `stream_seed`.
/// Throws std::invalid_argument when shots == 0.
AxisEstimate sample_axis(const JointState &joint, Axis axis, std::uint64_t shots, std::uint64_t stream_seed);

struct SigmaXYEstimate {
    double sx;
    double sy;
    double sx_std_error;
    double sy_std_error;
};

/// Seed for one (grid point, axis) stream. Depends only on its arguments, so
/// results do not depend on evaluation order or worker count.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t point_index, Axis axis);

/// Shot-sampled sigma_x / sigma_y at a single scaled time. Axes not selected in
/// `cfg` are returned exactly with zero standard error.
SigmaXYEstimate sample_sigma_xy(const FockVector &state, double t, Transition kind, AtomEntry entry,
                                const ShotConfig &cfg, std::uint64_t point_index = 0);

/// sample_sigma_xy over the grid combined as sigma_+ = sx + i sy.
PolarizationSignal signal_from_shots(const FockVector &state, const TimeGrid &grid, Transition kind, AtomEntry entry,
                                     const ShotConfig &cfg);

/// Exact rotated excitation probabilities (x then y) at every grid point. Lets
/// repeated sampling studies skip re-evolving the state.
struct ProbabilityTrace {
    TimeGrid grid;
    std::vector<double> px;
    std::vector<double> py;
    SignalMeta meta;
};
ProbabilityTrace rotated_probabilities(const FockVector &state, const TimeGrid &grid, Transition kind,
                                       AtomEntry entry);
PolarizationSignal sample_signal(const ProbabilityTrace &trace, const ShotConfig &cfg);

}  // namespace fieldprobe

#endif
