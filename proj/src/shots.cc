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

#include "fieldprobe/shots.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fieldprobe {

namespace {

using Matrix2 = std::array<std::array<Complex, 2>, 2>;  // [row][col], rows/cols ordered (e, g)

// exp(theta G) for a generator with G^2 = -1.
Matrix2 exp_generator(const Matrix2 &gen, double theta) {
    Matrix2 out{};
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            out[r][c] = (r == c ? std::cos(theta) : 0.0) + std::sin(theta) * gen[r][c];
        }
    }
    return out;
}

const Matrix2 &rotation(Axis axis) {
    // sigma_+ = |e><g| is the (e, g) entry.
    static const Matrix2 sigma_minus_minus_plus{{{Complex{0}, Complex{-1}}, {Complex{1}, Complex{0}}}};
    static const Matrix2 i_sigma_x{{{Complex{0}, Complex{0, 1}}, {Complex{0, 1}, Complex{0}}}};
    static const Matrix2 rx = exp_generator(sigma_minus_minus_plus, std::numbers::pi / 4);
    static const Matrix2 ry = exp_generator(i_sigma_x, std::numbers::pi / 4);
    return axis == Axis::kX ? rx : ry;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

AxisEstimate draw(double p, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots per point must be at least 1");
    }
    p = std::clamp(p, 0.0, 1.0);
    std::mt19937_64 rng(seed);
    std::binomial_distribution<std::uint64_t> dist(shots, p);
    double m = double(shots);
    double p_hat = double(dist(rng)) / m;
    return {p_hat - 0.5, std::sqrt(p_hat * (1 - p_hat) / m)};
}

AxisEstimate estimate(double p, Axis axis, const ShotConfig &cfg, std::uint64_t point_index) {
    bool sampled = axis == Axis::kX ? cfg.sample_x : cfg.sample_y;
    if (cfg.infinite_shots || !sampled) {
        return {p - 0.5, 0.0};
    }
    return draw(p, cfg.shots_per_point, stream_seed(cfg.seed, point_index, axis));
}

}  // namespace

double rotated_excitation_probability(const JointState &joint, Axis axis) {
    // Excited row of R^dag: (conj(R_ee), conj(R_ge)).
    const Matrix2 &r = rotation(axis);
    Complex ce = std::conj(r[0][0]);
    Complex cg = std::conj(r[1][0]);
    double p = 0;
    for (std::size_t n = 0; n < joint.excited.dim(); n++) {
        p += std::norm(ce * joint.excited[n] + cg * joint.ground[n]);
    }
    return p;
}

double sigma_expectation(const JointState &joint, Axis axis) {
    return (2 * rotated_excitation_probability(joint, axis) - 1) / 2;
}

AxisEstimate sample_axis(const JointState &joint, Axis axis, std::uint64_t shots, std::uint64_t seed) {
    return draw(rotated_excitation_probability(joint, axis), shots, seed);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t point_index, Axis axis) {
    std::uint64_t lane = 2 * point_index + (axis == Axis::kX ? 0 : 1);
    return splitmix64(splitmix64(seed) ^ splitmix64(lane + 0x632BE59BD9B4E019ull));
}

SigmaXYEstimate sample_sigma_xy(const FockVector &state, double t, Transition kind, AtomEntry entry,
                                const ShotConfig &cfg, std::uint64_t point_index) {
    if (!cfg.infinite_shots && cfg.shots_per_point == 0) {
        throw std::invalid_argument("shots per point must be at least 1");
    }
    JointState joint = evolve_joint(state, t, kind, entry);
    auto x = estimate(rotated_excitation_probability(joint, Axis::kX), Axis::kX, cfg, point_index);
    auto y = estimate(rotated_excitation_probability(joint, Axis::kY), Axis::kY, cfg, point_index);
    return {x.value, y.value, x.std_error, y.std_error};
}

ProbabilityTrace rotated_probabilities(const FockVector &state, const TimeGrid &grid, Transition kind,
                                       AtomEntry entry) {
    check_truncation_edge(state, kind);
    ProbabilityTrace trace{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                           SignalMeta{kind, entry, SignalGenerator::kShotSampled, {}, state.dim()}};
    for (std::size_t i = 0; i < grid.size(); i++) {
        JointState joint = evolve_joint(state, grid[i], kind, entry);
        trace.px[i] = rotated_excitation_probability(joint, Axis::kX);
        trace.py[i] = rotated_excitation_probability(joint, Axis::kY);
    }
    return trace;
}

PolarizationSignal sample_signal(const ProbabilityTrace &trace, const ShotConfig &cfg) {
    if (!cfg.infinite_shots && cfg.shots_per_point == 0) {
        throw std::invalid_argument("shots per point must be at least 1");
    }
    std::size_t n = trace.grid.size();
    std::vector<Complex> values(n);
    std::vector<double> err_re(n), err_im(n);
    for (std::size_t i = 0; i < n; i++) {
        auto x = estimate(trace.px[i], Axis::kX, cfg, i);
        auto y = estimate(trace.py[i], Axis::kY, cfg, i);
        values[i] = {x.value, y.value};
        err_re[i] = x.std_error;
        err_im[i] = y.std_error;
    }
    SignalMeta meta = trace.meta;
    meta.noise = cfg;
    return PolarizationSignal(trace.grid, std::move(values), std::move(err_re), std::move(err_im), meta);
}

PolarizationSignal signal_from_shots(const FockVector &state, const TimeGrid &grid, Transition kind, AtomEntry entry,
                                     const ShotConfig &cfg) {
    return sample_signal(rotated_probabilities(state, grid, kind, entry), cfg);
}

}  // namespace fieldprobe
