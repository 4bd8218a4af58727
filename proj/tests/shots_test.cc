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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fieldprobe;

namespace {

FockVector qubit_superposition() {
    return FockVector::from_amplitudes(HilbertSpec(8), {1, 1, 0, 0, 0, 0, 0, 0});
}

JointState random_joint(std::mt19937_64 &rng, std::size_t d) {
    std::normal_distribution<double> g;
    std::vector<Complex> e(d), gr(d);
    double norm = 0;
    for (std::size_t n = 0; n < d; n++) {
        e[n] = {g(rng), g(rng)};
        gr[n] = {g(rng), g(rng)};
        norm += std::norm(e[n]) + std::norm(gr[n]);
    }
    double scale = 1 / std::sqrt(norm);
    for (std::size_t n = 0; n < d; n++) {
        e[n] *= scale;
        gr[n] *= scale;
    }
    return {FieldVector(HilbertSpec(d), e), FieldVector(HilbertSpec(d), gr)};
}

}  // namespace

TEST(shots, convention_lock) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; trial++) {
        auto joint = random_joint(rng, 6);
        Complex from_axes{sigma_expectation(joint, Axis::kX), sigma_expectation(joint, Axis::kY)};
        EXPECT_NEAR(std::abs(from_axes - joint.sigma_plus()), 0, 1e-12);
    }
}

TEST(shots, deterministic_outcome) {
    // e = g = |0>/sqrt 2 is the sigma_x eigenstate: the rotated atom is surely excited.
    double h = 1 / std::sqrt(2.0);
    JointState joint{FieldVector(HilbertSpec(2), {h, 0}), FieldVector(HilbertSpec(2), {h, 0})};
    EXPECT_NEAR(rotated_excitation_probability(joint, Axis::kX), 1, 1e-15);
    for (std::uint64_t shots : {1ull, 7ull, 1000ull}) {
        auto est = sample_axis(joint, Axis::kX, shots, 99);
        EXPECT_EQ(est.value, 0.5);
        EXPECT_EQ(est.std_error, 0);
    }
}

TEST(shots, symmetric_state_is_unbiased) {
    // A number state has no coherence, so <sigma_x> = <sigma_y> = 0 at all times.
    ShotConfig cfg{1000000, 12345};
    auto s = make_fock(2, HilbertSpec(8));
    for (std::uint64_t i = 0; i < 5; i++) {
        auto est = sample_sigma_xy(s, 1.3 + i, Transition::kOnePhoton, AtomEntry::kExcited, cfg, i);
        EXPECT_LE(std::abs(est.sx), 5 * est.sx_std_error);
        EXPECT_LE(std::abs(est.sy), 5 * est.sy_std_error);
        EXPECT_GT(est.sx_std_error, 0);
    }
}

TEST(shots, error_shrinks_as_inverse_sqrt_shots) {
    auto s = qubit_superposition();
    double exact = signal_unitary(s, TimeGrid::from_samples({0.7}), Transition::kOnePhoton, AtomEntry::kExcited)
                       .values[0]
                       .real();
    auto rms = [&](std::uint64_t shots) {
        double sum = 0;
        for (std::uint64_t seed = 0; seed < 400; seed++) {
            auto est = sample_sigma_xy(s, 0.7, Transition::kOnePhoton, AtomEntry::kExcited, {shots, seed});
            sum += (est.sx - exact) * (est.sx - exact);
        }
        return std::sqrt(sum / 400);
    };
    double ratio = rms(1000) / rms(100000);
    EXPECT_GT(ratio, 10 / 1.5);
    EXPECT_LT(ratio, 10 * 1.5);
}

TEST(shots, zero_shots_rejected) {
    auto s = qubit_superposition();
    ShotConfig cfg{0, 1};
    EXPECT_THROW(sample_sigma_xy(s, 0.1, Transition::kOnePhoton, AtomEntry::kExcited, cfg), std::invalid_argument);
    EXPECT_THROW(signal_from_shots(s, TimeGrid::uniform(0, 1, 3), Transition::kOnePhoton, AtomEntry::kExcited, cfg),
                 std::invalid_argument);
}

TEST(signal_from_shots, infinite_shot_limit_is_exact) {
    auto s = make_coherent(std::polar(2.0, 0.3), HilbertSpec(64));
    auto grid = TimeGrid::uniform(0, 100, 1001);
    ShotConfig cfg;
    cfg.infinite_shots = true;
    for (auto kind : {Transition::kOnePhoton, Transition::kTwoPhoton}) {
        for (auto entry : {AtomEntry::kExcited, AtomEntry::kGround}) {
            auto shots = signal_from_shots(s, grid, kind, entry, cfg);
            auto exact = signal_unitary(s, grid, kind, entry);
            for (std::size_t i = 0; i < grid.size(); i++) {
                ASSERT_NEAR(std::abs(shots.values[i] - exact.values[i]), 0, 1e-12);
                ASSERT_EQ(shots.std_error_re[i], 0);
            }
        }
    }
}

TEST(signal_from_shots, seeded_runs_are_bit_identical) {
    auto s = make_coherent(2, HilbertSpec(64));
    auto grid = TimeGrid::uniform(0, 50, 201);
    ShotConfig cfg{5000, 77};
    auto a = signal_from_shots(s, grid, Transition::kOnePhoton, AtomEntry::kExcited, cfg);
    auto b = signal_from_shots(s, grid, Transition::kOnePhoton, AtomEntry::kExcited, cfg);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.std_error_re, b.std_error_re);
    EXPECT_EQ(a.std_error_im, b.std_error_im);
    cfg.seed = 78;
    auto c = signal_from_shots(s, grid, Transition::kOnePhoton, AtomEntry::kExcited, cfg);
    EXPECT_NE(a.values, c.values);
}

TEST(signal_from_shots, split_pipeline_matches) {
    auto s = make_coherent(std::polar(1.5, 1.0), HilbertSpec(48));
    auto grid = TimeGrid::uniform(0, 40, 161);
    ShotConfig cfg{2000, 5};
    auto direct = signal_from_shots(s, grid, Transition::kTwoPhoton, AtomEntry::kGround, cfg);
    auto split = sample_signal(rotated_probabilities(s, grid, Transition::kTwoPhoton, AtomEntry::kGround), cfg);
    EXPECT_EQ(direct.values, split.values);
    EXPECT_EQ(split.meta.generator, SignalGenerator::kShotSampled);
    ASSERT_TRUE(split.meta.noise.has_value());
    EXPECT_EQ(split.meta.noise->shots_per_point, 2000u);
    EXPECT_FALSE(split.noise_free());
}

TEST(signal_from_shots, deviation_within_binomial_band) {
    auto s = make_coherent(2, HilbertSpec(64));
    auto grid = TimeGrid::uniform(0, 100, 2001);
    ShotConfig cfg{10000, 2026};
    auto noisy = signal_from_shots(s, grid, Transition::kOnePhoton, AtomEntry::kExcited, cfg);
    auto exact = signal_closed_form(s, grid, Transition::kOnePhoton, AtomEntry::kExcited);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < grid.size(); i++) {
        bool re = std::abs(noisy.values[i].real() - exact.values[i].real()) <= 6 * noisy.std_error_re[i];
        bool im = std::abs(noisy.values[i].imag() - exact.values[i].imag()) <= 6 * noisy.std_error_im[i];
        inside += re && im;
    }
    EXPECT_GE(double(inside), 0.99 * grid.size());
}

TEST(signal_from_shots, unsampled_axis_is_exact) {
    auto s = make_coherent(std::polar(2.0, 0.5), HilbertSpec(64));
    auto grid = TimeGrid::uniform(0, 20, 101);
    ShotConfig cfg{100, 3};
    cfg.sample_y = false;
    auto noisy = signal_from_shots(s, grid, Transition::kOnePhoton, AtomEntry::kExcited, cfg);
    auto exact = signal_unitary(s, grid, Transition::kOnePhoton, AtomEntry::kExcited);
    for (std::size_t i = 0; i < grid.size(); i++) {
        EXPECT_NEAR(noisy.values[i].imag(), exact.values[i].imag(), 1e-12);
        EXPECT_EQ(noisy.std_error_im[i], 0);
    }
}

TEST(stream_seed, distinct_lanes) {
    EXPECT_NE(stream_seed(1, 0, Axis::kX), stream_seed(1, 0, Axis::kY));
    EXPECT_NE(stream_seed(1, 0, Axis::kY), stream_seed(1, 1, Axis::kX));
    EXPECT_NE(stream_seed(1, 0, Axis::kX), stream_seed(2, 0, Axis::kX));
    EXPECT_EQ(stream_seed(9, 4, Axis::kY), stream_seed(9, 4, Axis::kY));
}
