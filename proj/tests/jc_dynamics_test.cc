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

#include "fieldprobe/jc_dynamics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"

using namespace fieldprobe;

namespace {

constexpr Transition kTransitions[] = {Transition::kOnePhoton, Transition::kTwoPhoton};
constexpr AtomEntry kEntries[] = {AtomEntry::kExcited, AtomEntry::kGround};

FockVector superposition(std::size_t d, std::vector<Complex> head) {
    head.resize(d);
    return FockVector::from_amplitudes(HilbertSpec(d), head);
}

double max_deviation(const PolarizationSignal &a, const PolarizationSignal &b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.values.size(); i++) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    return worst;
}

}  // namespace

TEST(delta_frequencies, exact_values) {
    auto one = delta_frequencies(0, Transition::kOnePhoton);
    EXPECT_DOUBLE_EQ(one.plus, std::sqrt(2.0) + 1);
    EXPECT_DOUBLE_EQ(one.minus, std::sqrt(2.0) - 1);
    auto two = delta_frequencies(0, Transition::kTwoPhoton);
    EXPECT_DOUBLE_EQ(two.plus, std::sqrt(12.0) + std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(two.minus, std::sqrt(12.0) - std::sqrt(2.0));
}

TEST(delta_frequencies, large_n_approaches_linear_form) {
    auto two = delta_frequencies(100, Transition::kTwoPhoton);
    EXPECT_NEAR(two.plus, 205, 0.01);
    EXPECT_NEAR(two.minus, 2, 0.01);
}

TEST(rabi_frequency, manifold_values) {
    for (std::size_t n = 0; n < 10; n++) {
        EXPECT_DOUBLE_EQ(rabi_frequency(n, Transition::kOnePhoton), std::sqrt(n + 1.0));
        EXPECT_DOUBLE_EQ(rabi_frequency(n, Transition::kTwoPhoton), std::sqrt((n + 1.0) * (n + 2.0)));
    }
}

TEST(time_grid, validation) {
    EXPECT_THROW(TimeGrid::uniform(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(TimeGrid::uniform(1, 1, 5), std::invalid_argument);
    EXPECT_THROW(TimeGrid::from_samples({0, 1, 1}), std::invalid_argument);
    EXPECT_THROW(TimeGrid::from_samples({-1, 0}), std::invalid_argument);
    EXPECT_THROW(TimeGrid::from_samples({0, NAN}), std::invalid_argument);
    auto g = TimeGrid::uniform(0, 2, 5);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[4], 2);
    EXPECT_DOUBLE_EQ(g.max_spacing(), 0.5);
}

TEST(signal_closed_form, fock_states_give_zero) {
    auto grid = TimeGrid::uniform(0, 50, 501);
    for (std::size_t n = 0; n < 4; n++) {
        auto s = make_fock(n, HilbertSpec(12));
        for (auto kind : kTransitions) {
            for (auto entry : kEntries) {
                auto sig = signal_closed_form(s, grid, kind, entry);
                for (auto v : sig.values) {
                    ASSERT_EQ(v, Complex(0));
                }
            }
        }
    }
}

TEST(signal_closed_form, two_level_superposition) {
    // The c*_1 c_0 coherence beats at Delta(0): the |e,0> <-> |g,1> manifold
    // (frequency 1) against |e,1> <-> |g,2> (frequency sqrt 2).
    auto s = superposition(8, {1, 1});
    auto grid = TimeGrid::uniform(0, 30, 301);
    auto sig = signal_closed_form(s, grid, Transition::kOnePhoton, AtomEntry::kExcited);
    double p = std::sqrt(2.0) + 1, m = std::sqrt(2.0) - 1;
    for (std::size_t i = 0; i < grid.size(); i++) {
        double t = grid[i];
        Complex want = Complex(0, -0.25) * (std::sin(p * t) - std::sin(m * t));
        EXPECT_NEAR(std::abs(sig.values[i] - want), 0, 1e-14) << t;
    }
}

TEST(signal_closed_form, vacuum_ground_entry_is_silent) {
    auto grid = TimeGrid::uniform(0, 20, 201);
    for (auto kind : kTransitions) {
        auto sig = signal_closed_form(make_fock(0, HilbertSpec(8)), grid, kind, AtomEntry::kGround);
        for (auto v : sig.values) {
            EXPECT_EQ(v, Complex(0));
        }
    }
}

TEST(signal_closed_form, refuses_truncation_edge) {
    auto grid = TimeGrid::uniform(0, 1, 3);
    auto top = superposition(8, {1, 0, 0, 0, 0, 0, 0, 1e-3});
    EXPECT_THROW(signal_closed_form(top, grid, Transition::kOnePhoton, AtomEntry::kExcited), std::invalid_argument);
    EXPECT_THROW(signal_unitary(top, grid, Transition::kOnePhoton, AtomEntry::kExcited), std::invalid_argument);
    // Two-photon transitions protect the top four levels.
    auto fourth = superposition(8, {1, 0, 0, 0, 1e-3});
    EXPECT_NO_THROW(signal_closed_form(fourth, grid, Transition::kOnePhoton, AtomEntry::kExcited));
    EXPECT_THROW(signal_closed_form(fourth, grid, Transition::kTwoPhoton, AtomEntry::kExcited),
                 std::invalid_argument);
}

TEST(signal_closed_form, vanishes_at_origin_and_bounded) {
    auto s = make_squeezed(std::polar(2.0, 0.7), 0.5, 0.3, HilbertSpec(96));
    auto grid = TimeGrid::uniform(0, 200, 4001);
    for (auto kind : kTransitions) {
        for (auto entry : kEntries) {
            auto sig = signal_closed_form(s, grid, kind, entry);
            EXPECT_EQ(sig.values[0], Complex(0));
            for (auto v : sig.values) {
                ASSERT_LE(std::abs(v), 0.5 + 1e-12);
            }
            EXPECT_TRUE(sig.noise_free());
            EXPECT_EQ(sig.meta.generator, SignalGenerator::kClosedForm);
        }
    }
}

TEST(signal_unitary, matches_dense_matrix_exponential) {
    // Independent first-principles check: expm(-iHT) on the full 2D space.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Complex> amps(14);
    for (std::size_t n = 0; n < 9; n++) {
        amps[n] = {g(rng), g(rng)};
    }
    auto s = FockVector::from_amplitudes(HilbertSpec(14), amps);
    auto grid = TimeGrid::uniform(0, 25, 126);
    for (auto kind : kTransitions) {
        for (auto entry : kEntries) {
            auto want = oracle::sigma_plus(s, grid.samples(), kind, entry);
            auto unitary = signal_unitary(s, grid, kind, entry);
            auto closed = signal_closed_form(s, grid, kind, entry);
            for (std::size_t i = 0; i < grid.size(); i++) {
                EXPECT_NEAR(std::abs(unitary.values[i] - want[i]), 0, 1e-11)
                    << to_string(kind) << " " << to_string(entry) << " T=" << grid[i];
                EXPECT_NEAR(std::abs(closed.values[i] - want[i]), 0, 1e-11)
                    << to_string(kind) << " " << to_string(entry) << " T=" << grid[i];
            }
        }
    }
}

TEST(signal_unitary, agrees_with_closed_form) {
    std::vector<FockVector> states = {
        make_fock(0, HilbertSpec(96)),
        make_fock(3, HilbertSpec(96)),
        superposition(96, {1, 1}),
        superposition(96, {1, Complex(0, 1), 0.5, -0.25}),
        make_coherent(2, HilbertSpec(96)),
        make_coherent(std::polar(4.0, 0.9), HilbertSpec(96)),
        make_squeezed(0, 0.8, 0, HilbertSpec(96)),
        make_squeezed(std::polar(1.5, -1.2), 0.4, 1.1, HilbertSpec(96)),
    };
    auto grid = TimeGrid::uniform(0, 200, 2001);
    for (const auto &s : states) {
        for (auto kind : kTransitions) {
            for (auto entry : kEntries) {
                double dev = max_deviation(signal_closed_form(s, grid, kind, entry),
                                           signal_unitary(s, grid, kind, entry));
                EXPECT_LE(dev, 1e-10) << to_string(kind) << " " << to_string(entry);
            }
        }
    }
}

TEST(signal_unitary, dropped_vacuum_term_matters_only_for_ground_entry) {
    auto s = make_coherent(std::polar(1.2, 0.4), HilbertSpec(48));
    auto grid = TimeGrid::uniform(0, 60, 601);
    for (auto kind : kTransitions) {
        auto exact = signal_unitary(s, grid, kind, AtomEntry::kExcited);
        auto dropped = signal_unitary(s, grid, kind, AtomEntry::kExcited, EvolutionModel::kVacuumTermDropped);
        EXPECT_LE(max_deviation(exact, dropped), 1e-14) << to_string(kind);

        auto g_exact = signal_unitary(s, grid, kind, AtomEntry::kGround);
        auto g_dropped = signal_unitary(s, grid, kind, AtomEntry::kGround, EvolutionModel::kVacuumTermDropped);
        EXPECT_GT(max_deviation(g_exact, g_dropped), 1e-3) << to_string(kind);
    }
}

TEST(evolve_joint, preserves_norm) {
    auto s = make_coherent(std::polar(3.0, 2.0), HilbertSpec(64));
    for (auto kind : kTransitions) {
        for (auto entry : kEntries) {
            for (double t : {0.0, 0.3, 17.0, 199.9}) {
                EXPECT_NEAR(evolve_joint(s, t, kind, entry).norm_squared(), 1, 1e-12);
            }
        }
    }
}

TEST(polarization_signal, length_checks) {
    auto grid = TimeGrid::uniform(0, 1, 3);
    EXPECT_THROW(PolarizationSignal(grid, {0, 0}, SignalMeta{}), std::invalid_argument);
    EXPECT_THROW(PolarizationSignal(grid, {0, 0, 0}, {0, 0}, {0, 0, 0}, SignalMeta{}), std::invalid_argument);
    PolarizationSignal ok(grid, {0, 0, 0}, SignalMeta{});
    EXPECT_TRUE(ok.noise_free());
}
