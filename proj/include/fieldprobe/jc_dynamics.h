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

#ifndef FIELDPROBE_JC_DYNAMICS_H
#define FIELDPROBE_JC_DYNAMICS_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldprobe/fock.h"

namespace fieldprobe {

enum class Transition { kOnePhoton, kTwoPhoton };
enum class AtomEntry { kExcited, kGround };

/// Photons exchanged per atomic transition (1 or 2).
std::size_t photons_exchanged(Transition kind);
std::string to_string(Transition kind);
std::string to_string(AtomEntry entry);

/// Strictly increasing scaled times T = lambda t (coupling absorbed), starting at T >= 0.
class TimeGrid {
   public:
    static TimeGrid uniform(double t_start, double t_end, std::size_t points);
    static TimeGrid from_samples(std::vector<double> samples);

    std::span<const double> samples() const {
        return samples_;
    }
    std::size_t size() const {
        return samples_.size();
    }
    double operator[](std::size_t i) const {
        return samples_[i];
    }
    /// Largest spacing between consecutive samples (0 for fewer than two samples).
    double max_spacing() const;

   private:
    explicit TimeGrid(std::vector<double> samples) : samples_(std::move(samples)) {
    }
    std::vector<double> samples_;
};

/// Exact (plus, minus) difference frequencies paired with the coherence c*_{n+s} c_n.
///
/// One-photon: sqrt(n+2) +- sqrt(n+1). Two-photon: sqrt((n+4)(n+3)) +- sqrt((n+2)(n+1)).
/// The minus branch is computed as a quotient to avoid cancellation.
struct FrequencyPair {
    double plus;
    double minus;
};
FrequencyPair delta_frequencies(std::size_t n, Transition kind);

/// Coupling between |e,n> and |g,n+s>: sqrt(n+1) (one photon) or sqrt((n+1)(n+2)) (two photons).
double rabi_frequency(std::size_t n, Transition kind);

enum class SignalGenerator { kClosedForm, kUnitary, kShotSampled };
std::string to_string(SignalGenerator generator);

struct ShotConfig {
    std::uint64_t shots_per_point = 1000;
    std::uint64_t seed = 0;
    bool sample_x = true;
    bool sample_y = true;
    /// Use the exact excitation probability instead of drawing shots (the M -> infinity limit).
    bool infinite_shots = false;
};

struct SignalMeta {
    Transition transition = Transition::kOnePhoton;
    AtomEntry entry = AtomEntry::kExcited;
    SignalGenerator generator = SignalGenerator::kClosedForm;
    std::optional<ShotConfig> noise;
    /// Dimension of the Fock space the signal was synthesized in; bounds the frequency dictionary.
    std::size_t photon_cap = 0;
};

/// Sampled <sigma_+>(T) with per-sample standard errors (zero when noise-free).
struct PolarizationSignal {
    PolarizationSignal(TimeGrid grid, std::vector<Complex> values, SignalMeta meta);
    PolarizationSignal(TimeGrid grid, std::vector<Complex> values, std::vector<double> std_error_re,
                       std::vector<double> std_error_im, SignalMeta meta);

    TimeGrid grid;
    std::vector<Complex> values;
    std::vector<double> std_error_re;
    std::vector<double> std_error_im;
    SignalMeta meta;

    bool noise_free() const;
};

/// Atom-field state |e>|excited> + |g>|ground>.
struct JointState {
    FieldVector excited;
    FieldVector ground;

    /// <sigma_+> with sigma_+ = |e><g|.
    Complex sigma_plus() const {
        return inner(excited, ground);
    }
    double norm_squared() const {
        return excited.norm_squared() + ground.norm_squared();
    }
};

/// kExact keeps the vacuum projector in the ground-ground block of U(t); kVacuumTermDropped
/// reproduces the factorized evolution operator that omits it (|0><0|, plus |1><1| for two photons).
enum class EvolutionModel { kExact, kVacuumTermDropped };

/// Top amplitudes (2 for one photon, 4 for two) must be below this magnitude.
inline constexpr double kTruncationEdgeThreshold = 1e-8;

/// Throws std::invalid_argument if the state is too close to the truncation edge for `kind`.
void check_truncation_edge(const FockVector &state, Transition kind);

/// Joint state at scaled time T by exact evolution of the 2x2 excitation-manifold blocks.
JointState evolve_joint(const FockVector &state, double t, Transition kind, AtomEntry entry,
                        EvolutionModel model = EvolutionModel::kExact);

/// <sigma_+>(T) from the exact Fock-basis sums:
///   excited: -(i/2) sum_n c*_{n+s} c_n (sin[T d+(n)] - sin[T d-(n)])
///   ground:   i     sum_n c*_{n+s} c_n sin[T W(n)] cos[T W(n-s)]   (W(m<0) = 0)
PolarizationSignal signal_closed_form(const FockVector &state, const TimeGrid &grid, Transition kind,
                                      AtomEntry entry);

/// <sigma_+>(T) from evolve_joint at every grid point. Independent check on signal_closed_form.
PolarizationSignal signal_unitary(const FockVector &state, const TimeGrid &grid, Transition kind, AtomEntry entry,
                                  EvolutionModel model = EvolutionModel::kExact);

}  // namespace fieldprobe

#endif
