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

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fieldprobe {

namespace {

// Squared coupling (n+1)...(n+s) as an exact integer-valued double.
double rabi_frequency_squared(std::size_t n, std::size_t s) {
    double product = 1;
    for (std::size_t k = 1; k <= s; k++) {
        product *= double(n + k);
    }
    return product;
}

}  // namespace

std::size_t photons_exchanged(Transition kind) {
    return kind == Transition::kOnePhoton ? 1 : 2;
}

std::string to_string(Transition kind) {
    return kind == Transition::kOnePhoton ? "one_photon" : "two_photon";
}

std::string to_string(AtomEntry entry) {
    return entry == AtomEntry::kExcited ? "excited" : "ground";
}

std::string to_string(SignalGenerator generator) {
    switch (generator) {
        case SignalGenerator::kClosedForm:
            return "closed_form";
        case SignalGenerator::kUnitary:
            return "unitary";
        case SignalGenerator::kShotSampled:
            return "shot_sampled";
    }
    return "?";
}

TimeGrid TimeGrid::uniform(double t_start, double t_end, std::size_t points) {
    if (points < 2) {
        throw std::invalid_argument("uniform grid needs at least 2 points");
    }
    if (!(t_end > t_start)) {
        throw std::invalid_argument("grid end must exceed grid start");
    }
    std::vector<double> samples(points);
    double step = (t_end - t_start) / double(points - 1);
    for (std::size_t i = 0; i < points; i++) {
        samples[i] = t_start + step * double(i);
    }
    samples.back() = t_end;
    return from_samples(std::move(samples));
}

TimeGrid TimeGrid::from_samples(std::vector<double> samples) {
    for (std::size_t i = 0; i < samples.size(); i++) {
        if (!std::isfinite(samples[i])) {
            throw std::invalid_argument("grid sample " + std::to_string(i) + " is not finite");
        }
        if (i == 0 && samples[i] < 0) {
            throw std::invalid_argument("grid must start at T >= 0");
        }
        if (i > 0 && !(samples[i] > samples[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing (violated at sample " + std::to_string(i) +
                                        ")");
        }
    }
    return TimeGrid(std::move(samples));
}

double TimeGrid::max_spacing() const {
    double widest = 0;
    for (std::size_t i = 1; i < samples_.size(); i++) {
        widest = std::max(widest, samples_[i] - samples_[i - 1]);
    }
    return widest;
}

double rabi_frequency(std::size_t n, Transition kind) {
    return std::sqrt(rabi_frequency_squared(n, photons_exchanged(kind)));
}

FrequencyPair delta_frequencies(std::size_t n, Transition kind) {
    std::size_t s = photons_exchanged(kind);
    double upper2 = rabi_frequency_squared(n + s, s);
    double lower2 = rabi_frequency_squared(n, s);
    double plus = std::sqrt(upper2) + std::sqrt(lower2);
    return {plus, (upper2 - lower2) / plus};
}

PolarizationSignal::PolarizationSignal(TimeGrid grid, std::vector<Complex> values, SignalMeta meta)
    : PolarizationSignal(grid, std::move(values), std::vector<double>(grid.size()), std::vector<double>(grid.size()),
                         meta) {
}

PolarizationSignal::PolarizationSignal(TimeGrid grid_, std::vector<Complex> values_, std::vector<double> err_re,
                                       std::vector<double> err_im, SignalMeta meta_)
    : grid(std::move(grid_)),
      values(std::move(values_)),
      std_error_re(std::move(err_re)),
      std_error_im(std::move(err_im)),
      meta(meta_) {
    if (values.size() != grid.size() || std_error_re.size() != grid.size() || std_error_im.size() != grid.size()) {
        throw std::invalid_argument("signal arrays must match the grid length");
    }
}

bool PolarizationSignal::noise_free() const {
    for (std::size_t i = 0; i < values.size(); i++) {
        if (std_error_re[i] != 0 || std_error_im[i] != 0) {
            return false;
        }
    }
    return !meta.noise.has_value() || meta.noise->infinite_shots;
}

void check_truncation_edge(const FockVector &state, Transition kind) {
    std::size_t top = 2 * photons_exchanged(kind);
    std::size_t d = state.dim();
    if (d <= top) {
        throw std::invalid_argument("Hilbert space too small for a " + to_string(kind) + " transition");
    }
    for (std::size_t n = d - top; n < d; n++) {
        if (std::abs(state[n]) >= kTruncationEdgeThreshold) {
            std::stringstream ss;
            ss << "state reaches the truncation edge: |c_" << n << "| = " << std::abs(state[n])
               << " >= " << kTruncationEdgeThreshold << "; increase the Hilbert space dimension";
            throw std::invalid_argument(ss.str());
        }
    }
}

JointState evolve_joint(const FockVector &state, double t, Transition kind, AtomEntry entry, EvolutionModel model) {
    std::size_t d = state.dim();
    std::size_t s = photons_exchanged(kind);
    std::vector<Complex> e(d), g(d);
    for (std::size_t n = 0; n < d; n++) {
        (entry == AtomEntry::kExcited ? e : g)[n] = state[n];
    }
    // Manifold blocks {|e,n>, |g,n+s>}: H = W(n) sigma_x, so U = cos(W t) - i sin(W t) sigma_x.
    const Complex minus_i{0, -1};
    for (std::size_t n = 0; n + s < d; n++) {
        double w = rabi_frequency(n, kind);
        double c = std::cos(w * t);
        double sn = std::sin(w * t);
        Complex en = e[n];
        Complex gn = g[n + s];
        e[n] = c * en + minus_i * sn * gn;
        g[n + s] = minus_i * sn * en + c * gn;
    }
    // |g,0> (and |g,1> for two photons) are uncoupled; the factorized operator omits them.
    if (model == EvolutionModel::kVacuumTermDropped) {
        for (std::size_t m = 0; m < s; m++) {
            g[m] = 0;
        }
    }
    return {FieldVector(state.space(), std::move(e)), FieldVector(state.space(), std::move(g))};
}

PolarizationSignal signal_closed_form(const FockVector &state, const TimeGrid &grid, Transition kind,
                                      AtomEntry entry) {
    check_truncation_edge(state, kind);
    std::size_t d = state.dim();
    std::size_t s = photons_exchanged(kind);
    std::size_t terms = d - s;

    std::vector<Complex> coherence(terms);
    std::vector<double> f1(terms), f2(terms);
    for (std::size_t n = 0; n < terms; n++) {
        coherence[n] = std::conj(state[n + s]) * state[n];
        if (entry == AtomEntry::kExcited) {
            auto pair = delta_frequencies(n, kind);
            f1[n] = pair.plus;
            f2[n] = pair.minus;
        } else {
            f1[n] = rabi_frequency(n, kind);
            f2[n] = n >= s ? rabi_frequency(n - s, kind) : 0.0;
        }
    }

    std::vector<Complex> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); i++) {
        double t = grid[i];
        Complex total{0};
        for (std::size_t n = 0; n < terms; n++) {
            if (coherence[n] == Complex{0}) {
                continue;
            }
            double weight = entry == AtomEntry::kExcited ? std::sin(t * f1[n]) - std::sin(t * f2[n])
                                                         : std::sin(t * f1[n]) * std::cos(t * f2[n]);
            total += coherence[n] * weight;
        }
        values[i] = entry == AtomEntry::kExcited ? Complex{0, -0.5} * total : Complex{0, 1} * total;
    }
    return PolarizationSignal(grid, std::move(values), SignalMeta{kind, entry, SignalGenerator::kClosedForm, {}, d});
}

PolarizationSignal signal_unitary(const FockVector &state, const TimeGrid &grid, Transition kind, AtomEntry entry,
                                  EvolutionModel model) {
    check_truncation_edge(state, kind);
    std::vector<Complex> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); i++) {
        values[i] = evolve_joint(state, grid[i], kind, entry, model).sigma_plus();
    }
    return PolarizationSignal(grid, std::move(values),
                              SignalMeta{kind, entry, SignalGenerator::kUnitary, {}, state.dim()});
}

}  // namespace fieldprobe
