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

#include "fieldprobe/fock.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fieldprobe {

namespace {

void check_leakage(double leakage, double bound, std::size_t dim, const char *what) {
    if (!(leakage <= bound)) {
        std::stringstream ss;
        ss << what << " does not fit in dim=" << dim << ": truncation leakage " << leakage << " exceeds bound "
           << bound << "; increase the Hilbert space dimension";
        throw std::invalid_argument(ss.str());
    }
}

// Amplitudes of D(alpha)S(xi)|0> for n = 0..count-1 with exact normalization.
//
// Uses the annihilation condition
//   [cosh(r) a + e^{i theta} sinh(r) a^dag] |psi> = gamma |psi>,
//   gamma = alpha cosh(r) + conj(alpha) e^{i theta} sinh(r),
// which gives c_{n+1} = (gamma c_n - e^{i theta} sinh(r) sqrt(n) c_{n-1}) / (cosh(r) sqrt(n+1)).
std::vector<Complex> squeezed_amplitudes(Complex alpha, double r, double theta, std::size_t count) {
    double ch = std::cosh(r);
    double sh = std::sinh(r);
    Complex phase = std::polar(1.0, theta);
    Complex gamma = alpha * ch + std::conj(alpha) * phase * sh;
    Complex log_c0 = -0.5 * std::norm(alpha) - 0.5 * std::conj(alpha) * std::conj(alpha) * phase * std::tanh(r);
    std::vector<Complex> c(count);
    c[0] = std::exp(log_c0) / std::sqrt(ch);
    for (std::size_t n = 0; n + 1 < count; n++) {
        Complex prev = n > 0 ? c[n - 1] : Complex{0};
        c[n + 1] = (gamma * c[n] - phase * sh * std::sqrt(double(n)) * prev) / (ch * std::sqrt(double(n + 1)));
    }
    return c;
}

}  // namespace

HilbertSpec::HilbertSpec(std::size_t dim) : dim_(dim) {
    if (dim < 2) {
        throw std::invalid_argument("Hilbert space dimension must be at least 2, got " + std::to_string(dim));
    }
}

FieldVector::FieldVector(HilbertSpec space) : space_(space), amps_(space.dim()) {
}

FieldVector::FieldVector(HilbertSpec space, std::vector<Complex> amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.dim()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) + " != dim " +
                                    std::to_string(space_.dim()));
    }
}

double FieldVector::norm_squared() const {
    double total = 0;
    for (const auto &c : amps_) {
        total += std::norm(c);
    }
    return total;
}

Complex inner(const FieldVector &lhs, const FieldVector &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw std::invalid_argument("inner product of vectors with different dimensions");
    }
    Complex total{0};
    for (std::size_t n = 0; n < lhs.dim(); n++) {
        total += std::conj(lhs[n]) * rhs[n];
    }
    return total;
}

FockVector FockVector::from_amplitudes(HilbertSpec space, std::vector<Complex> amplitudes) {
    FieldVector raw(space, std::move(amplitudes));
    double norm2 = raw.norm_squared();
    if (!std::isfinite(norm2) || norm2 == 0) {
        throw std::invalid_argument("state amplitudes must be finite and not all zero");
    }
    double scale = 1 / std::sqrt(norm2);
    std::vector<Complex> amps(raw.amplitudes().begin(), raw.amplitudes().end());
    for (auto &c : amps) {
        c *= scale;
    }
    return FockVector(FieldVector(space, std::move(amps)));
}

FockVector FockVector::with_global_phase(double phase) const {
    std::vector<Complex> amps(amplitudes().begin(), amplitudes().end());
    Complex factor = std::polar(1.0, phase);
    for (auto &c : amps) {
        c *= factor;
    }
    return FockVector(FieldVector(space(), std::move(amps)));
}

FockVector FockVector::rotated(double angle) const {
    std::vector<Complex> amps(amplitudes().begin(), amplitudes().end());
    for (std::size_t n = 0; n < amps.size(); n++) {
        amps[n] *= std::polar(1.0, angle * double(n));
    }
    return FockVector(FieldVector(space(), std::move(amps)));
}

FockVector make_fock(std::size_t n, HilbertSpec space) {
    if (n >= space.dim()) {
        throw std::invalid_argument("Fock state |" + std::to_string(n) + "> is outside dim=" +
                                    std::to_string(space.dim()));
    }
    std::vector<Complex> amps(space.dim());
    amps[n] = 1;
    return FockVector::from_amplitudes(space, std::move(amps));
}

double coherent_leakage(Complex alpha, std::size_t dim) {
    double mean = std::norm(alpha);
    if (mean == 0) {
        return 0;
    }
    // Sum the Poisson tail directly in log space; no cancellation against 1.
    double log_mean = std::log(mean);
    double total = 0;
    for (std::size_t n = dim;; n++) {
        double term = std::exp(double(n) * log_mean - mean - std::lgamma(double(n) + 1));
        total += term;
        if (double(n) > mean && term <= 1e-30 * total) {
            break;
        }
        if (double(n) > mean && term == 0) {
            break;
        }
    }
    return std::min(total, 1.0);
}

FockVector make_coherent(Complex alpha, HilbertSpec space, double leakage_bound) {
    check_leakage(coherent_leakage(alpha, space.dim()), leakage_bound, space.dim(), "coherent state");
    std::vector<Complex> amps(space.dim());
    amps[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 1; n < amps.size(); n++) {
        amps[n] = amps[n - 1] * alpha / std::sqrt(double(n));
    }
    return FockVector::from_amplitudes(space, std::move(amps));
}

double squeezed_leakage(Complex alpha, double r, double theta, std::size_t dim) {
    // Extend the exactly normalized recurrence well past the truncation edge.
    std::size_t count = dim;
    while (true) {
        count = 2 * count + 64;
        auto c = squeezed_amplitudes(alpha, r, theta, count);
        double tail = 0;
        for (std::size_t n = dim; n < count; n++) {
            tail += std::norm(c[n]);
        }
        double last = std::norm(c[count - 1]) + std::norm(c[count - 2]);
        if (last <= 1e-30 * std::max(tail, 1e-300) || last < 1e-300 || count > (std::size_t{1} << 20)) {
            return std::min(tail, 1.0);
        }
    }
}

FockVector make_squeezed(Complex alpha, double r, double theta, HilbertSpec space, double leakage_bound) {
    if (!(r >= 0) || !std::isfinite(r)) {
        throw std::invalid_argument("squeeze magnitude r must be finite and non-negative");
    }
    check_leakage(squeezed_leakage(alpha, r, theta, space.dim()), leakage_bound, space.dim(), "squeezed state");
    return FockVector::from_amplitudes(space, squeezed_amplitudes(alpha, r, theta, space.dim()));
}

OperatorImage apply_ladder(const FieldVector &state, Ladder which) {
    std::size_t d = state.dim();
    std::vector<Complex> out(d);
    double dropped = 0;
    switch (which) {
        case Ladder::kLower:
            for (std::size_t n = 0; n + 1 < d; n++) {
                out[n] = std::sqrt(double(n + 1)) * state[n + 1];
            }
            break;
        case Ladder::kRaise:
            for (std::size_t n = 1; n < d; n++) {
                out[n] = std::sqrt(double(n)) * state[n - 1];
            }
            dropped = double(d) * std::norm(state[d - 1]);
            break;
        case Ladder::kNumber:
            for (std::size_t n = 0; n < d; n++) {
                out[n] = double(n) * state[n];
            }
            break;
    }
    return {FieldVector(state.space(), std::move(out)), dropped};
}

OperatorImage apply_sg(const FieldVector &state, SgShift which, int power) {
    if (power < 1 || power > 2) {
        throw std::invalid_argument("Susskind-Glogower power must be 1 or 2");
    }
    std::size_t d = state.dim();
    std::size_t k = std::size_t(power);
    std::vector<Complex> out(d);
    double dropped = 0;
    if (which == SgShift::kLower) {
        for (std::size_t n = 0; n + k < d; n++) {
            out[n] = state[n + k];
        }
    } else {
        for (std::size_t n = k; n < d; n++) {
            out[n] = state[n - k];
        }
        for (std::size_t n = d - k; n < d; n++) {
            dropped += std::norm(state[n]);
        }
    }
    return {FieldVector(state.space(), std::move(out)), dropped};
}

MomentKind MomentKind::a_pow(int k) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("a power must be 1 or 2");
    }
    return {Family::kAPow, k};
}

MomentKind MomentKind::adag_pow(int k) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("a^dag power must be 1 or 2");
    }
    return {Family::kADagPow, k};
}

MomentKind MomentKind::sg_raise_pow(int k) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("V^dag power must be 1 or 2");
    }
    return {Family::kSgRaisePow, k};
}

std::string MomentKind::name() const {
    switch (family) {
        case Family::kAPow:
            return "a^" + std::to_string(power);
        case Family::kADagPow:
            return "adag^" + std::to_string(power);
        case Family::kNumber:
            return "n";
        case Family::kSgRaisePow:
            return "sg_raise^" + std::to_string(power);
        case Family::kSgMixed:
            return "sg_mixed";
        case Family::kX:
            return "x";
        case Family::kX2:
            return "x2";
        case Family::kY:
            return "y";
        case Family::kY2:
            return "y2";
        case Family::kVarX:
            return "var_x";
        case Family::kVarY:
            return "var_y";
    }
    return "?";
}

MomentKind MomentKind::from_name(std::string_view name) {
    for (auto kind :
         {a_pow(1), a_pow(2), adag_pow(1), adag_pow(2), number(), sg_raise_pow(1), sg_raise_pow(2), sg_mixed(), x(),
          x2(), y(), y2(), var_x(), var_y()}) {
        if (kind.name() == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown moment kind '" + std::string(name) + "'");
}

Complex expect_moment(const FockVector &state, MomentKind kind) {
    const FieldVector &psi = state.vector();
    auto ladder_power = [&](Ladder which, int k) {
        FieldVector v = psi;
        for (int i = 0; i < k; i++) {
            v = apply_ladder(v, which).vector;
        }
        return inner(psi, v);
    };
    auto a1 = [&] { return ladder_power(Ladder::kLower, 1); };
    auto a2 = [&] { return ladder_power(Ladder::kLower, 2); };
    auto n = [&] { return inner(psi, apply_ladder(psi, Ladder::kNumber).vector); };

    switch (kind.family) {
        case MomentKind::Family::kAPow:
            return ladder_power(Ladder::kLower, kind.power);
        case MomentKind::Family::kADagPow:
            return ladder_power(Ladder::kRaise, kind.power);
        case MomentKind::Family::kNumber:
            return n();
        case MomentKind::Family::kSgRaisePow:
            return inner(psi, apply_sg(psi, SgShift::kRaise, kind.power).vector);
        case MomentKind::Family::kSgMixed: {
            FieldVector v = apply_sg(psi, SgShift::kLower, 2).vector;
            v = apply_sg(v, SgShift::kRaise, 2).vector;
            v = apply_sg(v, SgShift::kRaise, 2).vector;
            return inner(psi, v);
        }
        case MomentKind::Family::kX:
            return 2 * a1().real();
        case MomentKind::Family::kY:
            return 2 * a1().imag();
        case MomentKind::Family::kX2:
            return 2 * a2().real() + 2 * n().real() + 1;
        case MomentKind::Family::kY2:
            return -2 * a2().real() + 2 * n().real() + 1;
        case MomentKind::Family::kVarX: {
            double mean = 2 * a1().real();
            return 2 * a2().real() + 2 * n().real() + 1 - mean * mean;
        }
        case MomentKind::Family::kVarY: {
            double mean = 2 * a1().imag();
            return -2 * a2().real() + 2 * n().real() + 1 - mean * mean;
        }
    }
    throw std::logic_error("unhandled moment kind");
}

}  // namespace fieldprobe
