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

#include "fieldprobe/transforms.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fieldprobe/errors.h"
#include "transform_plans.h"

namespace fieldprobe {

using std::numbers::pi;

double fresnel_closed_form(double a, double b) {
    if (!(a > 0)) {
        throw std::invalid_argument("Fresnel parameter A must be positive");
    }
    double phase = a * b * b / 4;
    return a * b / 4 * std::sqrt(pi * a / 2) * (std::cos(phase) + std::sin(phase));
}

double dirichlet_closed_form(double a, double b) {
    if (!(a >= 0) || !(b >= 0)) {
        throw std::invalid_argument("Dirichlet integral frequencies must be non-negative");
    }
    if (a == 0 || b > a) {
        return 0;
    }
    if (a == b) {
        return pi / 4;
    }
    return pi / 2;
}

SpectralAtom SpectralAtom::sine(double frequency) {
    return SpectralAtom{{{frequency, 1.0}}};
}

SpectralAtom SpectralAtom::sine_cosine(double a, double b) {
    double sum = a + b;
    double diff = a - b;
    if (sum == diff) {
        return SpectralAtom{{{sum, 1.0}}};
    }
    return SpectralAtom{{{sum, 0.5}, {diff, 0.5}}};
}

SpectralAtom SpectralAtom::sine_difference(double plus, double minus) {
    return SpectralAtom{{{plus, 1.0}, {minus, -1.0}}};
}

double SpectralAtom::value_at(double t) const {
    double total = 0;
    for (const auto &term : terms) {
        total += term.weight * std::sin(term.frequency * t);
    }
    return total;
}

double SpectralAtom::max_frequency() const {
    double top = 0;
    for (const auto &term : terms) {
        top = std::max(top, std::abs(term.frequency));
    }
    return top;
}

void TailPolicy::validate() const {
    if (!(t_max > 0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("tail policy t_max must be positive");
    }
    if (damping_rates.empty()) {
        throw std::invalid_argument("tail policy needs at least one damping rate");
    }
    for (std::size_t k = 0; k < damping_rates.size(); k++) {
        if (!(damping_rates[k] > 0)) {
            throw std::invalid_argument("damping rates must be positive");
        }
        if (k > 0 && !(damping_rates[k] < damping_rates[k - 1])) {
            throw std::invalid_argument("damping rates must be strictly decreasing");
        }
    }
    if (extrapolation_order < 0 || std::size_t(extrapolation_order) >= damping_rates.size()) {
        throw std::invalid_argument("extrapolation order must be below the number of damping rates");
    }
    if (!(taper_fraction > 0 && taper_fraction < 1)) {
        throw std::invalid_argument("taper fraction must lie in (0, 1)");
    }
    if (!(tolerance > 0)) {
        throw std::invalid_argument("tail tolerance must be positive");
    }
}

TransformSpec TransformSpec::fresnel(double a, Backend backend) {
    TransformSpec spec;
    spec.kernel = Kernel::kFresnel;
    spec.fresnel_a = a;
    spec.backend = backend;
    spec.validate();
    return spec;
}

TransformSpec TransformSpec::dirichlet(Backend backend) {
    TransformSpec spec;
    spec.kernel = Kernel::kDirichlet;
    spec.backend = backend;
    return spec;
}

double TransformSpec::sine_transform(double frequency) const {
    if (kernel == Kernel::kFresnel) {
        return fresnel_closed_form(fresnel_a, frequency);
    }
    double magnitude = dirichlet_closed_form(std::abs(frequency), 0);
    return frequency < 0 ? -magnitude : magnitude;
}

double TransformSpec::atom_transform(const SpectralAtom &atom) const {
    double total = 0;
    for (const auto &term : atom.terms) {
        total += term.weight * sine_transform(term.frequency);
    }
    return total;
}

void TransformSpec::validate() const {
    if (kernel == Kernel::kFresnel && !(fresnel_a > 0)) {
        throw std::invalid_argument("Fresnel parameter A must be positive");
    }
    if (tail) {
        tail->validate();
    }
}

std::string to_string(TransformSpec::Kernel kernel) {
    return kernel == TransformSpec::Kernel::kFresnel ? "fresnel" : "dirichlet";
}

std::string to_string(TransformSpec::Backend backend) {
    return backend == TransformSpec::Backend::kComponentFit ? "component_fit" : "direct_quadrature";
}

TailPolicy default_tail_policy(const TransformSpec &spec) {
    TailPolicy tail;
    tail.t_max = spec.kernel == TransformSpec::Kernel::kFresnel ? 40 * spec.fresnel_a : 2000.0;
    tail.damping_rates = {1 / tail.t_max, 1 / (4 * tail.t_max), 1 / (16 * tail.t_max)};
    tail.extrapolation_order = 2;
    return tail;
}

TransformPlan::TransformPlan(const TimeGrid &grid, const TransformSpec &spec, std::span<const SpectralAtom> dictionary)
    : spec_(spec), grid_(grid.samples().begin(), grid.samples().end()) {
    spec_.validate();
    if (spec_.backend == TransformSpec::Backend::kComponentFit) {
        if (dictionary.empty()) {
            throw std::invalid_argument("component-fit transform requires a frequency dictionary");
        }
        auto plan = build_fit_plan(grid_, dictionary);
        attach_kernel(*plan, spec_);
        fit_ = std::move(plan);
    } else {
        if (!spec_.tail) {
            spec_.tail = default_tail_policy(spec_);
        }
        quad_ = build_quadrature_plan(grid_, spec_, *spec_.tail);
    }
}

std::span<const double> TransformPlan::weights() const {
    if (fit_) {
        return fit_->weights;
    }
    return quad_->main;
}

namespace {

Complex apply_weights(std::span<const double> w, std::span<const Complex> samples) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < w.size(); i++) {
        re += w[i] * samples[i].real();
        im += w[i] * samples[i].imag();
    }
    return {re, im};
}

double weighted_std_error(std::span<const double> w, const PolarizationSignal &signal) {
    double var = 0;
    for (std::size_t i = 0; i < w.size(); i++) {
        double s2 = signal.std_error_re[i] * signal.std_error_re[i] + signal.std_error_im[i] * signal.std_error_im[i];
        var += w[i] * w[i] * s2;
    }
    return std::sqrt(var);
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        out[i] = a[i] - b[i];
    }
    return out;
}

}  // namespace

TransformResult TransformPlan::apply(const PolarizationSignal &signal) const {
    if (signal.grid.size() != grid_.size() ||
        !std::equal(grid_.begin(), grid_.end(), signal.grid.samples().begin())) {
        throw std::invalid_argument("signal grid does not match the transform plan grid");
    }
    TransformResult result{};
    result.report.backend = spec_.backend;
    if (fit_) {
        auto amps = fit_->solve(signal.values);
        Complex total{0};
        for (std::size_t j = 0; j < amps.size(); j++) {
            total += amps[j] * fit_->atom_transforms[Eigen::Index(j)];
        }
        result.value = total;
        result.report.atom_count = amps.size();
        result.report.fit_residual = fit_->residual(signal.values, amps);
        result.report.std_error = weighted_std_error(fit_->weights, signal);
        return result;
    }

    const auto &q = *quad_;
    result.value = apply_weights(q.main, signal.values);
    result.report.t_max = q.tail.t_max;
    result.report.damping_rates = q.rates;
    for (const auto &w : q.per_rate) {
        result.report.damped_values.push_back(apply_weights(w, signal.values));
    }
    auto extrap_w = difference(q.main, q.lower);
    auto tail_w = difference(q.main, q.alt);
    result.report.extrapolation_delta = std::abs(apply_weights(extrap_w, signal.values));
    result.report.tail_delta = std::abs(apply_weights(tail_w, signal.values));
    result.report.std_error = weighted_std_error(q.main, signal);

    double allowance = q.tail.tolerance * (1 + std::abs(result.value));
    bool extrap_ok = result.report.extrapolation_delta <= allowance + 5 * weighted_std_error(extrap_w, signal);
    bool tail_ok = result.report.tail_delta <= allowance + 5 * weighted_std_error(tail_w, signal);
    if (!extrap_ok || !tail_ok) {
        std::stringstream ss;
        ss << "direct quadrature did not converge: extrapolation delta " << result.report.extrapolation_delta
           << ", tail delta " << result.report.tail_delta << ", allowance " << allowance;
        std::vector<double> re, im;
        for (const auto &v : result.report.damped_values) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        throw ConvergenceError(ss.str(), q.rates, std::move(re), std::move(im));
    }
    return result;
}

TransformResult transform_signal(const PolarizationSignal &signal, const TransformSpec &spec,
                                 std::span<const SpectralAtom> dictionary) {
    return TransformPlan(signal.grid, spec, dictionary).apply(signal);
}

}  // namespace fieldprobe
