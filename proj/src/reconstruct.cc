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

#include "fieldprobe/reconstruct.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fieldprobe {

using std::numbers::pi;

namespace {

bool is_target(MomentKind kind) {
    return (kind.family == MomentKind::Family::kADagPow || kind.family == MomentKind::Family::kSgRaisePow) &&
           (kind.power == 1 || kind.power == 2);
}

Transition transition_for_power(int power) {
    return power == 1 ? Transition::kOnePhoton : Transition::kTwoPhoton;
}

const TransformSpec &checked_spec(MomentKind target, const TransformSpec &spec) {
    if (target.family == MomentKind::Family::kSgRaisePow) {
        if (spec.kernel != TransformSpec::Kernel::kDirichlet) {
            throw std::invalid_argument(target.name() + " is read out with the Dirichlet kernel");
        }
        return spec;
    }
    double want = target.power == 1 ? kOnePhotonFresnelA : kTwoPhotonFresnelA;
    if (spec.kernel != TransformSpec::Kernel::kFresnel || std::abs(spec.fresnel_a - want) > 1e-12 * want) {
        std::stringstream ss;
        ss << target.name() << " is read out with the Fresnel kernel at A = " << (target.power == 1 ? "4" : "8")
           << " pi";
        throw std::invalid_argument(ss.str());
    }
    return spec;
}

double dictionary_max_frequency(SignalSource source, std::size_t photon_cap) {
    std::size_t s = photons_exchanged(source.transition);
    if (photon_cap <= s) {
        throw std::invalid_argument("photon cap too small for a " + to_string(source.transition) + " signal");
    }
    std::size_t n = photon_cap - s - 1;
    if (source.entry == AtomEntry::kExcited) {
        return delta_frequencies(n, source.transition).plus;
    }
    double lower = n >= s ? rabi_frequency(n - s, source.transition) : 0.0;
    return rabi_frequency(n, source.transition) + lower;
}

}  // namespace

CalibrationConstants CalibrationConstants::standard() {
    CalibrationConstants k;
    k.k1 = Complex{0, -std::sqrt(2.0) * pi * pi};
    k.kp = Complex{0, pi / 2};
    k.k2_provenance.source = K2Provenance::Source::kAnalytic;
    k.k2_provenance.analytic_candidate = Complex{0, -4 * pi * pi};
    k.k2_provenance.printed_candidate = Complex{0, -8 * pi * pi * pi * pi};
    k.k2 = k.k2_provenance.analytic_candidate;
    return k;
}

void MomentEstimate::attach_oracle(const FockVector &state) {
    oracle_value = expect_moment(state, kind);
    abs_error = std::abs(value - *oracle_value);
    if (kind == MomentKind::sg_raise_pow(2)) {
        exact_target_oracle = expect_moment(state, MomentKind::sg_mixed());
    }
}

double MomentEstimate::uncertainty() const {
    return std::hypot(stat_error, abs_error.value_or(0.0));
}

SignalSource required_signal(MomentKind target) {
    if (!is_target(target)) {
        throw std::invalid_argument("moment " + target.name() + " is not reconstructed by the protocol");
    }
    AtomEntry entry = target.family == MomentKind::Family::kADagPow ? AtomEntry::kExcited : AtomEntry::kGround;
    return {transition_for_power(target.power), entry};
}

TransformSpec default_transform(MomentKind target, TransformSpec::Backend backend) {
    auto source = required_signal(target);
    if (source.entry == AtomEntry::kGround) {
        return TransformSpec::dirichlet(backend);
    }
    return TransformSpec::fresnel(target.power == 1 ? kOnePhotonFresnelA : kTwoPhotonFresnelA, backend);
}

Complex calibration_for(MomentKind target, const CalibrationConstants &constants) {
    auto source = required_signal(target);
    if (source.entry == AtomEntry::kGround) {
        return constants.kp;
    }
    return target.power == 1 ? constants.k1 : constants.k2;
}

Dictionary signal_dictionary(SignalSource source, std::size_t photon_cap, const TimeGrid &grid) {
    std::size_t s = photons_exchanged(source.transition);
    if (photon_cap <= s) {
        throw std::invalid_argument("photon cap too small for a " + to_string(source.transition) + " signal");
    }
    double spacing = grid.max_spacing();
    double nyquist = spacing > 0 ? pi / spacing : 0.0;
    Dictionary out;
    for (std::size_t n = 0; n + s < photon_cap; n++) {
        SpectralAtom atom;
        if (source.entry == AtomEntry::kExcited) {
            auto pair = delta_frequencies(n, source.transition);
            atom = SpectralAtom::sine_difference(pair.plus, pair.minus);
        } else {
            double lower = n >= s ? rabi_frequency(n - s, source.transition) : 0.0;
            atom = SpectralAtom::sine_cosine(rabi_frequency(n, source.transition), lower);
        }
        if (atom.max_frequency() > nyquist) {
            out.above_nyquist++;
            continue;
        }
        out.atoms.push_back(std::move(atom));
    }
    return out;
}

TimeGrid default_protocol_grid(SignalSource source, std::size_t photon_cap, double t_end) {
    double step = pi / (2 * dictionary_max_frequency(source, photon_cap));
    auto intervals = std::size_t(std::ceil(t_end / step));
    return TimeGrid::uniform(0, t_end, intervals + 1);
}

MomentEstimator::MomentEstimator(MomentKind target, const TimeGrid &grid, std::size_t photon_cap,
                                 TransformSpec spec, CalibrationConstants constants)
    : target_(target),
      source_(required_signal(target)),
      constant_(calibration_for(target, constants)),
      dictionary_(spec.backend == TransformSpec::Backend::kComponentFit
                      ? signal_dictionary(source_, photon_cap, grid)
                      : Dictionary{}),
      plan_(grid, checked_spec(target, spec), dictionary_.atoms) {
    if (!(std::abs(constant_) > 0)) {
        throw std::invalid_argument("calibration constant for " + target.name() + " is zero");
    }
}

MomentEstimate MomentEstimator::estimate(const PolarizationSignal &signal) const {
    if (signal.meta.transition != source_.transition || signal.meta.entry != source_.entry) {
        throw std::invalid_argument("provenance mismatch: " + target_.name() + " needs a " + to_string(source_.entry) +
                                    "/" + to_string(source_.transition) + " signal, got " +
                                    to_string(signal.meta.entry) + "/" + to_string(signal.meta.transition));
    }
    auto transformed = plan_.apply(signal);
    MomentEstimate out;
    out.kind = target_;
    out.value = transformed.value / constant_;
    out.stat_error = transformed.report.std_error / std::abs(constant_);
    out.method = EstimateMethod{plan_.spec(), source_.transition, source_.entry, target_};
    out.report = std::move(transformed.report);
    out.atoms_above_nyquist = dictionary_.above_nyquist;
    return out;
}

namespace {

MomentEstimate estimate_from(MomentKind target, const PolarizationSignal &signal, const TransformSpec &spec,
                             const CalibrationConstants &constants) {
    return MomentEstimator(target, signal.grid, signal.meta.photon_cap, spec, constants).estimate(signal);
}

}  // namespace

MomentEstimate estimate_adagger(const PolarizationSignal &signal, const TransformSpec &spec,
                                const CalibrationConstants &constants) {
    return estimate_from(MomentKind::adag_pow(1), signal, spec, constants);
}

MomentEstimate estimate_adagger2(const PolarizationSignal &signal, const TransformSpec &spec,
                                 const CalibrationConstants &constants) {
    return estimate_from(MomentKind::adag_pow(2), signal, spec, constants);
}

MomentEstimate estimate_sg(const PolarizationSignal &signal, int order, const TransformSpec &spec,
                           const CalibrationConstants &constants) {
    if (order != 1 && order != 2) {
        throw std::invalid_argument("phase moment order must be 1 or 2");
    }
    return estimate_from(MomentKind::sg_raise_pow(order), signal, spec, constants);
}

std::string to_string(SqueezingReport::NMeanSource source) {
    return source == SqueezingReport::NMeanSource::kOracle ? "oracle" : "user_supplied";
}

SqueezingReport squeezing_report(const MomentEstimate &a1, const MomentEstimate &a2, double n_mean,
                                 SqueezingReport::NMeanSource source) {
    if (a1.kind != MomentKind::adag_pow(1) || a2.kind != MomentKind::adag_pow(2)) {
        throw std::invalid_argument("squeezing report needs <adag^1> and <adag^2> estimates");
    }
    if (!(n_mean >= 0) || !std::isfinite(n_mean)) {
        throw std::invalid_argument("mean photon number must be finite and non-negative");
    }
    Complex a = std::conj(a1.value);
    Complex a_sq = std::conj(a2.value);
    SqueezingReport r;
    r.n_mean = n_mean;
    r.n_mean_source = source;
    r.mean_x = 2 * a.real();
    r.mean_y = 2 * a.imag();
    r.var_x = 2 * a_sq.real() + 2 * n_mean + 1 - r.mean_x * r.mean_x;
    r.var_y = -2 * a_sq.real() + 2 * n_mean + 1 - r.mean_y * r.mean_y;

    double d1 = a1.uncertainty();
    double d2 = a2.uncertainty();
    r.var_x_error = 2 * d2 + 4 * (2 * std::abs(a.real()) * d1 + d1 * d1);
    r.var_y_error = 2 * d2 + 4 * (2 * std::abs(a.imag()) * d1 + d1 * d1);

    if (r.var_x < -1e-6 || r.var_y < -1e-6) {
        std::stringstream ss;
        ss.precision(17);
        ss << "negative quadrature variance (var_x = " << r.var_x << ", var_y = " << r.var_y
           << "); the moment calibration is inconsistent";
        throw NumericError(ss.str());
    }
    r.squeezed = std::min(r.var_x, r.var_y) < 1;
    return r;
}

CalibrationConstants calibrate_k2(const std::vector<CalibrationReference> &references,
                                  const CalibrationDesign &design) {
    if (references.empty()) {
        throw std::invalid_argument("K2 calibration needs at least one reference state");
    }
    const auto target = MomentKind::adag_pow(2);
    const SignalSource source{Transition::kTwoPhoton, AtomEntry::kExcited};
    auto spec = default_transform(target, design.backend);
    auto k = CalibrationConstants::standard();
    K2Provenance prov = k.k2_provenance;
    prov.source = K2Provenance::Source::kCalibrated;

    Complex num{0};
    double den = 0;
    std::vector<Complex> oracles;
    for (const auto &ref : references) {
        Complex oracle = expect_moment(ref.state, target);
        if (std::abs(oracle) < 1) {
            std::stringstream ss;
            ss << "reference '" << ref.label << "' has |<adag^2>| = " << std::abs(oracle)
               << " < 1 and cannot calibrate K2";
            throw std::invalid_argument(ss.str());
        }
        double t_end = 200;
        if (design.backend == TransformSpec::Backend::kDirectQuadrature) {
            t_end = std::max(t_end, default_tail_policy(spec).t_max);
        }
        TimeGrid grid = design.grid ? *design.grid : default_protocol_grid(source, ref.state.dim(), t_end);
        auto signal = signal_closed_form(ref.state, grid, source.transition, source.entry);
        auto dictionary = spec.backend == TransformSpec::Backend::kComponentFit
                              ? signal_dictionary(source, ref.state.dim(), grid)
                              : Dictionary{};
        Complex transformed = TransformPlan(grid, spec, dictionary.atoms).apply(signal).value;
        prov.reference_labels.push_back(ref.label);
        prov.ratios.push_back(transformed / oracle);
        num += std::conj(oracle) * transformed;
        den += std::norm(oracle);
        oracles.push_back(oracle);
    }
    Complex k2 = num / den;
    double spread = 0;
    for (const auto &ratio : prov.ratios) {
        spread += std::norm(ratio - k2);
    }
    prov.dispersion = std::sqrt(spread / double(prov.ratios.size())) / std::abs(k2);
    if (!(prov.dispersion <= 0.05)) {
        std::stringstream ss;
        ss.precision(6);
        ss << "K2 references disagree: dispersion " << prov.dispersion * 100 << "% > 5%";
        throw CalibrationError(ss.str(), prov);
    }
    k.k2 = k2;
    k.k2_provenance = prov;
    return k;
}

std::vector<CalibrationReference> default_calibration_references() {
    HilbertSpec space(128);
    return {
        {"coherent alpha=3", make_coherent(3.0, space)},
        {"coherent alpha=2 e^{i pi/6}", make_coherent(std::polar(2.0, pi / 6), space)},
        {"squeezed alpha=2 r=0.3", make_squeezed(2.0, 0.3, 0.0, space)},
    };
}

}  // namespace fieldprobe
