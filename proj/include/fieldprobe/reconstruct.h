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

#ifndef FIELDPROBE_RECONSTRUCT_H
#define FIELDPROBE_RECONSTRUCT_H

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fieldprobe/errors.h"
#include "fieldprobe/transforms.h"

namespace fieldprobe {

/// Fresnel parameters that turn the excited-atom signals into first and second moments.
inline constexpr double kOnePhotonFresnelA = 4 * std::numbers::pi;
inline constexpr double kTwoPhotonFresnelA = 8 * std::numbers::pi;

/// Where the two-photon constant came from, and how well the references agreed.
struct K2Provenance {
    enum class Source { kAnalytic, kCalibrated };
    Source source = Source::kAnalytic;
    /// Candidate obtained by composing the signal prefactor with the per-term Fresnel limit.
    Complex analytic_candidate;
    /// Candidate printed in the original derivation; kept for comparison only.
    Complex printed_candidate;
    std::vector<std::string> reference_labels;
    /// transform / oracle <adag^2> for each reference.
    std::vector<Complex> ratios;
    /// RMS of |ratio - K2| / |K2| over the references (0 for the analytic source).
    double dispersion = 0;
};

struct CalibrationConstants {
    Complex k1;  // one-photon Fresnel, A = 4 pi
    Complex k2;  // two-photon Fresnel, A = 8 pi
    Complex kp;  // Dirichlet, both orders
    K2Provenance k2_provenance;

    /// K1 = -i sqrt2 pi^2, KP = i pi/2 and the analytic K2 = -i 4 pi^2.
    static CalibrationConstants standard();
};

/// How an estimate was produced.
struct EstimateMethod {
    TransformSpec spec;
    Transition transition = Transition::kOnePhoton;
    AtomEntry entry = AtomEntry::kExcited;
    MomentKind kind = MomentKind::adag_pow(1);
};

struct MomentEstimate {
    MomentKind kind = MomentKind::adag_pow(1);
    Complex value;
    /// Propagated shot noise (0 for noise-free signals).
    double stat_error = 0;
    EstimateMethod method;
    std::optional<Complex> oracle_value;
    /// |value - oracle_value| when the oracle is present.
    std::optional<double> abs_error;
    /// Second-order phase only: <(V^dag)^4 V^2>, the quantity the protocol
    /// approximates by <(V^dag)^2> at large intensity.
    std::optional<Complex> exact_target_oracle;
    TransformReport report;
    /// Dictionary atoms dropped because a frequency lies above the grid's Nyquist limit.
    std::size_t atoms_above_nyquist = 0;

    /// Fills oracle_value, abs_error and (for second-order phase) exact_target_oracle.
    void attach_oracle(const FockVector &state);
    /// Combined error budget: hypot(stat_error, abs_error) (stat_error alone without an oracle).
    double uncertainty() const;
};

/// The signal each target is read from: (transition, entry).
struct SignalSource {
    Transition transition;
    AtomEntry entry;
};
/// adag^1, adag^2, sg_raise^1 and sg_raise^2 are supported; anything else throws std::invalid_argument.
SignalSource required_signal(MomentKind target);
/// Transform used by default for a target (Fresnel with the matching A, or Dirichlet).
TransformSpec default_transform(MomentKind target,
                                TransformSpec::Backend backend = TransformSpec::Backend::kComponentFit);
/// The constant that divides the transform for `target`: K1, K2 or KP.
Complex calibration_for(MomentKind target, const CalibrationConstants &constants);

/// Paired atoms for the signal's Fock-basis sums over coherences c*_{n+s} c_n, n < photon_cap - s.
/// Atoms with a frequency above pi / grid.max_spacing() are dropped and counted.
struct Dictionary {
    std::vector<SpectralAtom> atoms;
    std::size_t above_nyquist = 0;
};
Dictionary signal_dictionary(SignalSource source, std::size_t photon_cap, const TimeGrid &grid);

/// Uniform grid on [0, t_end] fine enough to sample every frequency of the dictionary
/// for `photon_cap` at four points per period or better.
TimeGrid default_protocol_grid(SignalSource source, std::size_t photon_cap, double t_end = 200);

/// Reusable estimator for one target on one grid: the transform plan is built
/// once and applied to any number of signals (e.g. repeated shot draws).
class MomentEstimator {
   public:
    MomentEstimator(MomentKind target, const TimeGrid &grid, std::size_t photon_cap, TransformSpec spec,
                    CalibrationConstants constants = CalibrationConstants::standard());

    /// Throws std::invalid_argument on provenance mismatch and ConvergenceError on
    /// quadrature non-convergence.
    MomentEstimate estimate(const PolarizationSignal &signal) const;

    const TransformPlan &plan() const {
        return plan_;
    }

   private:
    MomentKind target_;
    SignalSource source_;
    Complex constant_;
    Dictionary dictionary_;
    TransformPlan plan_;
};

/// <adag> from an EXCITED / ONE_PHOTON signal with the Fresnel kernel at A = 4 pi.
MomentEstimate estimate_adagger(const PolarizationSignal &signal, const TransformSpec &spec,
                                const CalibrationConstants &constants = CalibrationConstants::standard());
/// <adag^2> from an EXCITED / TWO_PHOTON signal with the Fresnel kernel at A = 8 pi.
MomentEstimate estimate_adagger2(const PolarizationSignal &signal, const TransformSpec &spec,
                                 const CalibrationConstants &constants = CalibrationConstants::standard());
/// <(V^dag)^order> from a GROUND signal (ONE_PHOTON for order 1, TWO_PHOTON for order 2), Dirichlet kernel.
MomentEstimate estimate_sg(const PolarizationSignal &signal, int order, const TransformSpec &spec,
                           const CalibrationConstants &constants = CalibrationConstants::standard());

struct SqueezingReport {
    enum class NMeanSource { kOracle, kUserSupplied };
    double mean_x = 0;
    double mean_y = 0;
    double var_x = 0;
    double var_y = 0;
    /// Worst-case propagation of the estimate uncertainties into each variance.
    double var_x_error = 0;
    double var_y_error = 0;
    bool squeezed = false;
    double n_mean = 0;
    NMeanSource n_mean_source = NMeanSource::kOracle;
};
std::string to_string(SqueezingReport::NMeanSource source);

/// Variances of X = a + a^dag and Y = -i(a - a^dag) from <adag>, <adag^2> and <n>:
///   var_x =  2 Re<a^2> + 2n + 1 - (2 Re<a>)^2
///   var_y = -2 Re<a^2> + 2n + 1 - (2 Im<a>)^2
/// Throws NumericError when a variance falls below -1e-6.
SqueezingReport squeezing_report(const MomentEstimate &a1, const MomentEstimate &a2, double n_mean,
                                 SqueezingReport::NMeanSource source);

/// Transform settings shared by every calibration reference.
struct CalibrationDesign {
    TransformSpec::Backend backend = TransformSpec::Backend::kComponentFit;
    /// Defaults to default_protocol_grid for the reference dimension.
    std::optional<TimeGrid> grid;
};

struct CalibrationReference {
    std::string label;
    FockVector state;
};

/// Raised when the references disagree on K2 by more than 5% (RMS relative).
struct CalibrationError : NumericError {
    CalibrationError(const std::string &message, K2Provenance provenance)
        : NumericError(message), provenance(std::move(provenance)) {
    }
    K2Provenance provenance;
};

/// K2 as the least-squares complex ratio transform / oracle <adag^2> over the references.
/// Throws std::invalid_argument on an empty list or an uninformative reference (|<adag^2>| < 1),
/// and CalibrationError when the dispersion exceeds 5%.
CalibrationConstants calibrate_k2(const std::vector<CalibrationReference> &references,
                                  const CalibrationDesign &design = {});

/// Coherent 3, coherent 2 e^{i pi/6}, squeezed (alpha 2, r 0.3) at D = 128.
std::vector<CalibrationReference> default_calibration_references();

}  // namespace fieldprobe

#endif
