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

#ifndef FIELDPROBE_HARNESS_H
#define FIELDPROBE_HARNESS_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fieldprobe/identities.h"
#include "fieldprobe/reconstruct.h"

namespace fieldprobe {

struct StateConfig {
    enum class Kind { kFock, kCoherent, kSqueezed, kAmplitudes };
    Kind kind = Kind::kCoherent;
    std::size_t n = 0;  // Fock
    Complex alpha;      // coherent, squeezed
    double r = 0;       // squeezed
    double theta = 0;   // squeezed
    std::vector<Complex> amplitudes;
};
std::string to_string(StateConfig::Kind kind);

/// Either a uniform grid or explicit times.
struct GridConfig {
    double t_start = 0;
    double t_end = 0;
    std::size_t points = 0;
    std::vector<double> times;

    TimeGrid build() const;
};

struct TransformRequest {
    MomentKind target = MomentKind::adag_pow(1);
    TransformSpec::Backend backend = TransformSpec::Backend::kComponentFit;
    std::optional<TailPolicy> tail;

    TransformSpec spec() const;
};

struct SweepConfig {
    enum class Parameter { kAlphaAbs, kAlphaArg, kR, kShots };
    Parameter parameter = Parameter::kAlphaAbs;
    std::vector<double> values;
};
std::string to_string(SweepConfig::Parameter parameter);

struct OutputConfig {
    enum class Format { kCsv, kJson, kBoth };
    std::string dir = ".";
    Format format = Format::kBoth;
    bool signals = true;
    bool plot_data = true;

    bool wants_csv() const {
        return format != Format::kJson;
    }
    bool wants_json() const {
        return format != Format::kCsv;
    }
};
std::string to_string(OutputConfig::Format format);
OutputConfig::Format parse_format(std::string_view text);

/// A validated experiment. Protocol signals are all declared (transition, entry)
/// combinations, in the order one-photon excited, one-photon ground, two-photon
/// excited, two-photon ground.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    StateConfig state;
    std::vector<SignalSource> signals;
    /// Absent: default_protocol_grid per signal (extended to the quadrature cutoff when needed).
    std::optional<GridConfig> grid;
    std::optional<GridConfig> two_photon_grid;
    std::optional<ShotConfig> noise;
    SignalGenerator generator = SignalGenerator::kClosedForm;
    std::vector<TransformRequest> transforms;
    bool squeezing = false;
    /// Absent: the oracle <n> of the input state.
    std::optional<double> n_mean;
    std::optional<SweepConfig> sweep;
    std::size_t workers = 1;
    OutputConfig outputs;

    /// The grid used for signals of `source`.
    TimeGrid grid_for(SignalSource source) const;
};

/// Parses the JSON config document, applies defaults and validates it.
/// Throws ConfigError with a line/column or field-path diagnostic.
ExperimentConfig parse_config(std::string_view text);
/// Reads and parses a config file. Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string &path);
/// Normalized config document (defaults filled in), as echoed in result files.
std::string config_echo_json(const ExperimentConfig &config);

/// A pipeline failure recorded in place of an output.
struct StageError {
    enum class Class { kConfig, kNumeric };
    std::string stage;  // "state", "signal", "transform", "squeezing"
    Class error_class = Class::kNumeric;
    std::string message;
};

struct SignalRecord {
    SignalSource source;
    PolarizationSignal signal;
};

/// Exactly one per requested target: an estimate or the error that prevented it.
struct EstimateRecord {
    MomentKind target = MomentKind::adag_pow(1);
    std::optional<MomentEstimate> estimate;
    std::optional<StageError> error;
};

struct PointResult {
    std::size_t index = 0;
    std::optional<double> parameter;
    std::vector<SignalRecord> signals;
    std::vector<EstimateRecord> estimates;
    std::optional<SqueezingReport> squeezing;
    /// Failures not attached to a single estimate (state, signal or squeezing stage).
    std::vector<StageError> errors;
};

struct RunResult {
    ExperimentConfig config;
    std::vector<PointResult> points;
    /// Wall-clock seconds; reported on the console only so result files stay reproducible.
    double seconds = 0;

    /// Exit-code class of the worst recorded failure, if any.
    std::optional<StageError::Class> worst_failure() const;
};

/// Executes the experiment. Sweep points run on up to config.workers threads;
/// results depend only on (config, seed).
RunResult run(const ExperimentConfig &config);

/// Writes the requested files under config.outputs.dir and returns their paths
/// in write order. Throws IoError when a file cannot be written.
std::vector<std::string> emit(const RunResult &result);

/// Serializations used by emit.
std::string signal_csv(const PolarizationSignal &signal);
std::string result_json(const RunResult &result);
std::string estimates_csv(const RunResult &result);
std::string plot_data_csv(const RunResult &result);

/// Numeric content of a result document, read back for round-trip checks.
struct ParsedEstimate {
    std::string kind;
    std::string status;
    Complex value;
    double stat_error = 0;
    std::optional<Complex> oracle;
    std::optional<double> abs_error;
};
struct ParsedPoint {
    std::optional<double> parameter;
    std::vector<ParsedEstimate> estimates;
    std::optional<SqueezingReport> squeezing;
};
std::vector<ParsedPoint> read_result_json(std::string_view text);

/// Calibration constants with the K2 provenance record; `error` is non-empty when calibration failed.
std::string calibration_json(const CalibrationConstants &constants, const std::string &error = "");
std::string identities_csv(const std::vector<IdentityCheck> &checks);

/// 17 significant digits ("%.17g"), the precision used in every output file.
std::string format_number(double value);

}  // namespace fieldprobe

#endif
