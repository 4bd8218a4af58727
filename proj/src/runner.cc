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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <thread>

#include "fieldprobe/harness.h"
#include "fieldprobe/shots.h"
#include "harness_internal.h"

namespace fieldprobe {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for the shots of one signal at one sweep point.
std::uint64_t signal_seed(std::uint64_t seed, std::size_t point, std::size_t signal) {
    return splitmix64(splitmix64(splitmix64(seed) ^ point) ^ signal);
}

StageError stage_error(const std::string &stage, const std::exception &e) {
    bool config = dynamic_cast<const std::invalid_argument *>(&e) != nullptr;
    return {stage, config ? StageError::Class::kConfig : StageError::Class::kNumeric, e.what()};
}

struct PreparedTransform {
    TransformRequest request;
    SignalSource source;
    std::shared_ptr<const MomentEstimator> estimator;
    std::optional<StageError> error;
};

class Runner {
   public:
    explicit Runner(const ExperimentConfig &cfg) : cfg_(cfg) {
        for (const auto &source : cfg_.signals) {
            grids_.push_back(cfg_.grid_for(source));
        }
        for (const auto &request : cfg_.transforms) {
            PreparedTransform t{request, required_signal(request.target), nullptr, std::nullopt};
            try {
                t.estimator = std::make_shared<const MomentEstimator>(request.target, grid_of(t.source), cfg_.dim,
                                                                      request.spec());
            } catch (const std::exception &e) {
                t.error = stage_error("transform", e);
            }
            transforms_.push_back(std::move(t));
        }
    }

    PointResult run_point(std::size_t index) const {
        PointResult p;
        p.index = index;
        StateConfig state_cfg = cfg_.state;
        std::optional<ShotConfig> shots = cfg_.noise;
        if (cfg_.sweep) {
            double value = cfg_.sweep->values[index];
            p.parameter = value;
            state_cfg = apply_sweep(state_cfg, *cfg_.sweep, value);
            if (cfg_.sweep->parameter == SweepConfig::Parameter::kShots) {
                shots->shots_per_point = std::uint64_t(value);
            }
        }

        std::optional<FockVector> state;
        try {
            state = make_state(state_cfg, cfg_.dim);
        } catch (const std::exception &e) {
            auto err = stage_error("state", e);
            p.errors.push_back(err);
            for (const auto &t : transforms_) {
                p.estimates.push_back({t.request.target, std::nullopt, err});
            }
            return p;
        }

        std::vector<std::optional<PolarizationSignal>> signals(cfg_.signals.size());
        std::vector<std::optional<StageError>> signal_errors(cfg_.signals.size());
        for (std::size_t i = 0; i < cfg_.signals.size(); i++) {
            const auto &source = cfg_.signals[i];
            try {
                if (shots) {
                    ShotConfig point_shots = *shots;
                    point_shots.seed = signal_seed(cfg_.seed, index, i);
                    auto trace = rotated_probabilities(*state, grids_[i], source.transition, source.entry);
                    signals[i] = sample_signal(trace, point_shots);
                } else if (cfg_.generator == SignalGenerator::kUnitary) {
                    signals[i] = signal_unitary(*state, grids_[i], source.transition, source.entry);
                } else {
                    signals[i] = signal_closed_form(*state, grids_[i], source.transition, source.entry);
                }
            } catch (const std::exception &e) {
                signal_errors[i] = stage_error("signal", e);
                p.errors.push_back(*signal_errors[i]);
            }
        }

        for (const auto &t : transforms_) {
            EstimateRecord record{t.request.target, std::nullopt, std::nullopt};
            std::size_t i = signal_index(t.source);
            if (t.error) {
                record.error = t.error;
            } else if (signal_errors[i]) {
                record.error = signal_errors[i];
            } else {
                try {
                    auto estimate = t.estimator->estimate(*signals[i]);
                    estimate.attach_oracle(*state);
                    record.estimate = std::move(estimate);
                } catch (const std::exception &e) {
                    record.error = stage_error("transform", e);
                }
            }
            p.estimates.push_back(std::move(record));
        }

        if (cfg_.squeezing) {
            const MomentEstimate *a1 = find_estimate(p, MomentKind::adag_pow(1));
            const MomentEstimate *a2 = find_estimate(p, MomentKind::adag_pow(2));
            if (!a1 || !a2) {
                p.errors.push_back({"squeezing", StageError::Class::kNumeric,
                                    "squeezing needs both the adag^1 and the adag^2 estimates"});
            } else {
                try {
                    double n_mean = cfg_.n_mean ? *cfg_.n_mean : expect_moment(*state, MomentKind::number()).real();
                    auto source = cfg_.n_mean ? SqueezingReport::NMeanSource::kUserSupplied
                                              : SqueezingReport::NMeanSource::kOracle;
                    p.squeezing = squeezing_report(*a1, *a2, n_mean, source);
                } catch (const std::exception &e) {
                    p.errors.push_back(stage_error("squeezing", e));
                }
            }
        }

        if (cfg_.outputs.signals) {
            for (std::size_t i = 0; i < signals.size(); i++) {
                if (signals[i]) {
                    p.signals.push_back({cfg_.signals[i], std::move(*signals[i])});
                }
            }
        }
        return p;
    }

   private:
    std::size_t signal_index(SignalSource source) const {
        for (std::size_t i = 0; i < cfg_.signals.size(); i++) {
            if (cfg_.signals[i].transition == source.transition && cfg_.signals[i].entry == source.entry) {
                return i;
            }
        }
        throw std::logic_error("target signal not declared");
    }

    const TimeGrid &grid_of(SignalSource source) const {
        return grids_[signal_index(source)];
    }

    static const MomentEstimate *find_estimate(const PointResult &p, MomentKind kind) {
        for (const auto &record : p.estimates) {
            if (record.target == kind && record.estimate) {
                return &*record.estimate;
            }
        }
        return nullptr;
    }

    const ExperimentConfig &cfg_;
    std::vector<TimeGrid> grids_;
    std::vector<PreparedTransform> transforms_;
};

}  // namespace

std::optional<StageError::Class> RunResult::worst_failure() const {
    std::optional<StageError::Class> worst;
    auto note = [&](const StageError &e) {
        if (!worst || e.error_class == StageError::Class::kConfig) {
            worst = e.error_class;
        }
    };
    for (const auto &p : points) {
        for (const auto &e : p.errors) {
            note(e);
        }
        for (const auto &record : p.estimates) {
            if (record.error) {
                note(*record.error);
            }
        }
    }
    return worst;
}

RunResult run(const ExperimentConfig &config) {
    auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.config = config;
    Runner runner(result.config);

    std::size_t count = config.sweep ? config.sweep->values.size() : 1;
    result.points.resize(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            result.points[k] = runner.run_point(k);
        }
    };
    std::size_t workers = std::min(std::max<std::size_t>(config.workers, 1), count);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; w++) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace fieldprobe
