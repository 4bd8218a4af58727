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

// Command line front end. Exit codes: 0 success, 2 config error,
// 3 numeric failure, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fieldprobe/harness.h"

namespace {

using namespace fieldprobe;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct Flags {
    std::string config;
    std::string out;
    std::size_t workers = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format;
    std::string backend = "component_fit";
};

ExperimentConfig load_with_overrides(const Flags &flags) {
    if (flags.config.empty()) {
        throw ConfigError("--config is required");
    }
    auto cfg = load_config(flags.config);
    if (flags.seed_given) {
        cfg.seed = flags.seed;
    }
    if (flags.workers > 0) {
        cfg.workers = flags.workers;
    }
    if (!flags.out.empty()) {
        cfg.outputs.dir = flags.out;
    }
    if (!flags.format.empty()) {
        cfg.outputs.format = parse_format(flags.format);
    }
    return cfg;
}

void write_text(const std::string &dir, const std::string &name, const std::string &content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (ec || !out) {
        throw IoError("cannot write " + path.string());
    }
}

int cmd_run(const Flags &flags) {
    auto cfg = load_with_overrides(flags);
    auto result = run(cfg);
    auto files = emit(result);
    for (const auto &p : result.points) {
        for (const auto &record : p.estimates) {
            std::printf("point %zu", p.index);
            if (p.parameter) {
                std::printf(" (%s = %s)", to_string(cfg.sweep->parameter).c_str(),
                            format_number(*p.parameter).c_str());
            }
            if (record.estimate) {
                const auto &e = *record.estimate;
                std::printf("  %-11s % .10f %+.10fi  stat_error %.3g", record.target.name().c_str(), e.value.real(),
                            e.value.imag(), e.stat_error);
                if (e.abs_error) {
                    std::printf("  |est - oracle| %.3g", *e.abs_error);
                }
                std::printf("\n");
            } else {
                std::printf("  %-11s error [%s] %s\n", record.target.name().c_str(), record.error->stage.c_str(),
                            record.error->message.c_str());
            }
        }
        if (p.squeezing) {
            std::printf("point %zu  squeezing   var_x %.6f +- %.3g  var_y %.6f +- %.3g  squeezed %s\n", p.index,
                        p.squeezing->var_x, p.squeezing->var_x_error, p.squeezing->var_y, p.squeezing->var_y_error,
                        p.squeezing->squeezed ? "yes" : "no");
        }
        for (const auto &e : p.errors) {
            std::printf("point %zu  error [%s] %s\n", p.index, e.stage.c_str(), e.message.c_str());
        }
    }
    for (const auto &f : files) {
        std::printf("wrote %s\n", f.c_str());
    }
    std::fprintf(stderr, "run finished in %.2f s\n", result.seconds);
    auto worst = result.worst_failure();
    if (!worst) {
        return kExitOk;
    }
    return *worst == StageError::Class::kConfig ? kExitConfig : kExitNumeric;
}

int cmd_check(const Flags &flags) {
    auto cfg = load_with_overrides(flags);
    std::size_t points = cfg.sweep ? cfg.sweep->values.size() : 1;
    std::printf("config ok: %zu point(s), %zu transform(s), %zu signal(s)\n", points, cfg.transforms.size(),
                cfg.signals.size());
    std::printf("%s", config_echo_json(cfg).c_str());
    return kExitOk;
}

int cmd_calibrate(const Flags &flags) {
    CalibrationDesign design;
    if (flags.backend == "direct_quadrature") {
        design.backend = TransformSpec::Backend::kDirectQuadrature;
    } else if (flags.backend != "component_fit") {
        throw ConfigError("--backend must be component_fit or direct_quadrature");
    }
    std::string text;
    int code = kExitOk;
    try {
        text = calibration_json(calibrate_k2(default_calibration_references(), design));
    } catch (const CalibrationError &e) {
        auto constants = CalibrationConstants::standard();
        constants.k2_provenance = e.provenance;
        text = calibration_json(constants, e.what());
        std::fprintf(stderr, "calibration failed: %s\n", e.what());
        code = kExitNumeric;
    }
    std::printf("%s", text.c_str());
    if (!flags.out.empty()) {
        write_text(flags.out, "calibration.json", text);
    }
    return code;
}

int cmd_identities(const Flags &flags) {
    auto checks = fresnel_identity_checks(100, flags.seed_given ? flags.seed : 20260101);
    auto dirichlet = dirichlet_identity_checks();
    checks.insert(checks.end(), dirichlet.begin(), dirichlet.end());
    std::size_t failed = 0;
    std::printf("%-9s %10s %10s %22s %22s %10s  %s\n", "kernel", "A", "B", "numeric", "closed form", "error",
                "status");
    for (const auto &c : checks) {
        bool ok = c.passed();
        failed += ok ? 0 : 1;
        std::printf("%-9s %10.5f %10.5f %22.15g %22.15g %10.3g  %s\n", c.kernel.c_str(), c.a, c.b, c.numeric,
                    c.expected, c.error, ok ? "PASS" : "FAIL");
    }
    std::printf("%zu of %zu identities passed\n", checks.size() - failed, checks.size());
    if (!flags.out.empty()) {
        write_text(flags.out, "identities.csv", identities_csv(checks));
    }
    return failed == 0 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"fieldprobe: cavity-field moment reconstruction from atomic polarization signals"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags flags;
    app.add_option("--config", flags.config, "experiment config (JSON)");
    app.add_option("--out", flags.out, "output directory (overrides the config)");
    app.add_option("--workers", flags.workers, "concurrent sweep points")->check(CLI::PositiveNumber);
    auto *seed = app.add_option("--seed", flags.seed, "master seed (overrides the config)");
    app.add_option("--format", flags.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));

    auto *run_cmd = app.add_subcommand("run", "execute an experiment config");
    auto *check_cmd = app.add_subcommand("check", "validate a config without running it");
    auto *calibrate_cmd = app.add_subcommand("calibrate", "fit the two-photon constant K2 and print its provenance");
    calibrate_cmd->add_option("--backend", flags.backend, "component_fit or direct_quadrature");
    auto *identities_cmd = app.add_subcommand("identities", "closed-form integral self-tests");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }
    flags.seed_given = seed->count() > 0;

    try {
        if (run_cmd->parsed()) {
            return cmd_run(flags);
        }
        if (check_cmd->parsed()) {
            return cmd_check(flags);
        }
        if (calibrate_cmd->parsed()) {
            return cmd_calibrate(flags);
        }
        if (identities_cmd->parsed()) {
            return cmd_identities(flags);
        }
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const IoError &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitIo;
    } catch (const NumericError &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitNumeric;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}
