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

#include "fieldprobe/harness.h"

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace fieldprobe;
namespace fs = std::filesystem;

namespace {

const char *kMinimal = R"({
  "space": {"dim": 128},
  "state": {"kind": "coherent", "alpha": 3},
  "protocol": {"transition": "one_photon", "entry": "excited"},
  "transforms": [{"target": "adag^1"}]
})";

const char *kSweep = R"({
  "seed": 5,
  "space": {"dim": 128},
  "state": {"kind": "coherent", "alpha": 1},
  "protocol": {"transition": "one_photon", "entry": "excited"},
  "transforms": [{"target": "adag^1"}],
  "sweep": {"parameter": "alpha_abs", "values": [1, 2, 3, 4]}
})";

const char *kNoisySweep = R"({
  "seed": 99,
  "space": {"dim": 64},
  "state": {"kind": "squeezed", "alpha": {"abs": 2, "arg": 0.3}, "r": 0.2},
  "protocol": {"transition": "both", "entry": "both"},
  "noise": {"shots": 20000},
  "transforms": [
    {"target": "adag^1"},
    {"target": "adag^2"},
    {"target": "sg_raise^1"},
    {"target": "sg_raise^2"}
  ],
  "squeezing": {"n_mean": "oracle"},
  "sweep": {"parameter": "alpha_arg", "values": [0, 0.5, 1, 1.5, 2]},
  "workers": 3
})";

std::string with_outputs(std::string config, const fs::path &dir) {
    auto close = config.rfind('}');
    return config.substr(0, close) + ",\n  \"outputs\": {\"dir\": \"" + dir.string() + "\"}\n}";
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
   public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("fieldprobe_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path &path() const {
        return path_;
    }

   private:
    fs::path path_;
};

std::map<std::string, std::string> read_tree(const fs::path &dir) {
    std::map<std::string, std::string> files;
    for (const auto &entry : fs::directory_iterator(dir)) {
        files[entry.path().filename().string()] = slurp(entry.path());
    }
    return files;
}

std::string config_error(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

int run_cli(const std::string &args) {
    std::string cmd = std::string(FIELDPROBE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(parse_config, minimal_with_defaults) {
    auto cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.seed, 0u);
    EXPECT_EQ(cfg.dim, 128u);
    EXPECT_EQ(cfg.state.kind, StateConfig::Kind::kCoherent);
    EXPECT_EQ(cfg.state.alpha, Complex(3));
    ASSERT_EQ(cfg.signals.size(), 1u);
    EXPECT_EQ(cfg.signals[0].transition, Transition::kOnePhoton);
    EXPECT_EQ(cfg.signals[0].entry, AtomEntry::kExcited);
    ASSERT_EQ(cfg.transforms.size(), 1u);
    auto spec = cfg.transforms[0].spec();
    EXPECT_EQ(spec.kernel, TransformSpec::Kernel::kFresnel);
    EXPECT_DOUBLE_EQ(spec.fresnel_a, kOnePhotonFresnelA);
    EXPECT_EQ(spec.backend, TransformSpec::Backend::kComponentFit);
    EXPECT_FALSE(cfg.noise);
    EXPECT_FALSE(cfg.sweep);
    EXPECT_FALSE(cfg.squeezing);
    EXPECT_EQ(cfg.workers, 1u);
    EXPECT_EQ(cfg.outputs.format, OutputConfig::Format::kBoth);
    EXPECT_EQ(cfg.generator, SignalGenerator::kClosedForm);
    auto grid = cfg.grid_for(cfg.signals[0]);
    EXPECT_EQ(grid[0], 0);
    EXPECT_DOUBLE_EQ(grid.samples().back(), 200);
}

TEST(parse_config, protocol_moment_mismatch) {
    std::string text = kMinimal;
    text.replace(text.find("adag^1"), 6, "sg_raise^1");
    auto msg = config_error(text);
    EXPECT_NE(msg.find("$.transforms[0].target"), std::string::npos) << msg;
    EXPECT_NE(msg.find("ground"), std::string::npos) << msg;
}

TEST(parse_config, grid_must_be_increasing) {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), ",\n  \"grid\": {\"t_start\": 5, \"t_end\": 5, \"points\": 10}\n");
    auto msg = config_error(text);
    EXPECT_NE(msg.find("$.grid.t_end"), std::string::npos) << msg;
}

TEST(parse_config, unknown_keys_rejected) {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), ",\n  \"colour\": \"blue\"\n");
    auto msg = config_error(text);
    EXPECT_NE(msg.find("$.colour: unknown key"), std::string::npos) << msg;

    text = kMinimal;
    text.replace(text.find("\"alpha\": 3"), 10, "\"alpha\": 3, \"beta\": 1");
    msg = config_error(text);
    EXPECT_NE(msg.find("$.state.beta"), std::string::npos) << msg;
}

TEST(parse_config, syntax_errors_carry_position) {
    auto msg = config_error("{\n  \"space\": {\"dim\": 8},\n  \"state\": oops\n}");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(parse_config, schema_violations) {
    struct Case {
        const char *from;
        const char *to;
        const char *path;
    };
    const Case cases[] = {
        {"\"dim\": 128", "\"dim\": 1", "$.space"},
        {"\"dim\": 128", "\"dim\": 16", "$.state"},  // leakage: alpha = 3 needs more levels
        {"\"alpha\": 3", "\"alpha\": \"three\"", "$.state.alpha"},
        {"\"one_photon\"", "\"three_photon\"", "$.protocol.transition"},
        {"\"adag^1\"", "\"adag^3\"", "$.transforms[0].target"},
        {"{\"target\": \"adag^1\"}", "{\"target\": \"adag^1\", \"tail\": {\"t_max\": 10}}", "$.transforms[0].tail"},
        {"{\"target\": \"adag^1\"}", "{\"target\": \"adag^1\"}, {\"target\": \"adag^1\"}", "$.transforms[1]"},
    };
    for (const auto &c : cases) {
        std::string text = kMinimal;
        text.replace(text.find(c.from), std::string(c.from).size(), c.to);
        auto msg = config_error(text);
        EXPECT_NE(msg.find(c.path), std::string::npos) << c.to << " -> " << msg;
    }
}

TEST(parse_config, cross_field_rules) {
    std::string squeezing = kMinimal;
    squeezing.insert(squeezing.rfind('}'), ",\n  \"squeezing\": {}\n");
    EXPECT_NE(config_error(squeezing).find("$.squeezing"), std::string::npos);

    std::string shots = kMinimal;
    shots.insert(shots.rfind('}'), ",\n  \"sweep\": {\"parameter\": \"shots\", \"values\": [10]}\n");
    EXPECT_NE(config_error(shots).find("$.sweep.parameter"), std::string::npos);

    std::string short_grid = kMinimal;
    short_grid.replace(short_grid.find("{\"target\": \"adag^1\"}"), 20,
                       "{\"target\": \"adag^1\", \"backend\": \"direct_quadrature\"}");
    short_grid.insert(short_grid.rfind('}'), ",\n  \"grid\": {\"t_end\": 100, \"points\": 2001}\n");
    EXPECT_NE(config_error(short_grid).find("direct quadrature needs a grid"), std::string::npos);
}

TEST(load_config, missing_file_is_io_error) {
    EXPECT_THROW(load_config("/nonexistent/fieldprobe.json"), IoError);
}

TEST(run, matches_direct_reconstruction) {
    auto cfg = parse_config(kMinimal);
    auto result = run(cfg);
    ASSERT_EQ(result.points.size(), 1u);
    const auto &record = result.points[0].estimates.at(0);
    ASSERT_TRUE(record.estimate) << record.error->message;

    auto state = make_coherent(3, HilbertSpec(128));
    auto grid = cfg.grid_for(cfg.signals[0]);
    auto signal = signal_closed_form(state, grid, Transition::kOnePhoton, AtomEntry::kExcited);
    auto direct = estimate_adagger(signal, TransformSpec::fresnel(kOnePhotonFresnelA));
    EXPECT_EQ(record.estimate->value, direct.value);
    EXPECT_EQ(*record.estimate->oracle_value, expect_moment(state, MomentKind::adag_pow(1)));
    EXPECT_FALSE(result.worst_failure());
}

TEST(run, sweep_errors_shrink_with_intensity) {
    auto result = run(parse_config(kSweep));
    ASSERT_EQ(result.points.size(), 4u);
    double previous = INFINITY;
    for (const auto &p : result.points) {
        const auto &e = *p.estimates.at(0).estimate;
        double rel = *e.abs_error / std::abs(*e.oracle_value);
        EXPECT_LE(rel, previous * 1.2) << *p.parameter;
        previous = rel;
    }
}

TEST(run, every_target_reported_once) {
    auto cfg = parse_config(kNoisySweep);
    auto result = run(cfg);
    ASSERT_EQ(result.points.size(), 5u);
    for (const auto &p : result.points) {
        ASSERT_EQ(p.estimates.size(), cfg.transforms.size());
        for (std::size_t k = 0; k < cfg.transforms.size(); k++) {
            EXPECT_EQ(p.estimates[k].target, cfg.transforms[k].target);
            EXPECT_NE(p.estimates[k].estimate.has_value(), p.estimates[k].error.has_value());
        }
        EXPECT_EQ(p.signals.size(), 4u);
    }
}

TEST(run, failures_are_recorded_not_dropped) {
    std::string text = kMinimal;
    text.replace(text.find("{\"target\": \"adag^1\"}"), 20,
                 "{\"target\": \"adag^1\", \"backend\": \"direct_quadrature\", \"tail\": {\"tolerance\": 1e-15}}");
    auto result = run(parse_config(text));
    const auto &record = result.points.at(0).estimates.at(0);
    ASSERT_FALSE(record.estimate);
    ASSERT_TRUE(record.error);
    EXPECT_EQ(record.error->stage, "transform");
    EXPECT_EQ(record.error->error_class, StageError::Class::kNumeric);
    EXPECT_EQ(result.worst_failure(), StageError::Class::kNumeric);
    auto json = result_json(result);
    EXPECT_NE(json.find("\"status\": \"error\""), std::string::npos);
    EXPECT_NE(json.find("did not converge"), std::string::npos);
}

TEST(run, independent_of_worker_count) {
    auto cfg = parse_config(kNoisySweep);
    cfg.workers = 1;
    auto serial = run(cfg);
    cfg.workers = 4;
    auto parallel = run(cfg);
    EXPECT_EQ(result_json(serial), result_json(parallel));
    EXPECT_EQ(estimates_csv(serial), estimates_csv(parallel));
    ASSERT_EQ(serial.points.size(), parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); i++) {
        for (std::size_t k = 0; k < serial.points[i].signals.size(); k++) {
            EXPECT_EQ(signal_csv(serial.points[i].signals[k].signal),
                      signal_csv(parallel.points[i].signals[k].signal));
        }
    }
}

TEST(run, seed_changes_noise) {
    auto cfg = parse_config(kNoisySweep);
    auto a = run(cfg);
    cfg.seed = 100;
    auto b = run(cfg);
    EXPECT_NE(result_json(a), result_json(b));
}

TEST(emit, byte_identical_outputs) {
    TempDir d1, d2;
    auto r1 = run(parse_config(with_outputs(kNoisySweep, d1.path())));
    auto r2 = run(parse_config(with_outputs(kNoisySweep, d2.path())));
    auto files1 = emit(r1);
    emit(r2);
    auto t1 = read_tree(d1.path());
    auto t2 = read_tree(d2.path());
    EXPECT_EQ(t1, t2);
    // result.json, estimates.csv, plot_data.csv and 4 signals per point.
    EXPECT_EQ(files1.size(), 3u + 5 * 4);
    EXPECT_TRUE(t1.count("plot_data.csv"));
    EXPECT_TRUE(t1.count("signal_p004_two_photon_ground.csv"));
}

TEST(emit, result_json_round_trips) {
    auto result = run(parse_config(kNoisySweep));
    auto parsed = read_result_json(result_json(result));
    ASSERT_EQ(parsed.size(), result.points.size());
    for (std::size_t i = 0; i < parsed.size(); i++) {
        const auto &p = result.points[i];
        EXPECT_EQ(parsed[i].parameter, p.parameter);
        ASSERT_EQ(parsed[i].estimates.size(), p.estimates.size());
        for (std::size_t k = 0; k < p.estimates.size(); k++) {
            const auto &want = *p.estimates[k].estimate;
            const auto &got = parsed[i].estimates[k];
            EXPECT_EQ(got.kind, want.kind.name());
            EXPECT_EQ(got.status, "ok");
            EXPECT_EQ(got.value, want.value);
            EXPECT_EQ(got.stat_error, want.stat_error);
            EXPECT_EQ(got.oracle, want.oracle_value);
            EXPECT_EQ(got.abs_error, want.abs_error);
        }
        ASSERT_TRUE(parsed[i].squeezing && p.squeezing);
        EXPECT_EQ(parsed[i].squeezing->var_x, p.squeezing->var_x);
        EXPECT_EQ(parsed[i].squeezing->var_y, p.squeezing->var_y);
        EXPECT_EQ(parsed[i].squeezing->var_x_error, p.squeezing->var_x_error);
        EXPECT_EQ(parsed[i].squeezing->mean_x, p.squeezing->mean_x);
        EXPECT_EQ(parsed[i].squeezing->n_mean, p.squeezing->n_mean);
        EXPECT_EQ(parsed[i].squeezing->squeezed, p.squeezing->squeezed);
    }
}

TEST(emit, signal_csv_layout) {
    auto empty = PolarizationSignal(TimeGrid::from_samples({}), {}, SignalMeta{});
    EXPECT_EQ(signal_csv(empty), "T,re_sigma_plus,im_sigma_plus,stderr_re,stderr_im\n");

    auto grid = TimeGrid::from_samples({0, 0.1});
    PolarizationSignal sig(grid, {Complex(0), Complex(0.1, -1.0 / 3)}, {0, 0.25}, {0, 0.125}, SignalMeta{});
    EXPECT_EQ(signal_csv(sig),
              "T,re_sigma_plus,im_sigma_plus,stderr_re,stderr_im\n"
              "0.0,0.0,0.0,0.0,0.0\n"
              "0.10000000000000001,0.10000000000000001,-0.33333333333333331,0.25,0.125\n");
}

TEST(emit, plot_data_matches_sweep) {
    auto result = run(parse_config(kSweep));
    std::stringstream csv(plot_data_csv(result));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "parameter,kind,status,re_estimate,im_estimate,re_oracle,im_oracle,abs_error,rel_error");
    for (const auto &p : result.points) {
        ASSERT_TRUE(std::getline(csv, line));
        const auto &e = *p.estimates[0].estimate;
        std::string want = format_number(*p.parameter) + ",adag^1,ok," + format_number(e.value.real()) + "," +
                           format_number(e.value.imag()) + "," + format_number(e.oracle_value->real()) + "," +
                           format_number(e.oracle_value->imag()) + "," + format_number(*e.abs_error) + "," +
                           format_number(*e.abs_error / std::abs(*e.oracle_value));
        EXPECT_EQ(line, want);
    }
}

TEST(emit, format_selection) {
    TempDir dir;
    auto cfg = parse_config(with_outputs(kMinimal, dir.path()));
    cfg.outputs.format = OutputConfig::Format::kCsv;
    cfg.outputs.signals = false;
    auto files = emit(run(cfg));
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(fs::path(files[0]).filename(), "estimates.csv");
    cfg.outputs.format = OutputConfig::Format::kJson;
    files = emit(run(cfg));
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(fs::path(files[0]).filename(), "result.json");
}

TEST(emit, unwritable_directory) {
    TempDir dir;
    std::ofstream(dir.path() / "blocker") << "x";
    auto cfg = parse_config(with_outputs(kMinimal, dir.path() / "blocker" / "sub"));
    EXPECT_THROW(emit(run(cfg)), IoError);
}

TEST(format_number, seventeen_digits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(3), "3.0");
    EXPECT_EQ(format_number(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_number(-0.0), "-0.0");
    EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
}

TEST(config_echo, excludes_run_location) {
    TempDir dir;
    auto cfg = parse_config(with_outputs(kMinimal, dir.path()));
    auto echo = config_echo_json(cfg);
    EXPECT_EQ(echo.find(dir.path().string()), std::string::npos);
    EXPECT_NE(echo.find("\"A\": 12.566370614359172"), std::string::npos) << echo;
}

TEST(cli, exit_codes) {
    TempDir dir;
    auto good = dir.path() / "good.json";
    std::ofstream(good) << with_outputs(kMinimal, dir.path() / "out");
    auto bad = dir.path() / "bad.json";
    std::ofstream(bad) << "{\"space\": {}}";
    std::string diverge = kMinimal;
    diverge.replace(diverge.find("{\"target\": \"adag^1\"}"), 20,
                    "{\"target\": \"adag^1\", \"backend\": \"direct_quadrature\", \"tail\": {\"tolerance\": 1e-15}}");
    auto numeric = dir.path() / "numeric.json";
    std::ofstream(numeric) << with_outputs(diverge, dir.path() / "numeric_out");

    EXPECT_EQ(run_cli("run --config " + good.string()), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "result.json"));
    EXPECT_EQ(run_cli("check --config " + good.string()), 0);
    EXPECT_EQ(run_cli("run --config " + bad.string()), 2);
    EXPECT_EQ(run_cli("check --config " + bad.string()), 2);
    EXPECT_EQ(run_cli("run --config " + numeric.string()), 3);
    EXPECT_TRUE(fs::exists(dir.path() / "numeric_out" / "result.json"));
    EXPECT_EQ(run_cli("run --config " + (dir.path() / "missing.json").string()), 4);
    std::ofstream(dir.path() / "blocker") << "x";
    EXPECT_EQ(run_cli("run --config " + good.string() + " --out " + (dir.path() / "blocker" / "o").string()), 4);
    EXPECT_EQ(run_cli("run"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("run --config " + good.string() + " --format xml"), 2);
    EXPECT_EQ(run_cli("--help"), 0);
}

TEST(cli, flag_overrides) {
    TempDir dir;
    auto cfg_path = dir.path() / "sweep.json";
    std::ofstream(cfg_path) << kNoisySweep;
    auto a = dir.path() / "a";
    auto b = dir.path() / "b";
    auto c = dir.path() / "c";
    ASSERT_EQ(run_cli("run --config " + cfg_path.string() + " --out " + a.string() + " --workers 1 --seed 7"), 0);
    ASSERT_EQ(run_cli("run --config " + cfg_path.string() + " --out " + b.string() + " --workers 4 --seed 7"), 0);
    ASSERT_EQ(run_cli("run --config " + cfg_path.string() + " --out " + c.string() + " --seed 8 --format json"), 0);
    EXPECT_EQ(read_tree(a), read_tree(b));
    EXPECT_NE(slurp(a / "result.json"), slurp(c / "result.json"));
    EXPECT_NE(slurp(a / "result.json").find("\"seed\": 7"), std::string::npos);
    EXPECT_FALSE(fs::exists(c / "estimates.csv"));
}
