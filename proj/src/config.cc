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

// Experiment config schema. Every object rejects keys it does not know, and
// every diagnostic names the offending field as a path like $.grid.t_end.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "fieldprobe/harness.h"
#include "harness_internal.h"

namespace fieldprobe {

namespace {

using Doc = nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &message) {
    throw ConfigError("config: " + path + ": " + message);
}

std::string key_path(const std::string &path, std::string_view key) {
    return path + "." + std::string(key);
}

std::string index_path(const std::string &path, std::size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

void expect_object(const Doc &doc, const std::string &path, std::initializer_list<std::string_view> allowed) {
    if (!doc.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto &item : doc.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            fail(key_path(path, item.key()), "unknown key");
        }
    }
}

const Doc *find(const Doc &obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

const Doc &require(const Doc &obj, const std::string &path, std::string_view key) {
    const Doc *found = find(obj, key);
    if (!found) {
        fail(key_path(path, key), "required key is missing");
    }
    return *found;
}

double as_number(const Doc &doc, const std::string &path) {
    if (!doc.is_number()) {
        fail(path, "expected a number");
    }
    double v = doc.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "must be finite");
    }
    return v;
}

std::uint64_t as_count(const Doc &doc, const std::string &path) {
    if (!doc.is_number_unsigned()) {
        fail(path, "expected a non-negative integer");
    }
    return doc.get<std::uint64_t>();
}

bool as_bool(const Doc &doc, const std::string &path) {
    if (!doc.is_boolean()) {
        fail(path, "expected true or false");
    }
    return doc.get<bool>();
}

std::string as_string(const Doc &doc, const std::string &path) {
    if (!doc.is_string()) {
        fail(path, "expected a string");
    }
    return doc.get<std::string>();
}

/// A real number, {"re": x, "im": y} or {"abs": r, "arg": phi}.
Complex as_complex(const Doc &doc, const std::string &path) {
    if (doc.is_number()) {
        return as_number(doc, path);
    }
    if (!doc.is_object()) {
        fail(path, "expected a number, {\"re\", \"im\"} or {\"abs\", \"arg\"}");
    }
    if (doc.contains("abs") || doc.contains("arg")) {
        expect_object(doc, path, {"abs", "arg"});
        double r = as_number(require(doc, path, "abs"), key_path(path, "abs"));
        const Doc *arg = find(doc, "arg");
        return std::polar(r, arg ? as_number(*arg, key_path(path, "arg")) : 0.0);
    }
    expect_object(doc, path, {"re", "im"});
    const Doc *re = find(doc, "re");
    const Doc *im = find(doc, "im");
    return {re ? as_number(*re, key_path(path, "re")) : 0.0, im ? as_number(*im, key_path(path, "im")) : 0.0};
}

template <typename T>
T choose(const Doc &doc, const std::string &path, std::initializer_list<std::pair<std::string_view, T>> options) {
    std::string text = as_string(doc, path);
    std::string names;
    for (const auto &[name, value] : options) {
        if (name == text) {
            return value;
        }
        names += (names.empty() ? "" : ", ") + std::string(name);
    }
    fail(path, "'" + text + "' is not one of: " + names);
}

StateConfig parse_state(const Doc &doc, const std::string &path) {
    if (!doc.is_object()) {
        fail(path, "expected an object");
    }
    StateConfig s;
    s.kind = choose<StateConfig::Kind>(require(doc, path, "kind"), key_path(path, "kind"),
                                       {{"fock", StateConfig::Kind::kFock},
                                        {"coherent", StateConfig::Kind::kCoherent},
                                        {"squeezed", StateConfig::Kind::kSqueezed},
                                        {"amplitudes", StateConfig::Kind::kAmplitudes}});
    switch (s.kind) {
        case StateConfig::Kind::kFock:
            expect_object(doc, path, {"kind", "n"});
            s.n = as_count(require(doc, path, "n"), key_path(path, "n"));
            break;
        case StateConfig::Kind::kCoherent:
            expect_object(doc, path, {"kind", "alpha"});
            s.alpha = as_complex(require(doc, path, "alpha"), key_path(path, "alpha"));
            break;
        case StateConfig::Kind::kSqueezed: {
            expect_object(doc, path, {"kind", "alpha", "r", "theta"});
            const Doc *alpha = find(doc, "alpha");
            s.alpha = alpha ? as_complex(*alpha, key_path(path, "alpha")) : Complex{0};
            s.r = as_number(require(doc, path, "r"), key_path(path, "r"));
            if (s.r < 0) {
                fail(key_path(path, "r"), "squeezing parameter must be non-negative");
            }
            const Doc *theta = find(doc, "theta");
            s.theta = theta ? as_number(*theta, key_path(path, "theta")) : 0.0;
            break;
        }
        case StateConfig::Kind::kAmplitudes: {
            expect_object(doc, path, {"kind", "amplitudes"});
            std::string apath = key_path(path, "amplitudes");
            const Doc &list = require(doc, path, "amplitudes");
            if (!list.is_array() || list.empty()) {
                fail(apath, "expected a non-empty array");
            }
            for (std::size_t k = 0; k < list.size(); k++) {
                s.amplitudes.push_back(as_complex(list[k], index_path(apath, k)));
            }
            break;
        }
    }
    return s;
}

GridConfig parse_grid(const Doc &doc, const std::string &path) {
    GridConfig g;
    if (doc.is_object() && doc.contains("times")) {
        expect_object(doc, path, {"times"});
        const Doc &list = doc["times"];
        std::string tpath = key_path(path, "times");
        if (!list.is_array() || list.size() < 2) {
            fail(tpath, "expected an array of at least 2 times");
        }
        for (std::size_t k = 0; k < list.size(); k++) {
            g.times.push_back(as_number(list[k], index_path(tpath, k)));
        }
    } else {
        expect_object(doc, path, {"t_start", "t_end", "points"});
        const Doc *start = find(doc, "t_start");
        g.t_start = start ? as_number(*start, key_path(path, "t_start")) : 0.0;
        g.t_end = as_number(require(doc, path, "t_end"), key_path(path, "t_end"));
        g.points = as_count(require(doc, path, "points"), key_path(path, "points"));
        if (g.t_start < 0) {
            fail(key_path(path, "t_start"), "must be non-negative");
        }
        if (!(g.t_end > g.t_start)) {
            fail(key_path(path, "t_end"), "must exceed t_start");
        }
        if (g.points < 2) {
            fail(key_path(path, "points"), "must be at least 2");
        }
    }
    try {
        g.build();
    } catch (const std::invalid_argument &e) {
        fail(path, e.what());
    }
    return g;
}

TailPolicy parse_tail(const Doc &doc, const std::string &path, const TransformSpec &spec) {
    expect_object(doc, path, {"t_max", "damping_rates", "extrapolation_order", "taper_fraction", "tolerance"});
    TailPolicy tail = default_tail_policy(spec);
    if (const Doc *v = find(doc, "t_max")) {
        tail.t_max = as_number(*v, key_path(path, "t_max"));
        if (!find(doc, "damping_rates")) {
            tail.damping_rates = {1 / tail.t_max, 1 / (4 * tail.t_max), 1 / (16 * tail.t_max)};
        }
    }
    if (const Doc *v = find(doc, "damping_rates")) {
        std::string rpath = key_path(path, "damping_rates");
        if (!v->is_array()) {
            fail(rpath, "expected an array");
        }
        tail.damping_rates.clear();
        for (std::size_t k = 0; k < v->size(); k++) {
            tail.damping_rates.push_back(as_number((*v)[k], index_path(rpath, k)));
        }
    }
    if (const Doc *v = find(doc, "extrapolation_order")) {
        tail.extrapolation_order = int(as_count(*v, key_path(path, "extrapolation_order")));
    }
    if (const Doc *v = find(doc, "taper_fraction")) {
        tail.taper_fraction = as_number(*v, key_path(path, "taper_fraction"));
    }
    if (const Doc *v = find(doc, "tolerance")) {
        tail.tolerance = as_number(*v, key_path(path, "tolerance"));
    }
    try {
        tail.validate();
    } catch (const std::invalid_argument &e) {
        fail(path, e.what());
    }
    return tail;
}

std::vector<SignalSource> parse_protocol(const Doc &doc, const std::string &path) {
    expect_object(doc, path, {"transition", "entry"});
    enum Pick { kOne, kTwo, kBoth };
    auto transition = choose<Pick>(require(doc, path, "transition"), key_path(path, "transition"),
                                   {{"one_photon", kOne}, {"two_photon", kTwo}, {"both", kBoth}});
    auto entry = choose<Pick>(require(doc, path, "entry"), key_path(path, "entry"),
                              {{"excited", kOne}, {"ground", kTwo}, {"both", kBoth}});
    std::vector<SignalSource> out;
    for (auto t : {Transition::kOnePhoton, Transition::kTwoPhoton}) {
        if (transition != kBoth && (transition == kOne) != (t == Transition::kOnePhoton)) {
            continue;
        }
        for (auto e : {AtomEntry::kExcited, AtomEntry::kGround}) {
            if (entry != kBoth && (entry == kOne) != (e == AtomEntry::kExcited)) {
                continue;
            }
            out.push_back({t, e});
        }
    }
    return out;
}

bool declared(const std::vector<SignalSource> &signals, SignalSource source) {
    return std::any_of(signals.begin(), signals.end(), [&](const SignalSource &s) {
        return s.transition == source.transition && s.entry == source.entry;
    });
}

FockVector build_state(const StateConfig &s, std::size_t dim) {
    HilbertSpec space(dim);
    switch (s.kind) {
        case StateConfig::Kind::kFock:
            return make_fock(s.n, space);
        case StateConfig::Kind::kCoherent:
            return make_coherent(s.alpha, space);
        case StateConfig::Kind::kSqueezed:
            return make_squeezed(s.alpha, s.r, s.theta, space);
        case StateConfig::Kind::kAmplitudes: {
            if (s.amplitudes.size() > dim) {
                throw std::invalid_argument("more amplitudes than the Hilbert space dimension");
            }
            std::vector<Complex> amps(s.amplitudes);
            amps.resize(dim);
            return FockVector::from_amplitudes(space, std::move(amps));
        }
    }
    throw std::invalid_argument("unknown state kind");
}

}  // namespace

FockVector make_state(const StateConfig &state, std::size_t dim) {
    return build_state(state, dim);
}

StateConfig apply_sweep(StateConfig state, const SweepConfig &sweep, double value) {
    switch (sweep.parameter) {
        case SweepConfig::Parameter::kAlphaAbs:
            state.alpha = std::polar(value, std::arg(state.alpha));
            break;
        case SweepConfig::Parameter::kAlphaArg:
            state.alpha = std::polar(std::abs(state.alpha), value);
            break;
        case SweepConfig::Parameter::kR:
            state.r = value;
            break;
        case SweepConfig::Parameter::kShots:
            break;
    }
    return state;
}

std::string to_string(StateConfig::Kind kind) {
    switch (kind) {
        case StateConfig::Kind::kFock:
            return "fock";
        case StateConfig::Kind::kCoherent:
            return "coherent";
        case StateConfig::Kind::kSqueezed:
            return "squeezed";
        case StateConfig::Kind::kAmplitudes:
            return "amplitudes";
    }
    return "?";
}

std::string to_string(SweepConfig::Parameter parameter) {
    switch (parameter) {
        case SweepConfig::Parameter::kAlphaAbs:
            return "alpha_abs";
        case SweepConfig::Parameter::kAlphaArg:
            return "alpha_arg";
        case SweepConfig::Parameter::kR:
            return "r";
        case SweepConfig::Parameter::kShots:
            return "shots";
    }
    return "?";
}

std::string to_string(OutputConfig::Format format) {
    switch (format) {
        case OutputConfig::Format::kCsv:
            return "csv";
        case OutputConfig::Format::kJson:
            return "json";
        case OutputConfig::Format::kBoth:
            return "both";
    }
    return "?";
}

OutputConfig::Format parse_format(std::string_view text) {
    if (text == "csv") {
        return OutputConfig::Format::kCsv;
    }
    if (text == "json") {
        return OutputConfig::Format::kJson;
    }
    if (text == "both") {
        return OutputConfig::Format::kBoth;
    }
    throw ConfigError("output format must be csv, json or both, got '" + std::string(text) + "'");
}

TimeGrid GridConfig::build() const {
    if (!times.empty()) {
        return TimeGrid::from_samples(times);
    }
    return TimeGrid::uniform(t_start, t_end, points);
}

TransformSpec TransformRequest::spec() const {
    auto out = default_transform(target, backend);
    if (backend == TransformSpec::Backend::kDirectQuadrature) {
        out.tail = tail ? *tail : default_tail_policy(out);
    }
    return out;
}

TimeGrid ExperimentConfig::grid_for(SignalSource source) const {
    if (source.transition == Transition::kTwoPhoton && two_photon_grid) {
        return two_photon_grid->build();
    }
    if (grid) {
        return grid->build();
    }
    double t_end = 200;
    for (const auto &request : transforms) {
        auto needs = required_signal(request.target);
        if (needs.transition == source.transition && needs.entry == source.entry &&
            request.backend == TransformSpec::Backend::kDirectQuadrature) {
            t_end = std::max(t_end, request.spec().tail->t_max);
        }
    }
    return default_protocol_grid(source, dim, t_end);
}

ExperimentConfig parse_config(std::string_view text) {
    Doc doc;
    try {
        doc = Doc::parse(text.begin(), text.end());
    } catch (const Doc::parse_error &e) {
        std::size_t line = 1, column = 1;
        std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; i++) {
            if (text[i] == '\n') {
                line++;
                column = 1;
            } else {
                column++;
            }
        }
        std::string detail = e.what();
        auto colon = detail.rfind(": ");
        if (colon != std::string::npos) {
            detail = detail.substr(colon + 2);
        }
        throw ConfigError("config: line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                          detail);
    }

    const std::string root = "$";
    expect_object(doc, root,
                  {"seed", "space", "state", "protocol", "grid", "two_photon_grid", "noise", "signal_generator",
                   "transforms", "squeezing", "sweep", "workers", "outputs"});
    ExperimentConfig cfg;

    if (const Doc *v = find(doc, "seed")) {
        cfg.seed = as_count(*v, "$.seed");
    }

    const Doc &space = require(doc, root, "space");
    expect_object(space, "$.space", {"dim"});
    cfg.dim = as_count(require(space, "$.space", "dim"), "$.space.dim");
    if (cfg.dim < 2) {
        fail("$.space.dim", "must be at least 2");
    }

    cfg.state = parse_state(require(doc, root, "state"), "$.state");
    cfg.signals = parse_protocol(require(doc, root, "protocol"), "$.protocol");

    if (const Doc *v = find(doc, "grid")) {
        cfg.grid = parse_grid(*v, "$.grid");
    }
    if (const Doc *v = find(doc, "two_photon_grid")) {
        cfg.two_photon_grid = parse_grid(*v, "$.two_photon_grid");
    }

    if (const Doc *v = find(doc, "noise")) {
        expect_object(*v, "$.noise", {"shots", "sample_x", "sample_y", "infinite_shots"});
        ShotConfig shots;
        shots.shots_per_point = as_count(require(*v, "$.noise", "shots"), "$.noise.shots");
        if (shots.shots_per_point == 0) {
            fail("$.noise.shots", "must be at least 1");
        }
        if (const Doc *b = find(*v, "sample_x")) {
            shots.sample_x = as_bool(*b, "$.noise.sample_x");
        }
        if (const Doc *b = find(*v, "sample_y")) {
            shots.sample_y = as_bool(*b, "$.noise.sample_y");
        }
        if (const Doc *b = find(*v, "infinite_shots")) {
            shots.infinite_shots = as_bool(*b, "$.noise.infinite_shots");
        }
        cfg.noise = shots;
    }

    if (const Doc *v = find(doc, "signal_generator")) {
        cfg.generator = choose<SignalGenerator>(
            *v, "$.signal_generator",
            {{"closed_form", SignalGenerator::kClosedForm}, {"unitary", SignalGenerator::kUnitary}});
        if (cfg.noise) {
            fail("$.signal_generator", "noisy signals are always shot-sampled; remove this key or the noise block");
        }
    }
    if (cfg.noise) {
        cfg.generator = SignalGenerator::kShotSampled;
    }

    const Doc &transforms = require(doc, root, "transforms");
    if (!transforms.is_array() || transforms.empty()) {
        fail("$.transforms", "expected a non-empty array");
    }
    for (std::size_t k = 0; k < transforms.size(); k++) {
        std::string path = index_path("$.transforms", k);
        const Doc &item = transforms[k];
        expect_object(item, path, {"target", "backend", "tail"});
        TransformRequest request;
        std::string target_path = key_path(path, "target");
        std::string target_name = as_string(require(item, path, "target"), target_path);
        try {
            request.target = MomentKind::from_name(target_name);
        } catch (const std::invalid_argument &) {
            fail(target_path, "unknown moment '" + target_name + "'");
        }
        SignalSource needs;
        try {
            needs = required_signal(request.target);
        } catch (const std::invalid_argument &e) {
            fail(target_path, e.what());
        }
        if (!declared(cfg.signals, needs)) {
            fail(target_path, target_name + " needs a " + to_string(needs.entry) + "-entry " +
                                  to_string(needs.transition) + " signal, which the protocol does not declare");
        }
        for (const auto &earlier : cfg.transforms) {
            if (earlier.target == request.target) {
                fail(target_path, target_name + " is requested more than once");
            }
        }
        if (const Doc *b = find(item, "backend")) {
            request.backend = choose<TransformSpec::Backend>(
                *b, key_path(path, "backend"),
                {{"component_fit", TransformSpec::Backend::kComponentFit},
                 {"direct_quadrature", TransformSpec::Backend::kDirectQuadrature}});
        }
        if (const Doc *t = find(item, "tail")) {
            if (request.backend != TransformSpec::Backend::kDirectQuadrature) {
                fail(key_path(path, "tail"), "tail applies only to the direct_quadrature backend");
            }
            request.tail = parse_tail(*t, key_path(path, "tail"), default_transform(request.target, request.backend));
        }
        cfg.transforms.push_back(std::move(request));
    }

    if (const Doc *v = find(doc, "squeezing")) {
        expect_object(*v, "$.squeezing", {"n_mean"});
        cfg.squeezing = true;
        if (const Doc *n = find(*v, "n_mean")) {
            if (n->is_string()) {
                if (n->get<std::string>() != "oracle") {
                    fail("$.squeezing.n_mean", "expected \"oracle\" or a number");
                }
            } else {
                double value = as_number(*n, "$.squeezing.n_mean");
                if (value < 0) {
                    fail("$.squeezing.n_mean", "must be non-negative");
                }
                cfg.n_mean = value;
            }
        }
        for (auto k : {MomentKind::adag_pow(1), MomentKind::adag_pow(2)}) {
            bool present = std::any_of(cfg.transforms.begin(), cfg.transforms.end(),
                                       [&](const TransformRequest &r) { return r.target == k; });
            if (!present) {
                fail("$.squeezing", "squeezing needs a transform with target " + k.name());
            }
        }
    }

    if (const Doc *v = find(doc, "sweep")) {
        expect_object(*v, "$.sweep", {"parameter", "values"});
        SweepConfig sweep;
        sweep.parameter = choose<SweepConfig::Parameter>(require(*v, "$.sweep", "parameter"), "$.sweep.parameter",
                                                         {{"alpha_abs", SweepConfig::Parameter::kAlphaAbs},
                                                          {"alpha_arg", SweepConfig::Parameter::kAlphaArg},
                                                          {"r", SweepConfig::Parameter::kR},
                                                          {"shots", SweepConfig::Parameter::kShots}});
        const Doc &values = require(*v, "$.sweep", "values");
        if (!values.is_array() || values.empty()) {
            fail("$.sweep.values", "expected a non-empty array");
        }
        for (std::size_t k = 0; k < values.size(); k++) {
            std::string vpath = index_path("$.sweep.values", k);
            if (sweep.parameter == SweepConfig::Parameter::kShots) {
                auto shots = as_count(values[k], vpath);
                if (shots == 0) {
                    fail(vpath, "must be at least 1");
                }
                sweep.values.push_back(double(shots));
            } else {
                sweep.values.push_back(as_number(values[k], vpath));
            }
        }
        bool displaced = cfg.state.kind == StateConfig::Kind::kCoherent || cfg.state.kind == StateConfig::Kind::kSqueezed;
        switch (sweep.parameter) {
            case SweepConfig::Parameter::kAlphaAbs:
            case SweepConfig::Parameter::kAlphaArg:
                if (!displaced) {
                    fail("$.sweep.parameter", "alpha sweeps need a coherent or squeezed state");
                }
                break;
            case SweepConfig::Parameter::kR:
                if (cfg.state.kind != StateConfig::Kind::kSqueezed) {
                    fail("$.sweep.parameter", "r sweeps need a squeezed state");
                }
                break;
            case SweepConfig::Parameter::kShots:
                if (!cfg.noise) {
                    fail("$.sweep.parameter", "shot sweeps need a noise block");
                }
                break;
        }
        cfg.sweep = std::move(sweep);
    }

    if (const Doc *v = find(doc, "workers")) {
        cfg.workers = as_count(*v, "$.workers");
        if (cfg.workers == 0) {
            fail("$.workers", "must be at least 1");
        }
    }

    if (const Doc *v = find(doc, "outputs")) {
        expect_object(*v, "$.outputs", {"dir", "format", "signals", "plot_data"});
        if (const Doc *d = find(*v, "dir")) {
            cfg.outputs.dir = as_string(*d, "$.outputs.dir");
        }
        if (const Doc *f = find(*v, "format")) {
            cfg.outputs.format = choose<OutputConfig::Format>(*f, "$.outputs.format",
                                                              {{"csv", OutputConfig::Format::kCsv},
                                                               {"json", OutputConfig::Format::kJson},
                                                               {"both", OutputConfig::Format::kBoth}});
        }
        if (const Doc *b = find(*v, "signals")) {
            cfg.outputs.signals = as_bool(*b, "$.outputs.signals");
        }
        if (const Doc *b = find(*v, "plot_data")) {
            cfg.outputs.plot_data = as_bool(*b, "$.outputs.plot_data");
        }
    }

    // States must be representable in the truncated space for every sweep point.
    std::vector<std::pair<StateConfig, std::string>> states;
    if (cfg.sweep) {
        for (std::size_t k = 0; k < cfg.sweep->values.size(); k++) {
            states.emplace_back(apply_sweep(cfg.state, *cfg.sweep, cfg.sweep->values[k]),
                                index_path("$.sweep.values", k));
        }
    } else {
        states.emplace_back(cfg.state, "$.state");
    }
    for (const auto &[state, path] : states) {
        try {
            auto built = build_state(state, cfg.dim);
            for (const auto &source : cfg.signals) {
                check_truncation_edge(built, source.transition);
            }
        } catch (const std::invalid_argument &e) {
            fail(path, e.what());
        }
    }

    // Quadrature needs a grid from T = 0 out to the cutoff.
    for (std::size_t k = 0; k < cfg.transforms.size(); k++) {
        const auto &request = cfg.transforms[k];
        if (request.backend != TransformSpec::Backend::kDirectQuadrature) {
            continue;
        }
        auto grid = cfg.grid_for(required_signal(request.target));
        double t_max = request.spec().tail->t_max;
        if (grid[0] != 0 || grid.samples().back() < t_max * (1 - 1e-12)) {
            std::stringstream ss;
            ss << "direct quadrature needs a grid covering [0, " << t_max << "]";
            fail(index_path("$.transforms", k), ss.str());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

Json config_echo(const ExperimentConfig &cfg) {
    Json out;
    out["seed"] = cfg.seed;
    out["space"] = {{"dim", cfg.dim}};

    Json state;
    state["kind"] = to_string(cfg.state.kind);
    switch (cfg.state.kind) {
        case StateConfig::Kind::kFock:
            state["n"] = cfg.state.n;
            break;
        case StateConfig::Kind::kCoherent:
            state["alpha"] = complex_json(cfg.state.alpha);
            break;
        case StateConfig::Kind::kSqueezed:
            state["alpha"] = complex_json(cfg.state.alpha);
            state["r"] = cfg.state.r;
            state["theta"] = cfg.state.theta;
            break;
        case StateConfig::Kind::kAmplitudes: {
            Json amps = Json::array();
            for (auto a : cfg.state.amplitudes) {
                amps.push_back(complex_json(a));
            }
            state["amplitudes"] = amps;
            break;
        }
    }
    out["state"] = state;

    Json signals = Json::array();
    for (const auto &s : cfg.signals) {
        signals.push_back({{"transition", to_string(s.transition)}, {"entry", to_string(s.entry)}});
    }
    out["protocol"] = signals;

    Json grids;
    for (const auto &s : cfg.signals) {
        auto grid = cfg.grid_for(s);
        grids[to_string(s.transition) + "_" + to_string(s.entry)] = {
            {"t_start", grid[0]}, {"t_end", grid.samples().back()}, {"points", grid.size()}};
    }
    out["grids"] = grids;

    if (cfg.noise) {
        out["noise"] = {{"shots", cfg.noise->shots_per_point},
                        {"sample_x", cfg.noise->sample_x},
                        {"sample_y", cfg.noise->sample_y},
                        {"infinite_shots", cfg.noise->infinite_shots}};
    } else {
        out["noise"] = nullptr;
    }
    out["signal_generator"] = to_string(cfg.generator);

    Json transforms = Json::array();
    for (const auto &request : cfg.transforms) {
        auto spec = request.spec();
        Json t;
        t["target"] = request.target.name();
        t["kernel"] = to_string(spec.kernel);
        if (spec.kernel == TransformSpec::Kernel::kFresnel) {
            t["A"] = spec.fresnel_a;
        }
        t["backend"] = to_string(spec.backend);
        if (spec.tail) {
            t["tail"] = {{"t_max", spec.tail->t_max},
                         {"damping_rates", spec.tail->damping_rates},
                         {"extrapolation_order", spec.tail->extrapolation_order},
                         {"taper_fraction", spec.tail->taper_fraction},
                         {"tolerance", spec.tail->tolerance}};
        }
        transforms.push_back(t);
    }
    out["transforms"] = transforms;

    if (cfg.squeezing) {
        out["squeezing"] = {{"n_mean", cfg.n_mean ? Json(*cfg.n_mean) : Json("oracle")}};
    } else {
        out["squeezing"] = nullptr;
    }
    if (cfg.sweep) {
        out["sweep"] = {{"parameter", to_string(cfg.sweep->parameter)}, {"values", cfg.sweep->values}};
    } else {
        out["sweep"] = nullptr;
    }
    out["outputs"] = {{"format", to_string(cfg.outputs.format)},
                      {"signals", cfg.outputs.signals},
                      {"plot_data", cfg.outputs.plot_data}};
    return out;
}

std::string config_echo_json(const ExperimentConfig &config) {
    return dump_json(config_echo(config));
}

}  // namespace fieldprobe
