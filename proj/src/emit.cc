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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fieldprobe/harness.h"
#include "harness_internal.h"

namespace fieldprobe {

namespace {

void dump_into(const Json &value, std::string &out, int depth) {
    auto indent = [&](int d) { out.append(std::size_t(2 * d), ' '); };
    switch (value.type()) {
        case Json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto &item : value.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                indent(depth + 1);
                out += Json(item.key()).dump();
                out += ": ";
                dump_into(item.value(), out, depth + 1);
            }
            out += "\n";
            indent(depth);
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < value.size(); k++) {
                if (k > 0) {
                    out += ",\n";
                }
                indent(depth + 1);
                dump_into(value[k], out, depth + 1);
            }
            out += "\n";
            indent(depth);
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            double v = value.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            return;
        }
        default:
            out += value.dump();
            return;
    }
}

Json optional_complex(const std::optional<Complex> &value) {
    return value ? complex_json(*value) : Json(nullptr);
}

Json method_json(const EstimateMethod &method) {
    Json out;
    out["backend"] = to_string(method.spec.backend);
    out["kernel"] = to_string(method.spec.kernel);
    if (method.spec.kernel == TransformSpec::Kernel::kFresnel) {
        out["A"] = method.spec.fresnel_a;
    }
    out["transition"] = to_string(method.transition);
    out["entry"] = to_string(method.entry);
    return out;
}

Json error_json(const StageError &error) {
    return {{"stage", error.stage},
            {"error_class", error.error_class == StageError::Class::kConfig ? "config" : "numeric"},
            {"message", error.message}};
}

Json estimate_json(const EstimateRecord &record) {
    Json out;
    out["kind"] = record.target.name();
    if (!record.estimate) {
        out["status"] = "error";
        Json error = error_json(*record.error);
        for (const auto &item : error.items()) {
            out[item.key()] = item.value();
        }
        return out;
    }
    const auto &e = *record.estimate;
    out["status"] = "ok";
    out["re"] = e.value.real();
    out["im"] = e.value.imag();
    out["stat_error"] = e.stat_error;
    out["oracle"] = optional_complex(e.oracle_value);
    out["abs_error"] = e.abs_error ? Json(*e.abs_error) : Json(nullptr);
    if (e.exact_target_oracle) {
        out["exact_target_oracle"] = complex_json(*e.exact_target_oracle);
    }
    out["method"] = method_json(e.method);
    return out;
}

Json diagnostics_json(const MomentEstimate &e) {
    const auto &r = e.report;
    Json out;
    out["kind"] = e.kind.name();
    out["backend"] = to_string(r.backend);
    if (r.backend == TransformSpec::Backend::kComponentFit) {
        out["atom_count"] = r.atom_count;
        out["atoms_above_nyquist"] = e.atoms_above_nyquist;
        out["fit_residual"] = r.fit_residual;
    } else {
        out["t_max"] = r.t_max;
        out["damping_rates"] = r.damping_rates;
        Json damped = Json::array();
        for (auto v : r.damped_values) {
            damped.push_back(complex_json(v));
        }
        out["damped_values"] = damped;
        out["extrapolation_delta"] = r.extrapolation_delta;
        out["tail_delta"] = r.tail_delta;
    }
    out["transform_std_error"] = r.std_error;
    return out;
}

Json squeezing_json(const SqueezingReport &s) {
    return {{"mean_x", s.mean_x},
            {"mean_y", s.mean_y},
            {"var_x", s.var_x},
            {"var_y", s.var_y},
            {"var_x_error", s.var_x_error},
            {"var_y_error", s.var_y_error},
            {"squeezed", s.squeezed},
            {"n_mean", s.n_mean},
            {"n_mean_source", to_string(s.n_mean_source)}};
}

std::string signal_file_name(const RunResult &result, const PointResult &p, SignalSource source) {
    std::string tail = to_string(source.transition) + "_" + to_string(source.entry) + ".csv";
    if (!result.config.sweep) {
        return "signal_" + tail;
    }
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "signal_p%03zu_", p.index);
    return prefix + tail;
}

std::string csv_field(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string parameter_text(const PointResult &p) {
    return p.parameter ? format_number(*p.parameter) : "";
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

double get_double(const nlohmann::json &doc) {
    return doc.is_null() ? std::nan("") : doc.get<double>();
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string out = buf;
    // Keep integral values (and -0) typed as floating point when read back.
    if (std::isfinite(value) && out.find_first_of(".e") == std::string::npos) {
        out += ".0";
    }
    return out;
}

std::string dump_json(const Json &value) {
    std::string out;
    dump_into(value, out, 0);
    out += "\n";
    return out;
}

Json complex_json(Complex value) {
    return {{"re", value.real()}, {"im", value.imag()}};
}

std::string signal_csv(const PolarizationSignal &signal) {
    std::string out = "T,re_sigma_plus,im_sigma_plus,stderr_re,stderr_im\n";
    for (std::size_t i = 0; i < signal.values.size(); i++) {
        out += format_number(signal.grid[i]) + "," + format_number(signal.values[i].real()) + "," +
               format_number(signal.values[i].imag()) + "," + format_number(signal.std_error_re[i]) + "," +
               format_number(signal.std_error_im[i]) + "\n";
    }
    return out;
}

std::string result_json(const RunResult &result) {
    Json doc;
    doc["format_version"] = 1;
    doc["config"] = config_echo(result.config);
    Json points = Json::array();
    for (const auto &p : result.points) {
        Json point;
        point["index"] = p.index;
        point["parameter"] = p.parameter ? Json(*p.parameter) : Json(nullptr);
        Json estimates = Json::array();
        Json diagnostics = Json::array();
        for (const auto &record : p.estimates) {
            estimates.push_back(estimate_json(record));
            if (record.estimate) {
                diagnostics.push_back(diagnostics_json(*record.estimate));
            }
        }
        point["estimates"] = estimates;
        point["squeezing"] = p.squeezing ? squeezing_json(*p.squeezing) : Json(nullptr);
        point["diagnostics"] = diagnostics;
        Json errors = Json::array();
        for (const auto &e : p.errors) {
            errors.push_back(error_json(e));
        }
        point["errors"] = errors;
        Json files = Json::array();
        for (const auto &s : p.signals) {
            files.push_back(signal_file_name(result, p, s.source));
        }
        point["signal_files"] = files;
        points.push_back(point);
    }
    doc["points"] = points;
    return dump_json(doc);
}

std::string estimates_csv(const RunResult &result) {
    std::string out = "point,parameter,kind,status,re,im,stat_error,oracle_re,oracle_im,abs_error,message\n";
    for (const auto &p : result.points) {
        for (const auto &record : p.estimates) {
            out += std::to_string(p.index) + "," + parameter_text(p) + "," + record.target.name() + ",";
            if (!record.estimate) {
                out += "error,,,,,,," + csv_field(record.error->stage + ": " + record.error->message) + "\n";
                continue;
            }
            const auto &e = *record.estimate;
            out += "ok," + format_number(e.value.real()) + "," + format_number(e.value.imag()) + "," +
                   format_number(e.stat_error) + ",";
            if (e.oracle_value) {
                out += format_number(e.oracle_value->real()) + "," + format_number(e.oracle_value->imag()) + "," +
                       format_number(*e.abs_error);
            } else {
                out += ",,";
            }
            out += ",\n";
        }
    }
    return out;
}

std::string plot_data_csv(const RunResult &result) {
    std::string out = "parameter,kind,status,re_estimate,im_estimate,re_oracle,im_oracle,abs_error,rel_error\n";
    for (const auto &p : result.points) {
        for (const auto &record : p.estimates) {
            out += parameter_text(p) + "," + record.target.name() + ",";
            if (!record.estimate) {
                out += "error,,,,,,\n";
                continue;
            }
            const auto &e = *record.estimate;
            out += "ok," + format_number(e.value.real()) + "," + format_number(e.value.imag()) + ",";
            if (e.oracle_value) {
                double scale = std::abs(*e.oracle_value);
                out += format_number(e.oracle_value->real()) + "," + format_number(e.oracle_value->imag()) + "," +
                       format_number(*e.abs_error) + "," + (scale > 0 ? format_number(*e.abs_error / scale) : "");
            } else {
                out += ",,,";
            }
            out += "\n";
        }
    }
    return out;
}

std::vector<std::string> emit(const RunResult &result) {
    const auto &outputs = result.config.outputs;
    std::filesystem::path dir(outputs.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    std::vector<std::string> written;
    auto put = [&](const std::string &name, const std::string &content) {
        auto path = dir / name;
        write_file(path, content);
        written.push_back(path.string());
    };
    if (outputs.wants_json()) {
        put("result.json", result_json(result));
    }
    if (outputs.wants_csv()) {
        put("estimates.csv", estimates_csv(result));
    }
    for (const auto &p : result.points) {
        for (const auto &s : p.signals) {
            put(signal_file_name(result, p, s.source), signal_csv(s.signal));
        }
    }
    if (result.config.sweep && outputs.plot_data) {
        put("plot_data.csv", plot_data_csv(result));
    }
    return written;
}

std::string calibration_json(const CalibrationConstants &constants, const std::string &error) {
    const auto &prov = constants.k2_provenance;
    Json doc;
    doc["k1"] = complex_json(constants.k1);
    doc["k2"] = complex_json(constants.k2);
    doc["kp"] = complex_json(constants.kp);
    Json p;
    p["source"] = prov.source == K2Provenance::Source::kAnalytic ? "analytic" : "calibrated";
    p["analytic_candidate"] = complex_json(prov.analytic_candidate);
    p["printed_candidate"] = complex_json(prov.printed_candidate);
    Json refs = Json::array();
    for (std::size_t k = 0; k < prov.ratios.size(); k++) {
        Complex ratio = prov.ratios[k];
        refs.push_back({{"label", prov.reference_labels[k]},
                        {"ratio", complex_json(ratio)},
                        {"ratio_over_analytic", complex_json(ratio / prov.analytic_candidate)}});
    }
    p["references"] = refs;
    p["dispersion"] = prov.dispersion;
    doc["k2_provenance"] = p;
    doc["status"] = error.empty() ? "ok" : "error";
    if (!error.empty()) {
        doc["message"] = error;
    }
    return dump_json(doc);
}

std::string identities_csv(const std::vector<IdentityCheck> &checks) {
    std::string out = "kernel,A,B,numeric,expected,error,tolerance,status\n";
    for (const auto &c : checks) {
        out += c.kernel + "," + format_number(c.a) + "," + format_number(c.b) + "," + format_number(c.numeric) + "," +
               format_number(c.expected) + "," + format_number(c.error) + "," + format_number(c.tolerance) + "," +
               (c.passed() ? "pass" : c.converged ? "fail" : "no_convergence") + "\n";
    }
    return out;
}

std::vector<ParsedPoint> read_result_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("malformed result document: ") + e.what());
    }
    std::vector<ParsedPoint> out;
    try {
        for (const auto &point : doc.at("points")) {
            ParsedPoint p;
            if (!point.at("parameter").is_null()) {
                p.parameter = point["parameter"].get<double>();
            }
            for (const auto &e : point.at("estimates")) {
                ParsedEstimate pe;
                pe.kind = e.at("kind").get<std::string>();
                pe.status = e.at("status").get<std::string>();
                if (pe.status == "ok") {
                    pe.value = {get_double(e.at("re")), get_double(e.at("im"))};
                    pe.stat_error = get_double(e.at("stat_error"));
                    if (!e.at("oracle").is_null()) {
                        pe.oracle = Complex{get_double(e["oracle"].at("re")), get_double(e["oracle"].at("im"))};
                    }
                    if (!e.at("abs_error").is_null()) {
                        pe.abs_error = get_double(e["abs_error"]);
                    }
                }
                p.estimates.push_back(std::move(pe));
            }
            const auto &sq = point.at("squeezing");
            if (!sq.is_null()) {
                SqueezingReport s;
                s.mean_x = get_double(sq.at("mean_x"));
                s.mean_y = get_double(sq.at("mean_y"));
                s.var_x = get_double(sq.at("var_x"));
                s.var_y = get_double(sq.at("var_y"));
                s.var_x_error = get_double(sq.at("var_x_error"));
                s.var_y_error = get_double(sq.at("var_y_error"));
                s.squeezed = sq.at("squeezed").get<bool>();
                s.n_mean = get_double(sq.at("n_mean"));
                s.n_mean_source = sq.at("n_mean_source").get<std::string>() == "oracle"
                                      ? SqueezingReport::NMeanSource::kOracle
                                      : SqueezingReport::NMeanSource::kUserSupplied;
                p.squeezing = s;
            }
            out.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("result document does not match the schema: ") + e.what());
    }
    return out;
}

}  // namespace fieldprobe
