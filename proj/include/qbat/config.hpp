#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "qbat/model.hpp"
#include "qbat/sweeps.hpp"

namespace qbat {

/// `points` evenly spaced values from `min` to `max` inclusive.
struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    int points = 2;

    std::vector<double> values() const { return linspace(min, max, static_cast<std::size_t>(points)); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
    BatterySpectrum spectrum;
    ScheduleFamily family;
    double tau = 50.0;  ///< omega0 tau for `simulate`
    GridSpec tau_grid{0.1, 50.0, 500};
    GridSpec phi_grid{0.0, kTwoPi, 201};
    IntegratorConfig integrator;
    TauSearch search;
    std::string output;

    PulseSchedule schedule() const { return family.at(tau); }

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        return a.spectrum == b.spectrum && a.family.shape12 == b.family.shape12 && a.family.shape23 == b.family.shape23 &&
               a.family.shape13 == b.family.shape13 && a.family.omega0 == b.family.omega0 && a.family.phi == b.family.phi &&
               a.tau == b.tau && a.tau_grid == b.tau_grid && a.phi_grid == b.phi_grid && a.integrator == b.integrator &&
               a.search == b.search && a.output == b.output;
    }
};

inline std::string shape_name(const PulseShape& s) {
    switch (s.kind()) {
        case PulseShape::Kind::Zero: return "zero";
        case PulseShape::Kind::LinearRampUp: return "linear_ramp_up";
        case PulseShape::Kind::LinearRampDown: return "linear_ramp_down";
        case PulseShape::Kind::SinPi: return "sin";
        case PulseShape::Kind::OneMinusCosPow: return "one_minus_cos_pow";
    }
    return "zero";
}

/// Builds a shape from its name; `n` is only used by one_minus_cos_pow.
inline PulseShape shape_from_name(const std::string& name, int n, const std::string& key) {
    if (name == "zero") return PulseShape::zero();
    if (name == "linear_ramp_up") return PulseShape::linear_ramp_up();
    if (name == "linear_ramp_down") return PulseShape::linear_ramp_down();
    if (name == "sin") return PulseShape::sin_pi();
    if (name == "one_minus_cos_pow") {
        if (n < 1) throw ValidationError(key, key + ": exponent n must be >= 1");
        return PulseShape::one_minus_cos_pow(n);
    }
    throw ParseError(key, key + ": unknown pulse shape '" + name + "'");
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw ParseError(prefix + k, "unknown key '" + prefix + k + "'");
}

inline const json& require_object(const json& j, const std::string& key) {
    if (!j.is_object()) throw ParseError(key, key + ": expected an object");
    return j;
}

inline double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ParseError(key, key + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(key, key + ": must be finite");
    return v;
}

inline int get_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ParseError(key, key + ": expected an integer");
    return j.get<int>();
}

inline PulseShape parse_shape(const json& j, const std::string& key, int default_n) {
    if (j.is_string()) return shape_from_name(j.get<std::string>(), default_n, key);
    if (j.is_object()) {
        reject_unknown(j, {"kind", "n"}, key + ".");
        if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError(key + ".kind", key + ".kind: expected a string");
        const int n = j.contains("n") ? get_int(j["n"], key + ".n") : 1;
        return shape_from_name(j["kind"].get<std::string>(), n, key);
    }
    throw ParseError(key, key + ": expected a shape name or {\"kind\", \"n\"}");
}

inline GridSpec parse_grid(const json& j, const std::string& key, GridSpec g) {
    require_object(j, key);
    reject_unknown(j, {"min", "max", "points"}, key + ".");
    if (j.contains("min")) g.min = get_number(j["min"], key + ".min");
    if (j.contains("max")) g.max = get_number(j["max"], key + ".max");
    if (j.contains("points")) g.points = get_int(j["points"], key + ".points");
    return g;
}

inline json shape_to_json(const PulseShape& s) {
    if (s.kind() == PulseShape::Kind::OneMinusCosPow) return json{{"kind", shape_name(s)}, {"n", s.exponent()}};
    return shape_name(s);
}

}  // namespace detail

/// Checks every precondition the subcommands rely on. Throws ValidationError
/// naming the offending key.
inline void validate(const RunConfig& c) {
    if (!(c.tau > 0.0)) throw ValidationError("tau", "tau: must be > 0");
    if (!(c.family.omega0 > 0.0)) throw ValidationError("omega0", "omega0: must be > 0");
    if (c.tau_grid.points < 1) throw ValidationError("tau_grid.points", "tau_grid.points: must be >= 1");
    if (!(c.tau_grid.min > 0.0)) throw ValidationError("tau_grid.min", "tau_grid.min: must be > 0");
    if (c.tau_grid.points > 1 && !(c.tau_grid.max > c.tau_grid.min)) throw ValidationError("tau_grid.max", "tau_grid.max: must exceed min");
    if (c.phi_grid.points < 1) throw ValidationError("phi_grid.points", "phi_grid.points: must be >= 1");
    if (c.phi_grid.points > 1 && !(c.phi_grid.max > c.phi_grid.min)) throw ValidationError("phi_grid.max", "phi_grid.max: must exceed min");
    if (!(c.integrator.max_step_scaled > 0.0)) throw ValidationError("integrator.max_step_scaled", "integrator.max_step_scaled: must be > 0");
    if (!(c.integrator.trace_drift_tol > 0.0)) throw ValidationError("integrator.trace_drift_tol", "integrator.trace_drift_tol: must be > 0");
    if (c.integrator.samples < 1) throw ValidationError("integrator.samples", "integrator.samples: must be >= 1");
    if (!(c.search.min >= 0.0 && c.search.min < c.search.max && c.search.max <= 200.0))
        throw ValidationError("search", "search: range must satisfy 0 <= min < max <= 200");
    if (!(c.search.grid_step > 0.0)) throw ValidationError("search.grid_step", "search.grid_step: must be > 0");
    if (!(c.search.tolerance > 0.0)) throw ValidationError("search.tolerance", "search.tolerance: must be > 0");
}

/// Parses and validates a JSON run configuration. Missing keys take the
/// defaults of RunConfig: levels (0, 1, 1.95), phi = pi/2, linear ramps and
/// Omega13 = 0.
inline RunConfig parse_config(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    detail::require_object(doc, "<root>");
    detail::reject_unknown(doc, {"eps", "shape12", "shape23", "shape13", "n", "omega0", "phi", "tau", "tau_grid", "phi_grid",
                                 "integrator", "search", "output"},
                           "");

    RunConfig c;
    if (doc.contains("eps")) {
        const auto& e = doc["eps"];
        if (!e.is_array() || e.size() != 3) throw ParseError("eps", "eps: expected an array of three numbers");
        const double e1 = detail::get_number(e[0], "eps[0]");
        const double e2 = detail::get_number(e[1], "eps[1]");
        const double e3 = detail::get_number(e[2], "eps[2]");
        if (!(e1 < e2 && e2 < e3)) throw ValidationError("eps", "eps: levels must satisfy eps1 < eps2 < eps3");
        c.spectrum = BatterySpectrum(e1, e2, e3);
    }

    int n13 = 1;
    if (doc.contains("n")) {
        n13 = detail::get_int(doc["n"], "n");
        if (!doc.contains("shape13") || !doc["shape13"].is_string() || doc["shape13"].get<std::string>() != "one_minus_cos_pow")
            throw ValidationError("n", "n: only applies to shape13 = one_minus_cos_pow");
    }
    if (doc.contains("shape12")) c.family.shape12 = detail::parse_shape(doc["shape12"], "shape12", 1);
    if (doc.contains("shape23")) c.family.shape23 = detail::parse_shape(doc["shape23"], "shape23", 1);
    if (doc.contains("shape13")) c.family.shape13 = detail::parse_shape(doc["shape13"], "shape13", n13);
    if (doc.contains("omega0")) c.family.omega0 = detail::get_number(doc["omega0"], "omega0");
    if (doc.contains("phi")) c.family.phi = detail::get_number(doc["phi"], "phi");
    if (doc.contains("tau")) c.tau = detail::get_number(doc["tau"], "tau");
    if (doc.contains("tau_grid")) c.tau_grid = detail::parse_grid(doc["tau_grid"], "tau_grid", c.tau_grid);
    if (doc.contains("phi_grid")) c.phi_grid = detail::parse_grid(doc["phi_grid"], "phi_grid", c.phi_grid);

    if (doc.contains("integrator")) {
        const auto& j = detail::require_object(doc["integrator"], "integrator");
        detail::reject_unknown(j, {"max_step_scaled", "trace_drift_tol", "picture", "samples"}, "integrator.");
        if (j.contains("max_step_scaled")) c.integrator.max_step_scaled = detail::get_number(j["max_step_scaled"], "integrator.max_step_scaled");
        if (j.contains("trace_drift_tol")) c.integrator.trace_drift_tol = detail::get_number(j["trace_drift_tol"], "integrator.trace_drift_tol");
        if (j.contains("samples")) c.integrator.samples = detail::get_int(j["samples"], "integrator.samples");
        if (j.contains("picture")) {
            if (!j["picture"].is_string()) throw ParseError("integrator.picture", "integrator.picture: expected a string");
            const auto p = j["picture"].get<std::string>();
            if (p == "interaction") c.integrator.picture = Picture::Interaction;
            else if (p == "lab") c.integrator.picture = Picture::Lab;
            else throw ParseError("integrator.picture", "integrator.picture: expected 'interaction' or 'lab'");
        }
    }
    if (doc.contains("search")) {
        const auto& j = detail::require_object(doc["search"], "search");
        detail::reject_unknown(j, {"min", "max", "grid_step", "tolerance"}, "search.");
        if (j.contains("min")) c.search.min = detail::get_number(j["min"], "search.min");
        if (j.contains("max")) c.search.max = detail::get_number(j["max"], "search.max");
        if (j.contains("grid_step")) c.search.grid_step = detail::get_number(j["grid_step"], "search.grid_step");
        if (j.contains("tolerance")) c.search.tolerance = detail::get_number(j["tolerance"], "search.tolerance");
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw ParseError("output", "output: expected a string");
        c.output = doc["output"].get<std::string>();
    }

    validate(c);
    return c;
}

inline std::string serialize_config(const RunConfig& c) {
    using detail::json;
    json j;
    j["eps"] = {c.spectrum.eps1(), c.spectrum.eps2(), c.spectrum.eps3()};
    j["shape12"] = detail::shape_to_json(c.family.shape12);
    j["shape23"] = detail::shape_to_json(c.family.shape23);
    j["shape13"] = detail::shape_to_json(c.family.shape13);
    j["omega0"] = c.family.omega0;
    j["phi"] = c.family.phi;
    j["tau"] = c.tau;
    j["tau_grid"] = {{"min", c.tau_grid.min}, {"max", c.tau_grid.max}, {"points", c.tau_grid.points}};
    j["phi_grid"] = {{"min", c.phi_grid.min}, {"max", c.phi_grid.max}, {"points", c.phi_grid.points}};
    j["integrator"] = {{"max_step_scaled", c.integrator.max_step_scaled},
                       {"trace_drift_tol", c.integrator.trace_drift_tol},
                       {"picture", c.integrator.picture == Picture::Lab ? "lab" : "interaction"},
                       {"samples", c.integrator.samples}};
    j["search"] = {{"min", c.search.min}, {"max", c.search.max}, {"grid_step", c.search.grid_step}, {"tolerance", c.search.tolerance}};
    if (!c.output.empty()) j["output"] = c.output;
    return j.dump(2);
}

}  // namespace qbat
