#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbat/adiabatic.hpp"
#include "qbat/config.hpp"
#include "qbat/csv.hpp"
#include "qbat/errors.hpp"
#include "qbat/sweeps.hpp"
#include "qbat/validation.hpp"

namespace qbat {

namespace detail {

struct CliOverrides {
    std::string config_path;
    std::string out_path;
    std::optional<std::string> shape13;
    std::optional<int> n;
    std::optional<double> phi;
    std::optional<double> tau;
    std::optional<int> grid_points;
};

inline std::string one_line(std::string s) {
    for (auto& ch : s)
        if (ch == '\n' || ch == '\r') ch = ' ';
    return s;
}

inline std::string quoted(const std::string& s) {
    std::string r = "\"";
    for (char ch : one_line(s)) {
        if (ch == '"' || ch == '\\') r += '\\';
        r += ch;
    }
    return r + "\"";
}

inline RunConfig load_config(const CliOverrides& o, const std::string& subcommand) {
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw IoError("cannot read config '" + o.config_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    RunConfig c = parse_config(text);
    if (o.shape13) c.family.shape13 = shape_from_name(*o.shape13, o.n.value_or(c.family.shape13.exponent()), "shape13");
    if (o.n) {
        if (c.family.shape13.kind() != PulseShape::Kind::OneMinusCosPow) throw ValidationError("n", "n: only applies to shape13 = one_minus_cos_pow");
        if (*o.n < 1) throw ValidationError("n", "n: exponent must be >= 1");
        c.family.shape13 = PulseShape::one_minus_cos_pow(*o.n);
    }
    if (o.phi) c.family.phi = *o.phi;
    if (o.tau) c.tau = *o.tau;
    if (o.grid_points) {
        if (subcommand == "sweep-tau" || subcommand == "contour") c.tau_grid.points = *o.grid_points;
        if (subcommand == "sweep-phi" || subcommand == "contour") c.phi_grid.points = *o.grid_points;
    }
    if (!o.out_path.empty()) c.output = o.out_path;
    validate(c);
    return c;
}

inline void emit(const CsvTable& table, const RunConfig& c, std::ostream& out) {
    if (c.output.empty()) write_csv(table, out);
    else write_csv(table, std::filesystem::path(c.output));
}

}  // namespace detail

/// Entry point of the `qbat` tool. Returns the process exit status; on failure
/// a single line `error: kind=<kind> key=<key> message="<text>"` goes to `err`.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Closed-loop three-level quantum battery simulator", "qbat"};
    app.require_subcommand(1);
    detail::CliOverrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON run configuration");
        sub->add_option("--out", o.out_path, "output CSV path (stdout if omitted)");
        sub->add_option("--shape13", o.shape13, "Omega13 envelope")->check(CLI::IsMember({"zero", "sin", "one_minus_cos_pow"}));
        sub->add_option("--n", o.n, "exponent of (1 - cos 2pi t/tau)^n");
        sub->add_option("--phi", o.phi, "global drive phase [rad]");
        sub->add_option("--tau", o.tau, "protocol duration Omega0*tau");
        sub->add_option("--grid-points", o.grid_points, "points of the swept grid");
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "time series of populations, energy and ergotropy");
    auto* sweep_tau_cmd = app.add_subcommand("sweep-tau", "C(tau) and P(tau) over an Omega0*tau grid");
    auto* sweep_phi_cmd = app.add_subcommand("sweep-phi", "maximum power over tau for each phi");
    auto* contour_cmd = app.add_subcommand("contour", "charging energy and power over (phi, tau)");
    auto* ratio_cmd = app.add_subcommand("ratio", "P_max(closed loop) / P_max(Omega13 = 0)");
    auto* validate_cmd = app.add_subcommand("validate", "run the built-in invariant checks");
    for (auto* sub : {simulate_cmd, sweep_tau_cmd, sweep_phi_cmd, contour_cmd, ratio_cmd, validate_cmd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: kind=usage key=argv message=" << detail::quoted(e.what()) << '\n';
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "validate") {
            const auto results = run_validation_suite();
            bool all = true;
            for (const auto& r : results) {
                out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
                all = all && r.passed;
            }
            out << (all ? "validate: all checks passed" : "validate: FAILED") << '\n';
            return all ? 0 : 1;
        }

        const RunConfig c = detail::load_config(o, name);
        SweepSettings settings;
        settings.integrator = c.integrator;

        if (name == "simulate") {
            const auto schedule = c.schedule();
            const auto traj = simulate(schedule, c.spectrum, c.integrator);
            detail::emit(to_table(traj, c.spectrum), c, out);
            const auto rep = charging_report(traj, c.spectrum);
            std::ostream& info = c.output.empty() ? err : out;
            info << "omega0_tau=" << format_number(c.tau) << " ergotropy=" << format_number(rep.ergotropy)
                 << " power=" << format_number(rep.ergotropy / c.tau) << " P3=" << format_number(rep.populations_final[2])
                 << " non_adiabatic=" << (is_non_adiabatic(schedule) ? 1 : 0) << '\n';
        } else if (name == "sweep-tau") {
            detail::emit(to_table(sweep_tau(c.family, c.spectrum, c.tau_grid.values(), settings)), c, out);
        } else if (name == "sweep-phi") {
            detail::emit(to_table(sweep_phi(c.family, c.spectrum, c.phi_grid.values(), c.search, settings)), c, out);
        } else if (name == "contour") {
            detail::emit(to_table(contour(c.family, c.spectrum, c.phi_grid.values(), c.tau_grid.values(), settings)), c, out);
        } else if (name == "ratio") {
            const auto r = baseline_ratio(c.family.shape13, c.spectrum, c.search, c.integrator);
            out << "ratio=" << format_number(r.ratio) << " p_max_closed=" << format_number(r.closed.p_max)
                << " tau_star_closed=" << format_number(r.closed.tau_star) << " p_max_open=" << format_number(r.open.p_max)
                << " tau_star_open=" << format_number(r.open.tau_star) << '\n';
        }
        return 0;
    } catch (const ParseError& e) {
        err << "error: kind=parse key=" << e.key() << " message=" << detail::quoted(e.what()) << '\n';
    } catch (const ValidationError& e) {
        err << "error: kind=validation key=" << e.key() << " message=" << detail::quoted(e.what()) << '\n';
    } catch (const Error& e) {
        err << "error: kind=" << e.kind() << " key= message=" << detail::quoted(e.what()) << '\n';
    } catch (const std::exception& e) {
        err << "error: kind=internal key= message=" << detail::quoted(e.what()) << '\n';
    }
    return 1;
}

}  // namespace qbat
