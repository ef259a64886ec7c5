#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qbat/adiabatic.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/hamiltonian.hpp"
#include "qbat/metrics.hpp"
#include "qbat/sweeps.hpp"

// Self-check suite behind `qbat validate`. Each check is quick (well under a
// second) and exercises one invariant end to end.

namespace qbat {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline CheckResult check(std::string name, bool ok, const std::string& detail) { return {std::move(name), ok, detail}; }

inline double max_population_gap(const DensityState& a, const DensityState& b) {
    const auto pa = populations(a);
    const auto pb = populations(b);
    double d = 0.0;
    for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(pa[k] - pb[k]));
    return d;
}

inline ComplexMatrix3 rabi_hamiltonian(double) {
    ComplexMatrix3 h;
    h(0, 1) = 1.0;
    h(1, 0) = 1.0;
    return h;
}

}  // namespace detail

inline std::vector<CheckResult> run_validation_suite() {
    using detail::check;
    using detail::fmt_sci;
    std::vector<CheckResult> out;
    const BatterySpectrum spectrum;
    std::mt19937_64 rng(20200917);
    std::uniform_real_distribution<double> amp(0.01, 3.0);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);

    auto guarded = [&](const std::string& name, const std::function<CheckResult()>& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back(check(name, false, std::string("threw: ") + e.what()));
        }
    };

    guarded("hamiltonian_hermitian", [&] {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k)
            worst = std::max(worst, interaction_hamiltonian({amp(rng), amp(rng), amp(rng)}, angle(rng)).hermiticity_error());
        return check("hamiltonian_hermitian", worst < 1e-12, "max |H - H^dagger| = " + fmt_sci(worst));
    });

    guarded("phi_half_spectrum", [&] {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const PulseAmplitudes a{amp(rng), amp(rng), amp(rng)};
            const auto e = jacobi_eigen(interaction_hamiltonian(a, kHalfPi)).values;
            const double om = a.total();
            worst = std::max({worst, std::abs(e[0] + om), std::abs(e[1]), std::abs(e[2] - om)});
        }
        return check("phi_half_spectrum", worst < 1e-10, "max eigenvalue error = " + fmt_sci(worst));
    });

    guarded("phase_periodicity", [&] {
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const PulseAmplitudes a{amp(rng), amp(rng), amp(rng)};
            const double phi = angle(rng);
            worst = std::max(worst, (interaction_hamiltonian(a, phi + kTwoPi) - interaction_hamiltonian(a, phi)).max_abs());
        }
        return check("phase_periodicity", worst < 1e-14, "max |H(phi+2pi) - H(phi)| = " + fmt_sci(worst));
    });

    guarded("pulse_boundary_conditions", [&] {
        bool ok = true;
        for (auto s13 : {PulseShape::sin_pi(), PulseShape::one_minus_cos_pow(1), PulseShape::one_minus_cos_pow(2)}) {
            const auto sch = closed_loop_schedule(s13, 7.0);
            const auto a0 = eval_pulses(sch, 0.0);
            const auto a1 = eval_pulses(sch, sch.tau);
            ok = ok && a0.omega12 == 0.0 && a0.omega23 == 1.0 && std::abs(a0.omega13) < 1e-15;
            ok = ok && a1.omega12 == 1.0 && a1.omega23 == 0.0 && std::abs(a1.omega13) < 1e-15;
        }
        return check("pulse_boundary_conditions", ok, "Omega(0) = (0,1,0), Omega(tau) = (1,0,0)");
    });

    guarded("rabi_closed_form", [&] {
        IntegratorConfig cfg;
        const auto tr = evolve(detail::rabi_hamiltonian, DensityState::ground(), 10.0, cfg);
        double worst = 0.0;
        for (const auto& s : tr.samples) worst = std::max(worst, std::abs(populations(s.rho)[1] - std::pow(std::sin(s.t), 2)));
        return check("rabi_closed_form", worst < 1e-7, "max |P2 - sin^2 t| = " + fmt_sci(worst));
    });

    guarded("oracle_equivalence", [&] {
        const auto sch = closed_loop_schedule(PulseShape::sin_pi(), 10.0);
        const auto h = interaction_frame_hamiltonian(sch);
        const auto rk = evolve(h, DensityState::ground(), sch.tau);
        const auto orc = evolve_propagator_oracle(h, DensityState::ground(), sch.tau, oracle_step_count(h, sch.tau));
        const double gap = detail::max_population_gap(rk.back().rho, orc.back().rho);
        return check("oracle_equivalence", gap < 1e-6 && orc.diagnostics.max_unitarity_error < 1e-12,
                     "final population gap = " + fmt_sci(gap) + ", max |U^dagger U - I| = " + fmt_sci(orc.diagnostics.max_unitarity_error));
    });

    guarded("state_invariants", [&] {
        const auto tr = simulate(closed_loop_schedule(PulseShape::sin_pi(), 50.0), spectrum);
        const double purity = std::abs(tr.back().rho.purity() - 1.0);
        const auto& d = tr.diagnostics;
        return check("state_invariants", d.max_trace_drift < 1e-8 && purity < 1e-6 && d.max_hermiticity_error < 1e-10,
                     "trace drift " + fmt_sci(d.max_trace_drift) + ", purity drift " + fmt_sci(purity) + ", hermiticity " +
                         fmt_sci(d.max_hermiticity_error));
    });

    guarded("analytic_eigensystem", [&] {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const PulseAmplitudes a{amp(rng), amp(rng), amp(rng)};
            const auto es = eigensystem_phi_half(a.omega12, a.omega23, a.omega13);
            const auto h = interaction_hamiltonian(a, kHalfPi);
            for (std::size_t n = 0; n < 3; ++n) {
                auto r = h * es.states[n];
                for (std::size_t i = 0; i < 3; ++i) r[i] -= es.energies[n] * es.states[n][i];
                worst = std::max(worst, norm(r));
            }
        }
        return check("analytic_eigensystem", worst < 1e-10, "max residual = " + fmt_sci(worst));
    });

    guarded("dark_state_weights", [&] {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const auto w = dark_state_weights({amp(rng), amp(rng), amp(rng)});
            worst = std::max(worst, std::abs(w[0] + w[1] + w[2] - 1.0));
        }
        return check("dark_state_weights", worst <= 4e-16, "max |sum w - 1| = " + fmt_sci(worst));
    });

    guarded("picture_equivalence", [&] {
        const auto sch = closed_loop_schedule(PulseShape::sin_pi(), 10.0);
        const auto both = evolve_lab_frame_equivalence(spectrum, LabFrameDrive::resonant(sch, spectrum), DensityState::ground());
        double worst = 0.0;
        for (std::size_t k = 0; k < both.lab.size(); ++k)
            worst = std::max(worst, detail::max_population_gap(both.lab.samples[k].rho, both.interaction.samples[k].rho));
        return check("picture_equivalence", worst < 1e-6, "max population gap = " + fmt_sci(worst));
    });

    guarded("adiabatic_full_charge", [&] {
        const auto r = charging_report(simulate(closed_loop_schedule(PulseShape::sin_pi(), 50.0), spectrum), spectrum);
        return check("adiabatic_full_charge", r.ergotropy >= 0.95 * spectrum.c_max(), "C(50) = " + fmt_sci(r.ergotropy));
    });

    guarded("power_consistency", [&] {
        const auto res = sweep_tau(ScheduleFamily::closed_loop(PulseShape::sin_pi()), spectrum, {0.5, 1.0, 2.0, 4.0});
        double worst = 0.0;
        for (const auto& row : res.rows) worst = std::max(worst, std::abs(row.power * row.omega0_tau - row.ergotropy));
        return check("power_consistency", worst < 1e-10, "max |P tau - C| = " + fmt_sci(worst));
    });

    return out;
}

}  // namespace qbat
