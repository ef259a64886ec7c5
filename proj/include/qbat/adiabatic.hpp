#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "qbat/errors.hpp"
#include "qbat/hamiltonian.hpp"
#include "qbat/matrix3.hpp"
#include "qbat/model.hpp"

namespace qbat {

/// Instantaneous eigensystem of H_int at phi = pi/2, ordered (E-, E0, E+).
struct EigenSystem {
    RealVector3 energies{};
    std::array<ComplexVector3, 3> states{};

    double e_minus() const { return energies[0]; }
    double e_zero() const { return energies[1]; }
    double e_plus() const { return energies[2]; }
    const ComplexVector3& dark_state() const { return states[1]; }
};

/// Closed-form eigenvectors at phi = pi/2. With Omega^2 = O12^2 + O23^2 + O13^2
/// and Omega1^2 = O13^2 + O23^2:
///
///   |E0> = (O23, i O13, -O12) / Omega,                          E0 = 0
///   |E+-> = ( (O12 O23/(Omega Omega1) +- i O13/Omega1),
///             +-(O23/Omega1 +- i O12 O13/(Omega Omega1)),
///             Omega1/Omega ) / sqrt(2),                         E+- = +-Omega
///
/// Each state's phase is then fixed (largest component real positive).
/// Throws FormulaSingular when Omega1 = 0 (the expressions are 0/0 there) and
/// DomainError when Omega = 0.
inline EigenSystem eigensystem_phi_half(double omega12, double omega23, double omega13) {
    const double om2 = omega12 * omega12 + omega23 * omega23 + omega13 * omega13;
    const double om = std::sqrt(om2);
    if (!(om > 0.0)) throw DomainError("eigensystem_phi_half: all amplitudes vanish");
    const double om1 = std::sqrt(omega13 * omega13 + omega23 * omega23);
    if (!(om1 > 0.0)) throw FormulaSingular("eigensystem_phi_half: Omega13 = Omega23 = 0");

    const double r = 1.0 / std::sqrt(2.0);
    const double a = omega12 * omega23 / (om * om1);
    const double b = omega13 / om1;
    const double c = omega23 / om1;
    const double d = omega12 * omega13 / (om * om1);
    const double z = om1 / om;

    EigenSystem es;
    es.energies = {-om, 0.0, om};
    es.states[0] = {r * Complex{a, -b}, -r * Complex{c, -d}, Complex{r * z}};
    es.states[1] = {Complex{omega23 / om}, Complex{0.0, omega13 / om}, Complex{-omega12 / om}};
    es.states[2] = {r * Complex{a, b}, r * Complex{c, d}, Complex{r * z}};
    for (auto& s : es.states) s = fix_phase(s);
    return es;
}

/// Numeric eigensystem of H_int(phi = pi/2) for the same amplitudes. The three
/// levels (-Omega, 0, Omega) are nondegenerate for Omega > 0, so ascending
/// order identifies them.
inline EigenSystem eigensystem_phi_half_numeric(double omega12, double omega23, double omega13) {
    const auto h = interaction_hamiltonian({omega12, omega23, omega13}, kHalfPi);
    const auto e = jacobi_eigen(h);
    EigenSystem es;
    es.energies = e.values;
    for (std::size_t k = 0; k < 3; ++k) es.states[k] = e.vector(k);
    return es;
}

/// Closed form where valid, Jacobi fallback at the singular points.
inline EigenSystem eigensystem_at(const PulseSchedule& schedule, double t) {
    const auto a = eval_pulses(schedule, t);
    try {
        return eigensystem_phi_half(a.omega12, a.omega23, a.omega13);
    } catch (const FormulaSingular&) {
        return eigensystem_phi_half_numeric(a.omega12, a.omega23, a.omega13);
    }
}

/// Eigensystems along `times`, with each state's phase chosen to maximize
/// overlap with the same state at the previous time.
inline std::vector<EigenSystem> track_eigensystem(const PulseSchedule& schedule, const std::vector<double>& times) {
    std::vector<EigenSystem> out;
    out.reserve(times.size());
    for (double t : times) {
        auto es = eigensystem_at(schedule, t);
        if (!out.empty()) {
            for (std::size_t k = 0; k < 3; ++k) {
                const Complex ov = inner(out.back().states[k], es.states[k]);
                if (std::abs(ov) > 0.0) es.states[k] = scaled(es.states[k], std::conj(ov) / std::abs(ov));
            }
        }
        out.push_back(es);
    }
    return out;
}

/// Level weights |<eps_n|E0>|^2 = (O23^2, O13^2, O12^2) / Omega^2.
inline RealVector3 dark_state_weights(const PulseAmplitudes& a) {
    const double om2 = a.total_squared();
    if (!(om2 > 0.0)) throw DomainError("dark_state_weights: Omega(t) = 0");
    return {a.omega23 * a.omega23 / om2, a.omega13 * a.omega13 / om2, a.omega12 * a.omega12 / om2};
}

inline bool is_half_pi(double phi) { return std::abs(wrap_phase(phi) - kHalfPi) <= 1e-12; }

/// Ergotropy of the instantaneous dark state, the adiabatic-following limit
/// of charging from |eps1>. Only defined at phi = pi/2.
inline double adiabatic_ergotropy(const PulseSchedule& schedule, const BatterySpectrum& spectrum, double t) {
    if (!is_half_pi(schedule.phi)) throw ContractViolation("adiabatic_ergotropy: requires phi = pi/2");
    const auto w = dark_state_weights(eval_pulses(schedule, t));
    return w[0] * spectrum.eps1() + w[1] * spectrum.eps2() + w[2] * spectrum.eps3() - spectrum.eps1();
}

struct AdiabaticPoint {
    double t = 0.0;
    double ergotropy = 0.0;
};

using AdiabaticCurve = std::vector<AdiabaticPoint>;

inline AdiabaticCurve adiabatic_curve(const PulseSchedule& schedule, const BatterySpectrum& spectrum, int intervals = 1000) {
    AdiabaticCurve curve;
    curve.reserve(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        const double t = schedule.tau * (static_cast<double>(k) / intervals);
        curve.push_back({t, adiabatic_ergotropy(schedule, spectrum, t)});
    }
    return curve;
}

/// min over a uniform grid of Omega(t), the gap between E0 and E+-.
inline double min_gap(const PulseSchedule& schedule, int intervals = 20000) {
    schedule.validate();
    double best = INFINITY;
    for (int k = 0; k <= intervals; ++k)
        best = std::min(best, eval_pulses(schedule, schedule.tau * (static_cast<double>(k) / intervals)).total());
    return best;
}

/// Advisory flag: protocols shorter than Omega0 tau = 10 are reported as non-adiabatic.
inline constexpr double kAdiabaticOmegaTau = 10.0;

inline bool is_non_adiabatic(const PulseSchedule& schedule) { return schedule.omega0 * schedule.tau < kAdiabaticOmegaTau; }

}  // namespace qbat
