#pragma once

#include <cmath>
#include <string>

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"

namespace qbat {

/// Level populations P_n = <eps_n|rho|eps_n>. Identical in both pictures.
inline RealVector3 populations(const DensityState& rho) { return rho.diagonal(); }

/// E = Tr{H0 rho}
inline double energy(const DensityState& rho, const BatterySpectrum& spectrum) {
    const auto p = populations(rho);
    const auto& e = spectrum.levels();
    return e[0] * p[0] + e[1] * p[1] + e[2] * p[2];
}

/// Stored energy above the ground level, C = Tr{H0 rho} - eps1.
///
/// Not the general passive-state ergotropy. The two coincide for pure states
/// (whose passive state is |eps1>), which is all unitary charging from the
/// ground state produces.
inline double ergotropy(const DensityState& rho, const BatterySpectrum& spectrum) {
    return energy(rho, spectrum) - spectrum.eps1();
}

/// P(tau) = C(tau) / tau
inline double average_power(double ergotropy_at_tau, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("average_power: tau must be > 0, got " + std::to_string(tau));
    return ergotropy_at_tau / tau;
}

struct ChargingReport {
    double tau = 0.0;
    double final_energy = 0.0;
    double ergotropy = 0.0;
    double avg_power = 0.0;
    RealVector3 populations_final{};
};

inline ChargingReport charging_report(const DensityState& final_state, double tau, const BatterySpectrum& spectrum) {
    ChargingReport r;
    r.tau = tau;
    r.final_energy = energy(final_state, spectrum);
    r.ergotropy = r.final_energy - spectrum.eps1();
    r.avg_power = average_power(r.ergotropy, tau);
    r.populations_final = populations(final_state);
    return r;
}

inline ChargingReport charging_report(const Trajectory& trajectory, const BatterySpectrum& spectrum) {
    return charging_report(trajectory.back().rho, trajectory.back().t, spectrum);
}

}  // namespace qbat
