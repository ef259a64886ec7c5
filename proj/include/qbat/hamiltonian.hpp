#pragma once

#include <cmath>

#include "qbat/matrix3.hpp"
#include "qbat/model.hpp"

namespace qbat {

/// Interaction-picture Hamiltonian for resonant driving:
///
///     [ 0                Omega12   Omega13 e^{i phi} ]
///     [ Omega12          0         Omega23           ]
///     [ Omega13 e^{-i phi}  Omega23   0              ]
///
/// phi is reduced mod 2pi first, so schedules differing by 2pi give the same matrix.
inline ComplexMatrix3 interaction_hamiltonian(const PulseAmplitudes& a, double phi) {
    const Complex loop = std::polar(1.0, wrap_phase(phi));
    ComplexMatrix3 h;
    h(0, 1) = a.omega12;
    h(1, 0) = a.omega12;
    h(1, 2) = a.omega23;
    h(2, 1) = a.omega23;
    h(0, 2) = a.omega13 * loop;
    h(2, 0) = a.omega13 * std::conj(loop);
    return h;
}

inline ComplexMatrix3 build_interaction_hamiltonian(const PulseSchedule& schedule, double t) {
    return interaction_hamiltonian(eval_pulses(schedule, t), schedule.phi);
}

/// Drive term H1(t) in the lab frame, without the switch. The upper-triangle
/// entry (j,k) is Omega_jk(t) e^{+i omega_jk t} e^{-i phi_jk}: with resonant
/// carriers this rotates into the interaction-picture form above up to a
/// diagonal gauge, with the same loop phase phi1 + phi2 - phi3.
inline ComplexMatrix3 lab_drive(const LabFrameDrive& drive, double t) {
    const auto a = eval_pulses(drive.schedule, t);
    const Complex e12 = a.omega12 * std::polar(1.0, drive.omega12 * t - drive.phi1);
    const Complex e23 = a.omega23 * std::polar(1.0, drive.omega23 * t - drive.phi2);
    const Complex e13 = a.omega13 * std::polar(1.0, drive.omega13 * t - drive.phi3);
    ComplexMatrix3 h;
    h(0, 1) = e12;
    h(1, 0) = std::conj(e12);
    h(1, 2) = e23;
    h(2, 1) = std::conj(e23);
    h(0, 2) = e13;
    h(2, 0) = std::conj(e13);
    return h;
}

/// H(t) = H0 + lambda(t) H1(t), lambda = 1 only for 0 < t < tau.
inline ComplexMatrix3 build_lab_hamiltonian(const BatterySpectrum& spectrum, const LabFrameDrive& drive, double t) {
    if (!(t >= 0.0)) throw DomainError("build_lab_hamiltonian: t must be >= 0");
    ComplexMatrix3 h = spectrum.h0();
    if (SwitchWindow{drive.schedule.tau}(t) != 0.0) h += lab_drive(drive, t);
    return h;
}

/// e^{i H0 t} rho e^{-i H0 t}; leaves the diagonal untouched.
inline ComplexMatrix3 rotate_into_interaction_picture(const ComplexMatrix3& m, double t, const BatterySpectrum& spectrum) {
    const auto& e = spectrum.levels();
    ComplexMatrix3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = (i == j) ? m(i, j) : m(i, j) * std::polar(1.0, (e[i] - e[j]) * t);
    return r;
}

}  // namespace qbat
