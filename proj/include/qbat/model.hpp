#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qbat/errors.hpp"
#include "qbat/matrix3.hpp"

// Units throughout: hbar = 1 and the drive scale Omega0 = 1 unless a schedule
// says otherwise. Time is in 1/Omega0, energy in hbar*Omega0, power in
// hbar*Omega0^2.

namespace qbat {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
inline double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Bare levels eps1 < eps2 < eps3 of the battery Hamiltonian H0.
class BatterySpectrum {
public:
    BatterySpectrum() = default;

    BatterySpectrum(double eps1, double eps2, double eps3) : eps_{eps1, eps2, eps3} {
        if (!(std::isfinite(eps1) && std::isfinite(eps2) && std::isfinite(eps3)))
            throw DomainError("BatterySpectrum: levels must be finite");
        if (!(eps1 < eps2 && eps2 < eps3))
            throw DomainError("BatterySpectrum: levels must satisfy eps1 < eps2 < eps3");
    }

    double eps1() const { return eps_[0]; }
    double eps2() const { return eps_[1]; }
    double eps3() const { return eps_[2]; }
    const RealVector3& levels() const { return eps_; }

    /// Largest storable ergotropy, eps3 - eps1.
    double c_max() const { return eps_[2] - eps_[0]; }

    ComplexMatrix3 h0() const { return ComplexMatrix3::diagonal(eps_); }

    friend bool operator==(const BatterySpectrum&, const BatterySpectrum&) = default;

private:
    RealVector3 eps_{0.0, 1.0, 1.95};
};

/// Normalized envelope s -> shape(s) on s = t/tau in [0, 1].
class PulseShape {
public:
    enum class Kind { Zero, LinearRampUp, LinearRampDown, SinPi, OneMinusCosPow };

    constexpr PulseShape() = default;

    static constexpr PulseShape zero() { return PulseShape(Kind::Zero, 1); }
    static constexpr PulseShape linear_ramp_up() { return PulseShape(Kind::LinearRampUp, 1); }
    static constexpr PulseShape linear_ramp_down() { return PulseShape(Kind::LinearRampDown, 1); }
    static constexpr PulseShape sin_pi() { return PulseShape(Kind::SinPi, 1); }
    static PulseShape one_minus_cos_pow(int n) {
        if (n < 1) throw DomainError("PulseShape: exponent n must be a positive integer, got " + std::to_string(n));
        return PulseShape(Kind::OneMinusCosPow, n);
    }

    Kind kind() const { return kind_; }
    /// Exponent of (1 - cos 2pi s)^n; 1 for every other kind.
    int exponent() const { return n_; }

    double operator()(double s) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::LinearRampUp: return s;
            case Kind::LinearRampDown: return 1.0 - s;
            case Kind::SinPi: return std::sin(kPi * s);
            case Kind::OneMinusCosPow: {
                const double base = 1.0 - std::cos(kTwoPi * s);
                double r = 1.0;
                for (int k = 0; k < n_; ++k) r *= base;
                return r;
            }
        }
        return 0.0;
    }

    /// Upper bound of the shape on [0, 1].
    double peak() const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::OneMinusCosPow: return std::ldexp(1.0, n_);
            default: return 1.0;
        }
    }

    friend bool operator==(const PulseShape&, const PulseShape&) = default;

private:
    constexpr PulseShape(Kind k, int n) : kind_(k), n_(n) {}

    Kind kind_ = Kind::Zero;
    int n_ = 1;
};

struct PulseAmplitudes {
    double omega12 = 0.0;
    double omega23 = 0.0;
    double omega13 = 0.0;

    /// Omega^2 = Omega12^2 + Omega23^2 + Omega13^2
    double total_squared() const { return omega12 * omega12 + omega23 * omega23 + omega13 * omega13; }
    double total() const { return std::sqrt(total_squared()); }
};

/// The three drive envelopes, their scale Omega0, duration tau and global phase.
struct PulseSchedule {
    PulseShape shape12 = PulseShape::linear_ramp_up();
    PulseShape shape23 = PulseShape::linear_ramp_down();
    PulseShape shape13 = PulseShape::zero();
    double omega0 = 1.0;
    double tau = 1.0;
    double phi = kHalfPi;

    void validate() const {
        if (!(std::isfinite(tau) && tau > 0.0)) throw DomainError("PulseSchedule: tau must be > 0");
        if (!(std::isfinite(omega0) && omega0 > 0.0)) throw DomainError("PulseSchedule: omega0 must be > 0");
        if (!std::isfinite(phi)) throw DomainError("PulseSchedule: phi must be finite");
    }

    friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

/// Linear ramps for Omega12/Omega23 with the given Omega13 envelope.
inline PulseSchedule closed_loop_schedule(PulseShape shape13, double tau, double phi = kHalfPi) {
    PulseSchedule s;
    s.shape13 = shape13;
    s.tau = tau;
    s.phi = phi;
    s.validate();
    return s;
}

/// Drive amplitudes Omega0 * shape(t / tau). Throws DomainError outside [0, tau].
inline PulseAmplitudes eval_pulses(const PulseSchedule& schedule, double t) {
    if (!(t >= 0.0 && t <= schedule.tau))
        throw DomainError("eval_pulses: t = " + std::to_string(t) + " outside [0, " + std::to_string(schedule.tau) + "]");
    const double s = t / schedule.tau;
    return {schedule.omega0 * schedule.shape12(s), schedule.omega0 * schedule.shape23(s),
            schedule.omega0 * schedule.shape13(s)};
}

/// lambda(t): 1 on the open window 0 < t < tau, 0 elsewhere.
struct SwitchWindow {
    double tau = 1.0;

    double operator()(double t) const { return (t > 0.0 && t < tau) ? 1.0 : 0.0; }
};

/// Lab-frame drive: carriers and individual phases of the three fields.
struct LabFrameDrive {
    PulseSchedule schedule;
    double omega12 = 0.0;
    double omega23 = 0.0;
    double omega13 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;

    /// Resonant carriers, phi1 = phi and phi2 = phi3 = 0.
    static LabFrameDrive resonant(const PulseSchedule& schedule, const BatterySpectrum& spectrum) {
        LabFrameDrive d;
        d.schedule = schedule;
        d.omega12 = spectrum.eps2() - spectrum.eps1();
        d.omega23 = spectrum.eps3() - spectrum.eps2();
        d.omega13 = spectrum.eps3() - spectrum.eps1();
        d.phi1 = schedule.phi;
        return d;
    }

    double global_phase() const { return phi1 + phi2 - phi3; }

    bool is_resonant(const BatterySpectrum& spectrum, double tol = 1e-12) const {
        return std::abs(omega12 - (spectrum.eps2() - spectrum.eps1())) <= tol &&
               std::abs(omega23 - (spectrum.eps3() - spectrum.eps2())) <= tol &&
               std::abs(omega13 - (spectrum.eps3() - spectrum.eps1())) <= tol;
    }

    bool phase_consistent(double tol = 1e-12) const {
        const double d = wrap_phase(global_phase() - schedule.phi);
        return d <= tol || kTwoPi - d <= tol;
    }
};

}  // namespace qbat
