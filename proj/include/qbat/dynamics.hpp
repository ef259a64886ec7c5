#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qbat/errors.hpp"
#include "qbat/hamiltonian.hpp"
#include "qbat/matrix3.hpp"
#include "qbat/model.hpp"

namespace qbat {

template <class F>
concept HamiltonianFunction = std::invocable<const F&, double> &&
                              std::convertible_to<std::invoke_result_t<const F&, double>, ComplexMatrix3>;

/// 3x3 density matrix. `from_matrix` validates Hermiticity (1e-10), unit trace
/// (1e-8) and positivity (eigenvalues >= -1e-8); the integrators construct
/// unchecked states and monitor drift themselves.
class DensityState {
public:
    DensityState() : m_(ComplexMatrix3::diagonal(RealVector3{1.0, 0.0, 0.0})) {}

    static DensityState from_matrix(const ComplexMatrix3& m) {
        DensityState s(m);
        if (m.hermiticity_error() > 1e-10) throw DomainError("DensityState: matrix is not Hermitian");
        if (std::abs(m.trace() - Complex{1.0}) > 1e-8) throw DomainError("DensityState: trace differs from 1");
        if (jacobi_eigen(m).values[0] < -1e-8) throw DomainError("DensityState: matrix is not positive semidefinite");
        return s;
    }

    static DensityState unchecked(const ComplexMatrix3& m) { return DensityState(m); }

    static DensityState pure(const ComplexVector3& psi) {
        const double n = norm(psi);
        if (!(n > 0.0)) throw DomainError("DensityState::pure: zero vector");
        return DensityState(ComplexMatrix3::outer(scaled(psi, 1.0 / n)));
    }

    /// |eps_n><eps_n| for n = 0, 1, 2.
    static DensityState level(std::size_t n) { return pure(basis_vector(n)); }

    static DensityState ground() { return level(0); }

    static DensityState maximally_mixed() { return DensityState(ComplexMatrix3::diagonal(RealVector3{1.0 / 3, 1.0 / 3, 1.0 / 3})); }

    const ComplexMatrix3& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }
    double purity() const { return (m_ * m_).trace().real(); }
    double hermiticity_error() const { return m_.hermiticity_error(); }
    RealVector3 diagonal() const { return m_.real_diagonal(); }

private:
    explicit DensityState(const ComplexMatrix3& m) : m_(m) {}

    ComplexMatrix3 m_;
};

inline DensityState to_interaction_picture(const DensityState& rho, double t, const BatterySpectrum& spectrum) {
    return DensityState::unchecked(rotate_into_interaction_picture(rho.matrix(), t, spectrum));
}

enum class Picture { Interaction, Lab };

struct IntegratorConfig {
    /// Upper bound on (max_t ||H(t)||_2) * dt.
    double max_step_scaled = 0.01;
    double trace_drift_tol = 1e-8;
    Picture picture = Picture::Interaction;
    /// Number of stored sample intervals of a Trajectory; the step count is
    /// rounded up to a multiple of this so t = tau*j/samples lands on a step.
    int samples = 1000;

    void validate() const {
        if (!(max_step_scaled > 0.0 && std::isfinite(max_step_scaled))) throw DomainError("IntegratorConfig: max_step_scaled must be > 0");
        if (!(trace_drift_tol > 0.0)) throw DomainError("IntegratorConfig: trace_drift_tol must be > 0");
        if (samples < 1) throw DomainError("IntegratorConfig: samples must be >= 1");
    }

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct TrajectorySample {
    double t = 0.0;
    DensityState rho;
};

struct EvolutionDiagnostics {
    std::int64_t steps = 0;
    double dt = 0.0;
    double max_trace_drift = 0.0;
    double max_hermiticity_error = 0.0;
    /// Propagator oracle only: max ||U^dagger U - I||_inf over steps.
    double max_unitarity_error = 0.0;
};

/// Time-ordered samples from t = 0 to t = tau inclusive.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::int64_t sample_stride = 1;
    EvolutionDiagnostics diagnostics;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }
    std::size_t size() const { return samples.size(); }
};

/// max ||H(t)||_2 over `probes + 1` equally spaced points of [0, tau].
template <HamiltonianFunction F>
double peak_norm(const F& hamiltonian_at, double tau, int probes = 256) {
    double peak = 0.0;
    for (int k = 0; k <= probes; ++k)
        peak = std::max(peak, hermitian_spectral_norm(hamiltonian_at(tau * (static_cast<double>(k) / probes))));
    return peak;
}

/// Smallest step count with peak * dt <= max_step_scaled.
inline std::int64_t min_step_count(double tau, double peak, double max_step_scaled) {
    const double n = std::ceil(tau * peak / max_step_scaled);
    if (!(n < 1e12)) throw DomainError("step count overflow for tau = " + std::to_string(tau));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

namespace detail {

inline ComplexMatrix3 liouville_rhs(const ComplexMatrix3& h, const ComplexMatrix3& rho) {
    return commutator(h, rho) * Complex{0.0, -1.0};
}

/// Fixed-step RK4 on d(rho)/dt = -i[H(t), rho] over n_steps uniform steps.
/// `on_step(n, t, rho)` is called after every step and for n = 0.
template <HamiltonianFunction F, class OnStep>
ComplexMatrix3 rk4_integrate(const F& hamiltonian_at, const ComplexMatrix3& rho0, double tau, std::int64_t n_steps,
                             double trace_drift_tol, EvolutionDiagnostics& diag, OnStep&& on_step) {
    const double dt = tau / static_cast<double>(n_steps);
    diag.steps = n_steps;
    diag.dt = dt;
    const Complex tr0 = rho0.trace();

    ComplexMatrix3 rho = rho0;
    on_step(std::int64_t{0}, 0.0, rho);
    ComplexMatrix3 h_start = hamiltonian_at(0.0);
    for (std::int64_t n = 0; n < n_steps; ++n) {
        const double t0 = tau * (static_cast<double>(n) / static_cast<double>(n_steps));
        const double t1 = tau * (static_cast<double>(n + 1) / static_cast<double>(n_steps));
        const ComplexMatrix3 h_mid = hamiltonian_at(0.5 * (t0 + t1));
        const ComplexMatrix3 h_end = hamiltonian_at(t1);

        const ComplexMatrix3 k1 = liouville_rhs(h_start, rho);
        const ComplexMatrix3 k2 = liouville_rhs(h_mid, rho + (0.5 * dt) * k1);
        const ComplexMatrix3 k3 = liouville_rhs(h_mid, rho + (0.5 * dt) * k2);
        const ComplexMatrix3 k4 = liouville_rhs(h_end, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        h_start = h_end;

        const double drift = std::abs(rho.trace() - tr0);
        diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
        if (!(drift <= trace_drift_tol))
            throw IntegrationDiverged(t1, "integration diverged at t = " + std::to_string(t1) + ": trace drift " + std::to_string(drift));
        on_step(n + 1, t1, rho);
    }
    return rho;
}

inline void check_evolution_args(double tau) {
    if (!(std::isfinite(tau) && tau > 0.0)) throw DomainError("evolve: tau must be > 0");
}

}  // namespace detail

/// Integrates the Liouville-von Neumann equation with classic RK4 and returns
/// `config.samples + 1` equally spaced samples including t = 0 and t = tau.
template <HamiltonianFunction F>
Trajectory evolve(const F& hamiltonian_at, const DensityState& rho0, double tau, const IntegratorConfig& config = {}) {
    detail::check_evolution_args(tau);
    config.validate();
    const std::int64_t n_min = min_step_count(tau, peak_norm(hamiltonian_at, tau), config.max_step_scaled);
    const std::int64_t m = config.samples;
    const std::int64_t stride = (n_min + m - 1) / m;

    Trajectory traj;
    traj.sample_stride = stride;
    traj.samples.reserve(static_cast<std::size_t>(m + 1));
    detail::rk4_integrate(hamiltonian_at, rho0.matrix(), tau, m * stride, config.trace_drift_tol, traj.diagnostics,
                          [&](std::int64_t n, double t, const ComplexMatrix3& rho) {
                              if (n % stride != 0) return;
                              traj.diagnostics.max_hermiticity_error = std::max(traj.diagnostics.max_hermiticity_error, rho.hermiticity_error());
                              traj.samples.push_back({t, DensityState::unchecked(rho)});
                          });
    return traj;
}

struct FinalState {
    DensityState rho;
    EvolutionDiagnostics diagnostics;
};

/// Same integrator as `evolve` with the minimal admissible step count and
/// only the state at t = tau retained. Used by the sweeps.
template <HamiltonianFunction F>
FinalState evolve_final(const F& hamiltonian_at, const DensityState& rho0, double tau, const IntegratorConfig& config = {}) {
    detail::check_evolution_args(tau);
    config.validate();
    const std::int64_t n = min_step_count(tau, peak_norm(hamiltonian_at, tau), config.max_step_scaled);
    FinalState out;
    const auto rho = detail::rk4_integrate(hamiltonian_at, rho0.matrix(), tau, n, config.trace_drift_tol, out.diagnostics,
                                           [](std::int64_t, double, const ComplexMatrix3&) {});
    out.diagnostics.max_hermiticity_error = rho.hermiticity_error();
    out.rho = DensityState::unchecked(rho);
    return out;
}

/// Independent reference propagation: rho <- U rho U^dagger with
/// U = exp(-i H(t_mid) dt) from an exact Hermitian eigen-decomposition per
/// step. Stores about `max_samples` samples (every ceil(n_steps/max_samples)
/// steps) plus t = tau.
template <HamiltonianFunction F>
Trajectory evolve_propagator_oracle(const F& hamiltonian_at, const DensityState& rho0, double tau, std::int64_t n_steps,
                                    std::int64_t max_samples = 1000) {
    detail::check_evolution_args(tau);
    if (n_steps < 1) throw DomainError("evolve_propagator_oracle: n_steps must be >= 1");
    const std::int64_t stride = std::max<std::int64_t>(1, (n_steps + max_samples - 1) / max_samples);

    Trajectory traj;
    traj.sample_stride = stride;
    auto& diag = traj.diagnostics;
    diag.steps = n_steps;
    diag.dt = tau / static_cast<double>(n_steps);

    ComplexMatrix3 rho = rho0.matrix();
    traj.samples.push_back({0.0, rho0});
    for (std::int64_t n = 0; n < n_steps; ++n) {
        const double t0 = tau * (static_cast<double>(n) / static_cast<double>(n_steps));
        const double t1 = tau * (static_cast<double>(n + 1) / static_cast<double>(n_steps));
        const ComplexMatrix3 u = unitary_propagator(hamiltonian_at(0.5 * (t0 + t1)), t1 - t0);
        diag.max_unitarity_error = std::max(diag.max_unitarity_error, (u.adjoint() * u - ComplexMatrix3::identity()).max_abs());
        rho = u * rho * u.adjoint();
        diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(rho.trace() - rho0.matrix().trace()));
        if ((n + 1) % stride == 0 || n + 1 == n_steps) {
            diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, rho.hermiticity_error());
            traj.samples.push_back({t1, DensityState::unchecked(rho)});
        }
    }
    return traj;
}

/// Step count for the oracle giving peak * dt <= scaled_step.
template <HamiltonianFunction F>
std::int64_t oracle_step_count(const F& hamiltonian_at, double tau, double scaled_step = 2e-4) {
    return min_step_count(tau, peak_norm(hamiltonian_at, tau), scaled_step);
}

/// Lab-frame Hamiltonian used for integration: H0 + H1(t) on the closed
/// window [0, tau] (the switch only matters at the two endpoints).
inline auto lab_frame_hamiltonian(const BatterySpectrum& spectrum, const LabFrameDrive& drive) {
    return [h0 = spectrum.h0(), drive](double t) { return h0 + lab_drive(drive, t); };
}

inline auto interaction_frame_hamiltonian(const PulseSchedule& schedule) {
    return [schedule](double t) { return build_interaction_hamiltonian(schedule, t); };
}

struct PictureTrajectories {
    Trajectory lab;
    Trajectory interaction;
};

/// Evolves the same protocol in the lab frame and in the interaction
/// picture. Sample times coincide; populations agree when the drive is resonant.
inline PictureTrajectories evolve_lab_frame_equivalence(const BatterySpectrum& spectrum, const LabFrameDrive& drive,
                                                        const DensityState& rho0, const IntegratorConfig& config = {}) {
    if (!drive.is_resonant(spectrum)) throw ContractViolation("evolve_lab_frame_equivalence: drive is not resonant");
    if (!drive.phase_consistent()) throw ContractViolation("evolve_lab_frame_equivalence: phi1 + phi2 - phi3 != schedule.phi");
    drive.schedule.validate();
    const double tau = drive.schedule.tau;
    return {evolve(lab_frame_hamiltonian(spectrum, drive), rho0, tau, config),
            evolve(interaction_frame_hamiltonian(drive.schedule), rho0, tau, config)};
}

/// Charges from the ground state in the picture selected by `config`.
inline Trajectory simulate(const PulseSchedule& schedule, const BatterySpectrum& spectrum, const IntegratorConfig& config = {}) {
    schedule.validate();
    if (config.picture == Picture::Lab)
        return evolve(lab_frame_hamiltonian(spectrum, LabFrameDrive::resonant(schedule, spectrum)), DensityState::ground(),
                      schedule.tau, config);
    return evolve(interaction_frame_hamiltonian(schedule), DensityState::ground(), schedule.tau, config);
}

}  // namespace qbat
