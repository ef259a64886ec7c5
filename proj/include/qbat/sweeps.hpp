#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "qbat/metrics.hpp"
#include "qbat/model.hpp"
#include "qbat/optimize.hpp"
#include "qbat/parallel.hpp"

namespace qbat {

/// A schedule with the duration left open.
struct ScheduleFamily {
    PulseShape shape12 = PulseShape::linear_ramp_up();
    PulseShape shape23 = PulseShape::linear_ramp_down();
    PulseShape shape13 = PulseShape::zero();
    double omega0 = 1.0;
    double phi = kHalfPi;

    static ScheduleFamily closed_loop(PulseShape shape13, double phi = kHalfPi) {
        ScheduleFamily f;
        f.shape13 = shape13;
        f.phi = phi;
        return f;
    }

    ScheduleFamily with_phi(double new_phi) const {
        ScheduleFamily f = *this;
        f.phi = new_phi;
        return f;
    }

    /// Schedule of dimensionless duration omega0 * tau = `omega0_tau`.
    PulseSchedule at(double omega0_tau) const {
        PulseSchedule s{shape12, shape23, shape13, omega0, omega0_tau / omega0, phi};
        s.validate();
        return s;
    }
};

/// Coarse-scan + golden-section settings for maximizing P over omega0 tau.
struct TauSearch {
    double min = 0.0;  ///< exclusive lower end
    double max = 200.0;
    double grid_step = 0.05;
    double tolerance = 1e-4;

    void validate() const {
        if (!(min >= 0.0 && min < max && max <= 200.0)) throw DomainError("TauSearch: range must lie within (0, 200]");
        if (!(grid_step > 0.0)) throw DomainError("TauSearch: grid_step must be > 0");
        if (!(tolerance > 0.0)) throw DomainError("TauSearch: tolerance must be > 0");
    }

    friend bool operator==(const TauSearch&, const TauSearch&) = default;
};

struct SweepSettings {
    IntegratorConfig integrator;
    unsigned threads = worker_count();
};

/// Evenly spaced grid of `points` values from `lo` to `hi` inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> g;
    if (points == 0) return g;
    if (points == 1) return {lo};
    g.reserve(points);
    for (std::size_t k = 0; k < points; ++k)
        g.push_back(k + 1 == points ? hi : lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(points - 1)));
    return g;
}

/// Charges from |eps1> over omega0 tau and reports C(tau), P(tau).
inline ChargingReport charge(const ScheduleFamily& family, const BatterySpectrum& spectrum, double omega0_tau,
                             const IntegratorConfig& integrator = {}) {
    const auto schedule = family.at(omega0_tau);
    try {
        FinalState fin;
        if (integrator.picture == Picture::Lab)
            fin = evolve_final(lab_frame_hamiltonian(spectrum, LabFrameDrive::resonant(schedule, spectrum)), DensityState::ground(),
                               schedule.tau, integrator);
        else
            fin = evolve_final(interaction_frame_hamiltonian(schedule), DensityState::ground(), schedule.tau, integrator);
        auto r = charging_report(fin.rho, schedule.tau, spectrum);
        // power is reported against omega0 tau
        r.tau = omega0_tau;
        r.avg_power = average_power(r.ergotropy, omega0_tau);
        return r;
    } catch (const IntegrationDiverged& e) {
        throw IntegrationDiverged(e.time(), std::string(e.what()) + " (omega0_tau = " + std::to_string(omega0_tau) + ")");
    }
}

struct TauSweepRow {
    double omega0_tau = 0.0;
    double ergotropy = 0.0;
    double power = 0.0;
};

struct TauSweepResult {
    std::vector<TauSweepRow> rows;
};

inline void require_ascending(const std::vector<double>& grid, const char* what, bool positive) {
    if (grid.empty()) throw DomainError(std::string(what) + ": grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k])) throw DomainError(std::string(what) + ": non-finite grid value");
        if (positive && !(grid[k] > 0.0)) throw DomainError(std::string(what) + ": grid values must be > 0");
        if (k > 0 && !(grid[k] > grid[k - 1])) throw DomainError(std::string(what) + ": grid must be strictly ascending");
    }
}

inline TauSweepResult sweep_tau(const ScheduleFamily& family, const BatterySpectrum& spectrum, const std::vector<double>& grid,
                                const SweepSettings& settings = {}) {
    require_ascending(grid, "sweep_tau", true);
    TauSweepResult out;
    out.rows.resize(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const auto r = charge(family, spectrum, grid[i], settings.integrator);
            out.rows[i] = {grid[i], r.ergotropy, r.avg_power};
        },
        settings.threads);
    return out;
}

struct MaxPowerResult {
    double tau_star = 0.0;  ///< omega0 tau at the maximum
    double p_max = 0.0;
    double c_at_max = 0.0;
    /// Best coarse-grid point before refinement.
    double grid_tau = 0.0;
    double grid_power = 0.0;
    int evaluations = 0;
};

/// Maximizes P(tau) = C(tau)/tau: ascending coarse scan, then golden-section
/// refinement between the neighbours of the best grid point. Grid points
/// where even a full charge (C = eps3 - eps1) could not beat the current
/// best are not evaluated; since that bound falls with tau the scan stops
/// there. Ties go to the smaller tau.
inline MaxPowerResult max_power_over_tau(const ScheduleFamily& family, const BatterySpectrum& spectrum, const TauSearch& search = {},
                                         const IntegratorConfig& integrator = {}) {
    search.validate();
    MaxPowerResult res;
    res.p_max = -INFINITY;

    auto eval = [&](double omega0_tau) {
        const auto r = charge(family, spectrum, omega0_tau, integrator);
        ++res.evaluations;
        if (!std::isfinite(r.avg_power)) throw NumericError("max_power_over_tau: non-finite power at omega0_tau = " + std::to_string(omega0_tau));
        return r;
    };

    const double bound = spectrum.c_max() * (1.0 + 1e-6);
    double best_c = 0.0;
    for (long k = 1;; ++k) {
        const double t = search.min + search.grid_step * static_cast<double>(k);
        if (t > search.max * (1.0 + 1e-12)) break;
        if (bound / t < res.grid_power && k > 1) break;
        const auto r = eval(t);
        if (k == 1 || r.avg_power > res.grid_power) {
            res.grid_power = r.avg_power;
            res.grid_tau = t;
            best_c = r.ergotropy;
        }
    }

    const double lo = std::max(search.min, res.grid_tau - search.grid_step);
    const double hi = std::min(search.max, res.grid_tau + search.grid_step);
    double golden_c = 0.0;
    const auto g = golden_section_maximize(
        [&](double t) {
            const auto r = eval(t);
            return r.avg_power;
        },
        lo, hi, search.tolerance);

    if (g.value > res.grid_power) {
        golden_c = charge(family, spectrum, g.x, integrator).ergotropy;
        res.tau_star = g.x;
        res.c_at_max = golden_c;
    } else {
        res.tau_star = res.grid_tau;
        res.c_at_max = best_c;
    }
    res.p_max = res.c_at_max / res.tau_star;
    return res;
}

struct PhiSweepRow {
    double phi = 0.0;
    MaxPowerResult best;
};

/// max_power_over_tau at every phi, evaluated in parallel, ordered as `phi_grid`.
inline std::vector<PhiSweepRow> sweep_phi(const ScheduleFamily& family, const BatterySpectrum& spectrum,
                                          const std::vector<double>& phi_grid, const TauSearch& search = {},
                                          const SweepSettings& settings = {}) {
    require_ascending(phi_grid, "sweep_phi", false);
    std::vector<PhiSweepRow> rows(phi_grid.size());
    parallel_for(
        phi_grid.size(),
        [&](std::size_t i) { rows[i] = {phi_grid[i], max_power_over_tau(family.with_phi(phi_grid[i]), spectrum, search, settings.integrator)}; },
        settings.threads);
    return rows;
}

/// Charging energy C and power C/tau over a (phi, omega0 tau) grid.
/// energy[i][j] belongs to phi_grid[i], tau_grid[j].
struct ContourResult {
    std::vector<double> phi_grid;
    std::vector<double> tau_grid;
    std::vector<std::vector<double>> energy;
    std::vector<std::vector<double>> power;
};

inline ContourResult contour(const ScheduleFamily& family, const BatterySpectrum& spectrum, const std::vector<double>& phi_grid,
                             const std::vector<double>& tau_grid, const SweepSettings& settings = {}) {
    require_ascending(phi_grid, "contour", false);
    require_ascending(tau_grid, "contour", true);
    ContourResult out{phi_grid, tau_grid, {}, {}};
    out.energy.assign(phi_grid.size(), std::vector<double>(tau_grid.size()));
    out.power = out.energy;
    const std::size_t cols = tau_grid.size();
    parallel_for(
        phi_grid.size() * cols,
        [&](std::size_t idx) {
            const std::size_t i = idx / cols;
            const std::size_t j = idx % cols;
            try {
                const auto r = charge(family.with_phi(phi_grid[i]), spectrum, tau_grid[j], settings.integrator);
                out.energy[i][j] = r.ergotropy;
                out.power[i][j] = r.avg_power;
            } catch (const IntegrationDiverged& e) {
                throw IntegrationDiverged(e.time(), std::string(e.what()) + " at cell (phi = " + std::to_string(phi_grid[i]) + ")");
            }
        },
        settings.threads);
    return out;
}

struct RatioResult {
    MaxPowerResult closed;
    MaxPowerResult open;
    double ratio = 0.0;
};

/// P_max of the closed loop (given Omega13 shape, phi = pi/2) over P_max of
/// the same ramps with Omega13 = 0, both from identical search settings.
inline RatioResult baseline_ratio(PulseShape shape13, const BatterySpectrum& spectrum, const TauSearch& search = {},
                                  const IntegratorConfig& integrator = {}) {
    if (shape13.kind() == PulseShape::Kind::Zero) throw DomainError("baseline_ratio: shape13 must not be zero");
    RatioResult r;
    r.open = max_power_over_tau(ScheduleFamily::closed_loop(PulseShape::zero()), spectrum, search, integrator);
    r.closed = max_power_over_tau(ScheduleFamily::closed_loop(shape13), spectrum, search, integrator);
    r.ratio = r.closed.p_max / r.open.p_max;
    return r;
}

}  // namespace qbat
