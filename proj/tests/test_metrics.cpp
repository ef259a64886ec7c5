#include <random>

#include <gtest/gtest.h>

#include "qbat/metrics.hpp"

using namespace qbat;

TEST(Metrics, LevelStates) {
    const BatterySpectrum sp;
    EXPECT_EQ(energy(DensityState::level(0), sp), 0.0);
    EXPECT_EQ(energy(DensityState::level(1), sp), 1.0);
    EXPECT_EQ(energy(DensityState::level(2), sp), 1.95);
    EXPECT_EQ(ergotropy(DensityState::level(2), sp), 1.95);
}

TEST(Metrics, ShiftedSpectrumMeasuresAboveGround) {
    const BatterySpectrum sp(0.5, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(energy(DensityState::ground(), sp), 0.5);
    EXPECT_DOUBLE_EQ(ergotropy(DensityState::ground(), sp), 0.0);
    EXPECT_DOUBLE_EQ(ergotropy(DensityState::level(2), sp), 1.5);
}

TEST(Metrics, SuperpositionExample) {
    const BatterySpectrum sp;
    const auto rho = DensityState::from_matrix(ComplexMatrix3::diagonal(RealVector3{0.25, 0.25, 0.5}));
    const auto p = populations(rho);
    EXPECT_EQ(p[0], 0.25);
    EXPECT_EQ(p[1], 0.25);
    EXPECT_EQ(p[2], 0.5);
    EXPECT_DOUBLE_EQ(energy(rho, sp), 0.25 + 0.975);
}

TEST(Metrics, EnergyIsLinearAndBounded) {
    const BatterySpectrum sp;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const auto a = DensityState::pure({Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}});
        const auto b = DensityState::pure({Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}});
        const double w = 0.5 * (u(rng) + 1.0);
        const auto mix = DensityState::unchecked(a.matrix() * Complex{w} + b.matrix() * Complex{1.0 - w});
        EXPECT_NEAR(energy(mix, sp), w * energy(a, sp) + (1.0 - w) * energy(b, sp), 1e-14);
        EXPECT_GE(ergotropy(a, sp), -1e-15);
        EXPECT_LE(ergotropy(a, sp), sp.c_max() + 1e-14);
    }
}

TEST(Metrics, AveragePower) {
    EXPECT_DOUBLE_EQ(average_power(1.95, 2.0), 0.975);
    EXPECT_THROW(average_power(1.0, 0.0), DomainError);
    EXPECT_THROW(average_power(1.0, -1.0), DomainError);
}

TEST(Metrics, ChargingReport) {
    const BatterySpectrum sp;
    const auto r = charging_report(DensityState::level(2), 3.0, sp);
    EXPECT_EQ(r.tau, 3.0);
    EXPECT_DOUBLE_EQ(r.ergotropy, 1.95);
    EXPECT_DOUBLE_EQ(r.avg_power, 0.65);
    EXPECT_EQ(r.populations_final[2], 1.0);
}
