#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>

#include "qbat/errors.hpp"

namespace qbat {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

using ComplexVector3 = std::array<Complex, 3>;
using RealVector3 = std::array<double, 3>;

/// Dense 3x3 complex matrix, row-major, value semantics.
class ComplexMatrix3 {
public:
    constexpr ComplexMatrix3() = default;

    constexpr Complex& operator()(std::size_t row, std::size_t col) { return data_[3 * row + col]; }
    constexpr const Complex& operator()(std::size_t row, std::size_t col) const { return data_[3 * row + col]; }

    static constexpr ComplexMatrix3 zero() { return {}; }

    static constexpr ComplexMatrix3 identity() { return diagonal(RealVector3{1.0, 1.0, 1.0}); }

    static constexpr ComplexMatrix3 diagonal(const RealVector3& d) {
        ComplexMatrix3 m;
        for (std::size_t i = 0; i < 3; ++i) m(i, i) = d[i];
        return m;
    }

    static constexpr ComplexMatrix3 diagonal(const ComplexVector3& d) {
        ComplexMatrix3 m;
        for (std::size_t i = 0; i < 3; ++i) m(i, i) = d[i];
        return m;
    }

    /// |v><v|
    static ComplexMatrix3 outer(const ComplexVector3& v) { return outer(v, v); }

    /// |a><b|
    static ComplexMatrix3 outer(const ComplexVector3& a, const ComplexVector3& b) {
        ComplexMatrix3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = a[i] * std::conj(b[j]);
        return m;
    }

    ComplexMatrix3 adjoint() const {
        ComplexMatrix3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    Complex trace() const { return data_[0] + data_[4] + data_[8]; }

    RealVector3 real_diagonal() const { return {data_[0].real(), data_[4].real(), data_[8].real()}; }

    ComplexMatrix3& operator+=(const ComplexMatrix3& o) {
        for (std::size_t k = 0; k < 9; ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix3& operator-=(const ComplexMatrix3& o) {
        for (std::size_t k = 0; k < 9; ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix3& operator*=(Complex s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend ComplexMatrix3 operator+(ComplexMatrix3 a, const ComplexMatrix3& b) { return a += b; }
    friend ComplexMatrix3 operator-(ComplexMatrix3 a, const ComplexMatrix3& b) { return a -= b; }
    friend ComplexMatrix3 operator*(ComplexMatrix3 a, Complex s) { return a *= s; }
    friend ComplexMatrix3 operator*(Complex s, ComplexMatrix3 a) { return a *= s; }
    friend ComplexMatrix3 operator*(double s, ComplexMatrix3 a) { return a *= s; }

    friend ComplexMatrix3 operator*(const ComplexMatrix3& a, const ComplexMatrix3& b) {
        ComplexMatrix3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                m(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
        return m;
    }

    friend ComplexVector3 operator*(const ComplexMatrix3& a, const ComplexVector3& v) {
        ComplexVector3 r{};
        for (std::size_t i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
        return r;
    }

    friend bool operator==(const ComplexMatrix3&, const ComplexMatrix3&) = default;

    /// max |m_ij|
    double max_abs() const {
        double r = 0.0;
        for (const auto& x : data_) r = std::max(r, std::abs(x));
        return r;
    }

    double frobenius_norm() const {
        double r = 0.0;
        for (const auto& x : data_) r += std::norm(x);
        return std::sqrt(r);
    }

    /// max_ij |m_ij - conj(m_ji)|
    double hermiticity_error() const { return (*this - adjoint()).max_abs(); }

    const std::array<Complex, 9>& data() const { return data_; }

private:
    std::array<Complex, 9> data_{};
};

/// [a, b] = ab - ba
inline ComplexMatrix3 commutator(const ComplexMatrix3& a, const ComplexMatrix3& b) { return a * b - b * a; }

/// <a|b>, antilinear in the first argument.
inline Complex inner(const ComplexVector3& a, const ComplexVector3& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

inline double norm(const ComplexVector3& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2])); }

inline ComplexVector3 scaled(const ComplexVector3& v, Complex s) { return {v[0] * s, v[1] * s, v[2] * s}; }

inline ComplexVector3 basis_vector(std::size_t n) {
    ComplexVector3 v{};
    v.at(n) = 1.0;
    return v;
}

/// Fixes the arbitrary global phase of `v` so that its largest-magnitude
/// component is real and positive. Ties go to the lowest index.
inline ComplexVector3 fix_phase(const ComplexVector3& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k]) * (1.0 + 1e-12)) k = i;
    const double a = std::abs(v[k]);
    if (a == 0.0) return v;
    return scaled(v, std::conj(v[k]) / a);
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, column
/// `k` of `vectors` is the eigenvector for `values[k]`.
struct HermitianEigen {
    RealVector3 values{};
    ComplexMatrix3 vectors;

    ComplexVector3 vector(std::size_t k) const { return {vectors(0, k), vectors(1, k), vectors(2, k)}; }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix3& a) {
    return std::sqrt(2.0 * (std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2))));
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver. Iterates sweeps over the three
/// off-diagonal pairs until the off-diagonal Frobenius norm drops below
/// `tol * max(1, ||A||_F)`. Only the upper triangle of `h` is trusted to be
/// consistent; the input is symmetrized as (h + h^\dagger)/2 first.
inline HermitianEigen jacobi_eigen(const ComplexMatrix3& h, double tol = 1e-12, int max_sweeps = 64) {
    ComplexMatrix3 a = 0.5 * (h + h.adjoint());
    ComplexMatrix3 v = ComplexMatrix3::identity();
    const double threshold = tol * std::max(1.0, a.frobenius_norm());

    int sweep = 0;
    while (detail::off_diagonal_norm(a) > threshold) {
        if (++sweep > max_sweeps) throw NumericError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t q = p + 1; q < 3; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // J = diag(1, e^{-i arg apq}) on (p,q) followed by the real rotation
                ComplexMatrix3 j = ComplexMatrix3::identity();
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * std::conj(phase);
                j(q, q) = c * std::conj(phase);

                a = j.adjoint() * a * j;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                v = v * j;
            }
        }
    }

    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out;
    for (std::size_t k = 0; k < 3; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        ComplexVector3 col{v(0, order[k]), v(1, order[k]), v(2, order[k])};
        col = fix_phase(col);
        for (std::size_t i = 0; i < 3; ++i) out.vectors(i, k) = col[i];
    }
    return out;
}

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
inline double hermitian_spectral_norm(const ComplexMatrix3& h) {
    const auto e = jacobi_eigen(h);
    return std::max(std::abs(e.values[0]), std::abs(e.values[2]));
}

/// exp(-i h dt) for Hermitian h, via the eigen-decomposition.
inline ComplexMatrix3 unitary_propagator(const ComplexMatrix3& h, double dt) {
    const auto e = jacobi_eigen(h);
    ComplexVector3 phases{};
    for (std::size_t k = 0; k < 3; ++k) phases[k] = std::polar(1.0, -e.values[k] * dt);
    return e.vectors * ComplexMatrix3::diagonal(phases) * e.vectors.adjoint();
}

}  // namespace qbat
