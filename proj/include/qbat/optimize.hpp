#pragma once

#include <cmath>
#include <concepts>

#include "qbat/errors.hpp"

namespace qbat {

struct ScalarMaximum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a maximum of `f` on [a, b], stopping once the
/// bracket is narrower than `tol`. Returns the best point evaluated; on equal
/// values the smaller x wins.
template <class F>
    requires std::invocable<const F&, double>
ScalarMaximum golden_section_maximize(const F& f, double a, double b, double tol, int max_iterations = 200) {
    if (!(a < b)) throw DomainError("golden_section_maximize: empty bracket");
    if (!(tol > 0.0)) throw DomainError("golden_section_maximize: tolerance must be > 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    if (!std::isfinite(fc) || !std::isfinite(fd)) throw NumericError("golden_section_maximize: non-finite objective");

    ScalarMaximum best = fc >= fd ? ScalarMaximum{c, fc} : ScalarMaximum{d, fd};
    for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (!std::isfinite(fc)) throw NumericError("golden_section_maximize: non-finite objective");
            if (fc > best.value || (fc == best.value && c < best.x)) best = {c, fc};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (!std::isfinite(fd)) throw NumericError("golden_section_maximize: non-finite objective");
            if (fd > best.value || (fd == best.value && d < best.x)) best = {d, fd};
        }
    }
    return best;
}

}  // namespace qbat
