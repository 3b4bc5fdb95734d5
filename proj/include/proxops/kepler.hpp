#pragma once

#include <cmath>

#include "proxops/constants.hpp"
#include "proxops/errors.hpp"

namespace proxops {

// Solve Kepler's equation E - e sin E = M for the eccentric anomaly.
// Newton iteration seeded per Danby, with a bisection fallback so the solver
// cannot diverge for any 0 <= e < 1. M may be any real value.
inline double kepler_solve(double mean_anomaly, double e, double tol = 1e-13) {
    if (!(e >= 0.0 && e < 1.0)) throw NumericalError("kepler_solve: eccentricity out of [0,1)");

    // reduce to [-pi, pi] for conditioning, undo at the end
    const double two_pi = 2.0 * constants::PI;
    double m = std::remainder(mean_anomaly, two_pi);

    double E = (e < 0.8) ? m : constants::PI * (m >= 0 ? 1.0 : -1.0);
    if (E == 0.0 && m == 0.0) return mean_anomaly - m;  // exact

    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const double f = E - e * std::sin(E) - m;
        const double fp = 1.0 - e * std::cos(E);
        const double dE = f / fp;
        E -= dE;
        if (std::abs(dE) < tol) {
            converged = true;
            break;
        }
    }
    if (!converged || std::abs(E - e * std::sin(E) - m) > 1e-10) {
        // bisection rescue: root is bracketed by m -/+ e
        double lo = m - e, hi = m + e;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = mid - e * std::sin(mid) - m;
            const double fl = lo - e * std::sin(lo) - m;
            if (fl * fm <= 0.0) hi = mid; else lo = mid;
        }
        E = 0.5 * (lo + hi);
    }
    return E + (mean_anomaly - m);
}

}  // namespace proxops
