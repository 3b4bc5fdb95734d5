#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "proxops/errors.hpp"

namespace proxops {

// Adaptive embedded Runge-Kutta, Dormand-Prince 5(4), with the standard
// elementwise error weighting err_i / (atol_i + rtol*|y_i|). Integrates
// forward or backward depending on the sign of t1 - t0.
struct IntegratorOptions {
    double rtol = 1e-10;
    Eigen::VectorXd atol;      // per component; must match the state size
    double h0 = 0.0;           // initial step, 0 = heuristic
    double hmax = 0.0;         // step magnitude cap, 0 = full span
    long max_steps = 2000000;
};

namespace dp54 {
// Butcher tableau (Dormand & Prince 1980), FSAL pair.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace dp54

// Integrate y' = f(t, y) from t0 to t1. f must return a vector of the same
// dimension as y. Throws NumericalError on step underflow or step-count blowup.
template <class Rhs>
Eigen::VectorXd dp54_integrate(Rhs&& f, double t0, Eigen::VectorXd y, double t1,
                               const IntegratorOptions& opt) {
    using Eigen::VectorXd;
    const long n = y.size();
    if (opt.atol.size() != n)
        throw NumericalError("dp54_integrate: atol size mismatch");
    if (t1 == t0) return y;

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = (opt.hmax > 0.0) ? std::min(opt.hmax, span) : span;

    double t = t0;
    VectorXd k1 = f(t, y);

    double h;
    if (opt.h0 > 0.0) {
        h = std::min(opt.h0, hmax);
    } else {
        // first-step heuristic: balance |y| against |y'| in weighted norm
        double d0 = 0.0, d1 = 0.0;
        for (long i = 0; i < n; ++i) {
            const double sc = opt.atol[i] + opt.rtol * std::abs(y[i]);
            d0 += std::pow(y[i] / sc, 2);
            d1 += std::pow(k1[i] / sc, 2);
        }
        h = (d1 > 0.0) ? 0.01 * std::sqrt(d0 / d1) : 1e-3 * span;
        h = std::clamp(h, 1e-8 * span, hmax);
    }

    VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n);
    long steps = 0;
    bool fsal_valid = true;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps)
            throw NumericalError("dp54_integrate: exceeded max step count");
        h = std::min(h, hmax);
        double hs = dir * h;
        if (dir * (t + hs - t1) > 0.0) hs = t1 - t;  // land exactly on t1

        if (!fsal_valid) k1 = f(t, y);
        using namespace dp54;
        k2 = f(t + c2 * hs, y + hs * (a21 * k1));
        k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(t + hs, ynew);
        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double sum = 0.0;
        for (long i = 0; i < n; ++i) {
            const double sc = opt.atol[i] + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            sum += std::pow(err[i] / sc, 2);
        }
        const double enorm = std::sqrt(sum / double(n));

        if (enorm <= 1.0) {
            t += hs;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            fsal_valid = true;
            const double fac = (enorm > 0.0)
                                   ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0)
                                   : 5.0;
            h = std::abs(hs) * fac;
        } else {
            fsal_valid = false;  // k1 is still f(t, y), but we recompute for simplicity
            h = std::abs(hs) * std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 1.0);
        }
        if (h < 1e-10 * std::max(1.0, std::abs(t)))
            throw NumericalError("dp54_integrate: step size underflow at t=" + std::to_string(t));
    }
    return y;
}

// Classic fixed-step RK4, used where the forcing is piecewise constant
// (Monte Carlo truth with zero-order-hold stochastic accelerations).
template <class Rhs>
Eigen::VectorXd rk4_step(Rhs&& f, double t, const Eigen::VectorXd& y, double h) {
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace proxops
