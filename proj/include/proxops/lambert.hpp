#pragma once

#include <cmath>

#include "proxops/errors.hpp"
#include "proxops/state.hpp"

namespace proxops {

// Universal-variable Lambert solver (Bate/Mueller/White formulation, zero
// revolutions). Used to seed the shooting solver; arcs here span well under
// one two-body period, so the single-revolution branch is always the one
// wanted. Throws NumericalError if the geometry or time of flight cannot be
// met (callers fall back to a kinematic seed).
struct LambertResult {
    Vec3 v0;
    Vec3 v1;
};

namespace detail {
inline double stumpff_c(double z) {
    if (z > 1e-8) return (1.0 - std::cos(std::sqrt(z))) / z;
    if (z < -1e-8) return (std::cosh(std::sqrt(-z)) - 1.0) / (-z);
    return 0.5 - z / 24.0;
}
inline double stumpff_s(double z) {
    if (z > 1e-8) {
        const double sq = std::sqrt(z);
        return (sq - std::sin(sq)) / (sq * sq * sq);
    }
    if (z < -1e-8) {
        const double sq = std::sqrt(-z);
        return (std::sinh(sq) - sq) / (sq * sq * sq);
    }
    return 1.0 / 6.0 - z / 120.0;
}
}  // namespace detail

inline LambertResult lambert_universal(const Vec3& r0, const Vec3& r1, double tof, double mu,
                                       bool short_way = true) {
    if (tof <= 0.0) throw NumericalError("lambert_universal: non-positive time of flight");
    const double n0 = r0.norm(), n1 = r1.norm();
    if (n0 == 0.0 || n1 == 0.0) throw NumericalError("lambert_universal: zero radius endpoint");

    double cos_dnu = r0.dot(r1) / (n0 * n1);
    cos_dnu = std::clamp(cos_dnu, -1.0, 1.0);
    const double sign = short_way ? 1.0 : -1.0;
    const double a_geom = sign * std::sqrt(std::max(0.0, n0 * n1 * (1.0 + cos_dnu)));
    if (std::abs(a_geom) < 1e-12)
        throw NumericalError("lambert_universal: transfer angle ~180 deg, plane undefined");

    // bisection on the universal variable z; t(z) is monotone increasing
    auto tof_of_z = [&](double z, double& y_out) {
        const double c = detail::stumpff_c(z);
        const double s = detail::stumpff_s(z);
        const double y = n0 + n1 + a_geom * (z * s - 1.0) / std::sqrt(c);
        y_out = y;
        if (y < 0.0) return -1.0;  // infeasible region, push z upward
        const double chi = std::sqrt(y / c);
        return (chi * chi * chi * s + a_geom * std::sqrt(y)) / std::sqrt(mu);
    };

    double zlo = -4.0 * constants::PI * constants::PI;
    double zhi = 4.0 * constants::PI * constants::PI - 1e-10;
    double y = 0.0;
    // raise the lower bracket out of the y < 0 region (short transfers)
    for (int i = 0; i < 64 && tof_of_z(zlo, y) < 0.0; ++i) zlo = 0.5 * (zlo + zhi);
    if (tof_of_z(zlo, y) > tof || tof_of_z(zhi, y) < tof)
        throw NumericalError("lambert_universal: time of flight outside zero-rev bracket");
    double z = 0.0;
    for (int it = 0; it < 200; ++it) {
        z = 0.5 * (zlo + zhi);
        const double t = tof_of_z(z, y);
        if (t < tof) zlo = z; else zhi = z;
    }
    tof_of_z(z, y);

    const double f = 1.0 - y / n0;
    const double g = a_geom * std::sqrt(y / mu);
    const double gdot = 1.0 - y / n1;
    if (std::abs(g) < 1e-12) throw NumericalError("lambert_universal: degenerate g function");
    LambertResult out;
    out.v0 = (r1 - f * r0) / g;
    out.v1 = (gdot * r1 - r0) / g;
    return out;
}

}  // namespace proxops
