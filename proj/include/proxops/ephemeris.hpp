#pragma once

#include <cmath>
#include <utility>

#include "proxops/kepler.hpp"
#include "proxops/state.hpp"
#include "proxops/system_model.hpp"

namespace proxops {

// Sun geometry as seen from the system barycentre.
struct SunGeometry {
    Vec3 dir;     // unit vector barycentre -> Sun, DidymosEclipJ2000
    double r_ds;  // heliocentric distance of the system [m]

    Vec3 sun_position() const { return r_ds * dir; }
};

// Heliocentric position of the barycentre from the configured Kepler orbit.
// Mean motion comes from the tabulated period; mu_sun is not involved here.
inline SunGeometry sun_geometry(const SystemModel& sys, Epoch epoch) {
    const HelioOrbit& orb = sys.helio;
    const double M = 2.0 * constants::PI * (epoch.t - orb.t_perihelion) / orb.period;
    const double E = kepler_solve(M, orb.e);

    // perifocal coordinates of the system w.r.t. the Sun
    const double x = orb.a * (std::cos(E) - orb.e);
    const double y = orb.a * std::sqrt(1.0 - orb.e * orb.e) * std::sin(E);

    // rotate perifocal -> ecliptic: R3(-raan) R1(-inc) R3(-argp)
    const double co = std::cos(orb.argp), so = std::sin(orb.argp);
    const double ci = std::cos(orb.inc), si = std::sin(orb.inc);
    const double cn = std::cos(orb.raan), sn = std::sin(orb.raan);
    const Vec3 p(cn * co - sn * so * ci, sn * co + cn * so * ci, so * si);
    const Vec3 q(-cn * so - sn * co * ci, -sn * so + cn * co * ci, co * si);
    const Vec3 r_helio = x * p + y * q;  // barycentre w.r.t. Sun

    SunGeometry geo;
    geo.r_ds = r_helio.norm();
    geo.dir = -r_helio / geo.r_ds;  // Sun as seen from the barycentre
    return geo;
}

inline Vec3 sun_direction(const SystemModel& sys, Epoch epoch) {
    return sun_geometry(sys, epoch).dir;
}

// Orthonormal basis of the mutual-orbit (equatorial) plane. e1 is the
// projection of ecliptic x onto the plane (or y if the pole sits on x),
// e2 = pole x e1, so that phase angles advance about the north pole.
inline std::pair<Vec3, Vec3> equatorial_basis(const SystemModel& sys) {
    const Vec3 n = sys.pole.normalized();
    Vec3 seed = Vec3::UnitX();
    if (std::abs(n.dot(seed)) > 0.99) seed = Vec3::UnitY();
    const Vec3 e1 = (seed - n.dot(seed) * n).normalized();
    const Vec3 e2 = n.cross(e1);
    return {e1, e2};
}

// Barycentric states of both bodies on the circular, tidally locked mutual
// orbit. Mass-weighted positions sum to zero by construction.
inline std::pair<StateVector, StateVector> asteroid_states(const SystemModel& sys, Epoch epoch) {
    const auto [e1, e2] = equatorial_basis(sys);
    const double w = sys.mutual_rate();
    const double th = sys.mutual_phase0 + w * epoch.t;
    const Vec3 u = std::cos(th) * e1 + std::sin(th) * e2;    // D1 -> D2 direction
    const Vec3 du = w * (-std::sin(th) * e1 + std::cos(th) * e2);

    const double f1 = sys.m2 / (sys.m1 + sys.m2);
    const double f2 = sys.m1 / (sys.m1 + sys.m2);

    StateVector d1, d2;
    d1.r = -f1 * sys.separation_d12 * u;
    d1.v = -f1 * sys.separation_d12 * du;
    d2.r = f2 * sys.separation_d12 * u;
    d2.v = f2 * sys.separation_d12 * du;
    d1.epoch = d2.epoch = epoch;
    return {d1, d2};
}

enum class Body { D1, D2 };

inline Vec3 body_position(const SystemModel& sys, Epoch epoch, Body b) {
    const auto [d1, d2] = asteroid_states(sys, epoch);
    return b == Body::D1 ? d1.r : d2.r;
}

// Sun -> body -> spacecraft angle. Zero means the spacecraft sits exactly
// between the body and the Sun; 90 deg is the terminator.
inline double phase_angle(const SystemModel& sys, Epoch epoch, const Vec3& r_sc, Body b) {
    const SunGeometry geo = sun_geometry(sys, epoch);
    const Vec3 rb = body_position(sys, epoch, b);
    const Vec3 to_sun = geo.sun_position() - rb;
    const Vec3 to_sc = r_sc - rb;
    const double denom = to_sun.norm() * to_sc.norm();
    if (denom == 0.0) throw NumericalError("phase_angle: spacecraft coincides with body");
    return std::atan2(to_sun.cross(to_sc).norm(), to_sun.dot(to_sc));
}

}  // namespace proxops
