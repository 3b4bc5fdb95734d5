#pragma once

#include <cmath>

#include "proxops/ephemeris.hpp"
#include "proxops/state.hpp"
#include "proxops/system_model.hpp"

namespace proxops {

// Solar differential (tidal) acceleration on a barycentric position r:
//   a = -mu_sun * ( (r - p_sun)/|r - p_sun|^3 + p_sun/|p_sun|^3 )
// where p_sun is the Sun's barycentric position. Vanishes at the origin and
// stretches along the Sun line (≈ +2 mu_sun |r| / r_ds^3 for sunward r).
inline Vec3 accel_fourbody(double mu_sun, const SunGeometry& geo, const Vec3& r) {
    const Vec3 p = geo.sun_position();
    const Vec3 w = r - p;                 // spacecraft w.r.t. Sun
    const double wn = w.norm();
    return -mu_sun * (w / (wn * wn * wn) + p / (geo.r_ds * geo.r_ds * geo.r_ds));
}

// Cannonball solar radiation pressure, pushing anti-sunward and scaled with
// the inverse square of the heliocentric distance.
inline Vec3 accel_srp(const SpacecraftModel& sc, const SunGeometry& geo, const Vec3& r) {
    const Vec3 w = r - geo.sun_position();
    const double wn = w.norm();
    const double p = constants::SOLAR_FLUX_1AU / constants::C_LIGHT *
                     (constants::AU / wn) * (constants::AU / wn) *
                     sc.cr * sc.area / sc.mass;
    return p * w / wn;
}

// Point-mass attraction of both asteroids at barycentric position r.
inline Vec3 accel_gravity(const SystemModel& sys, Epoch epoch, const Vec3& r) {
    const auto [d1, d2] = asteroid_states(sys, epoch);
    const Vec3 u1 = r - d1.r;
    const Vec3 u2 = r - d2.r;
    const double n1 = u1.norm(), n2 = u2.norm();
    return -sys.mu1() * u1 / (n1 * n1 * n1) - sys.mu2() * u2 / (n2 * n2 * n2);
}

// Full model: two point masses + solar tide + SRP.
inline Vec3 accel_total(const SystemModel& sys, const SpacecraftModel& sc, Epoch epoch,
                        const Vec3& r) {
    const SunGeometry geo = sun_geometry(sys, epoch);
    return accel_gravity(sys, epoch, r) + accel_fourbody(sys.mu_sun, geo, r) +
           accel_srp(sc, geo, r);
}

namespace detail {
// Gradient of mu * u/|u|^3 w.r.t. u, i.e. mu (I - 3 uu^T/|u|^2) / |u|^3.
inline Mat3 inverse_cube_grad(double mu, const Vec3& u) {
    const double n = u.norm();
    const double n3 = n * n * n;
    return mu / n3 * (Mat3::Identity() - 3.0 / (n * n) * u * u.transpose());
}
}  // namespace detail

// d(accel)/d(r) of the full model. Asteroid and Sun positions are functions
// of the epoch only, so this is the complete position Jacobian.
inline Mat3 accel_gradient(const SystemModel& sys, const SpacecraftModel& sc, Epoch epoch,
                           const Vec3& r) {
    const SunGeometry geo = sun_geometry(sys, epoch);
    const auto [d1, d2] = asteroid_states(sys, epoch);
    const Vec3 w = r - geo.sun_position();

    Mat3 g = -detail::inverse_cube_grad(sys.mu1(), r - d1.r)
             - detail::inverse_cube_grad(sys.mu2(), r - d2.r)
             - detail::inverse_cube_grad(sys.mu_sun, w);

    const double srp_k = constants::SOLAR_FLUX_1AU / constants::C_LIGHT * constants::AU *
                         constants::AU * sc.cr * sc.area / sc.mass;
    g += detail::inverse_cube_grad(srp_k, w);
    return g;
}

// 6x6 variational matrix A = [[0, I], [da/dr, 0]] (velocity-independent field).
inline Mat6 jacobian(const SystemModel& sys, const SpacecraftModel& sc, Epoch epoch,
                     const Vec3& r) {
    Mat6 a = Mat6::Zero();
    a.block<3, 3>(0, 3) = Mat3::Identity();
    a.block<3, 3>(3, 0) = accel_gradient(sys, sc, epoch, r);
    return a;
}

// Sensitivity of the acceleration to the total system GM at fixed mass ratio
// and fixed ephemeris: d a / d mu_sys = sum_i (mu_i/mu_sys) * (-u_i/|u_i|^3).
inline Vec3 accel_mu_sensitivity(const SystemModel& sys, Epoch epoch, const Vec3& r) {
    const auto [d1, d2] = asteroid_states(sys, epoch);
    const Vec3 u1 = r - d1.r;
    const Vec3 u2 = r - d2.r;
    const double n1 = u1.norm(), n2 = u2.norm();
    const double f1 = sys.m1 / (sys.m1 + sys.m2);
    const double f2 = sys.m2 / (sys.m1 + sys.m2);
    return -f1 * u1 / (n1 * n1 * n1) - f2 * u2 / (n2 * n2 * n2);
}

// Dynamics functor used by the propagator and the shooting solver. Any type
// with the same two members can be substituted (e.g. perturbed or reversed
// fields in tests and Monte Carlo truth models).
struct NominalField {
    const SystemModel* sys;
    const SpacecraftModel* sc;

    Vec3 accel(const Vec3& r, double t) const { return accel_total(*sys, *sc, Epoch{t}, r); }
    Mat3 grad(const Vec3& r, double t) const { return accel_gradient(*sys, *sc, Epoch{t}, r); }
};

// Truth-model field for Monte Carlo runs: gravity offset dmu (split over both
// bodies at fixed mass ratio), per-axis multiplicative SRP scale and an
// additive residual acceleration. The scale/residual slots are updated by the
// caller as its Gauss-Markov processes evolve.
struct PerturbedField {
    const SystemModel* sys;
    const SpacecraftModel* sc;
    double dmu = 0.0;          // [m^3/s^2] offset on the total system GM
    Vec3 srp_scale = Vec3::Zero();   // fractional, per axis
    Vec3 extra_accel = Vec3::Zero(); // [m/s^2]

    Vec3 accel(const Vec3& r, double t) const {
        const Epoch ep{t};
        const SunGeometry geo = sun_geometry(*sys, ep);
        const Vec3 srp = accel_srp(*sc, geo, r);
        return accel_gravity(*sys, ep, r) + dmu * accel_mu_sensitivity(*sys, ep, r) +
               accel_fourbody(sys->mu_sun, geo, r) + srp + srp.cwiseProduct(srp_scale) +
               extra_accel;
    }
    Mat3 grad(const Vec3& r, double t) const {
        return accel_gradient(*sys, *sc, Epoch{t}, r);
    }
};

}  // namespace proxops
