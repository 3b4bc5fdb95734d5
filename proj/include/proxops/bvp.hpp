#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "proxops/dynamics.hpp"
#include "proxops/epoch.hpp"
#include "proxops/lambert.hpp"
#include "proxops/propagation.hpp"

namespace proxops {

// Solution of the two-point boundary value problem r(t0)=r0, r(t1)=r1 under
// the full dynamics: departure and arrival velocities plus solver diagnostics.
struct ArcSolution {
    Vec3 v0;
    Vec3 v1;
    double residual = 0.0;  // terminal position miss [m]
    int iterations = 0;
};

struct ShootingOptions {
    double tol_pos = 1.0;     // convergence on the terminal miss [m]
    int max_iter = 50;
    int max_halvings = 10;    // backtracking damping of the Newton step
    double overshoot_factor = 20.0;  // damp only past this miss growth
    // Minimum body ranges a converged transfer must keep along its whole arc
    // before solve_arc accepts it; zero disables the check. Transfers between
    // nearby endpoints over several days admit multiple shooting branches,
    // and the rejected ones dive between the bodies.
    double clearance_d1 = 0.0;  // [m]
    double clearance_d2 = 0.0;  // [m]
    double clearance_dt = 600.0;  // [s] scan step for the range check
    PropagationOptions prop;
};

// Single shooting with STM-based Newton corrections on v0. Full Newton steps
// are taken by default; a backtracking damping engages only when a step blows
// the miss up by more than overshoot_factor, since convergence here is
// typically non-monotone and strict descent enforcement stalls. Deterministic
// for a fixed option set. The field is any dynamics functor (nominal,
// perturbed, reversed, ...).
template <class Field>
ArcSolution solve_bvp(const Field& field, const Vec3& r0, Epoch t0, const Vec3& r1, Epoch t1,
                      const Vec3& v_guess, const ShootingOptions& opt = {}) {
    if (t1.t <= t0.t) throw NumericalError("solve_bvp: t1 must be after t0");

    StateVector s0;
    s0.r = r0;
    s0.v = v_guess;
    s0.epoch = t0;

    // Returns false when the trial trajectory cannot even be integrated
    // (typically a dive into one of the bodies); the caller then damps.
    auto shoot = [&](const Vec3& v, Stm& stm_out, Vec3& miss_out) -> bool {
        StateVector s = s0;
        s.v = v;
        try {
            auto [sf, stm] = propagate_with_stm_field(field, s, t1, opt.prop);
            stm_out = stm;
            miss_out = sf.r - r1;
            return true;
        } catch (const NumericalError&) {
            return false;
        }
    };

    Vec3 v = v_guess;
    Stm stm;
    Vec3 miss;
    if (!shoot(v, stm, miss))
        throw NumericalError("solve_bvp: seed trajectory is not integrable");
    ArcSolution sol;

    for (int it = 0; it < opt.max_iter; ++it) {
        sol.iterations = it + 1;
        if (miss.norm() < opt.tol_pos) {
            sol.v0 = v;
            sol.residual = miss.norm();
            // arrival velocity from a final clean propagation
            StateVector s = s0;
            s.v = v;
            sol.v1 = propagate_field(field, s, t1, opt.prop).v;
            return sol;
        }
        const Vec3 dv = stm.rv().partialPivLu().solve(miss);
        // Newton convergence here is typically non-monotone (transient
        // overshoots recover within an iteration), so damping only kicks in
        // when a step makes things catastrophically worse or breaks the
        // integration outright.
        double lambda = 1.0;
        Vec3 v_new = v - dv;
        Stm stm_new;
        Vec3 miss_new;
        bool ok = shoot(v_new, stm_new, miss_new);
        int halvings = 0;
        while ((!ok || miss_new.norm() > opt.overshoot_factor * miss.norm()) &&
               halvings < opt.max_halvings) {
            lambda *= 0.5;
            v_new = v - lambda * dv;
            ok = shoot(v_new, stm_new, miss_new);
            ++halvings;
        }
        if (!ok)
            throw NumericalError("solve_bvp: trial trajectories remain singular after damping");
        v = v_new;
        miss = miss_new;
        stm = stm_new;
    }
    if (miss.norm() < opt.tol_pos) {
        sol.v0 = v;
        sol.residual = miss.norm();
        StateVector s = s0;
        s.v = v;
        sol.v1 = propagate_field(field, s, t1, opt.prop).v;
        return sol;
    }
    throw NumericalError("solve_bvp: no convergence after " + std::to_string(opt.max_iter) +
                         " iterations, residual " + std::to_string(miss.norm()) + " m");
}

// Initial velocity that sweeps r0 onto r1 at a constant angular rate about
// their common normal, with the radius interpolated linearly. This seed sits
// firmly in the short-way transfer family, which keeps the Newton iteration
// away from solutions that wrap behind the bodies or dive between them.
inline Vec3 glide_seed(const Vec3& r0, const Vec3& r1, double dt) {
    Vec3 n = r0.cross(r1);
    const double sweep = std::atan2(n.norm(), r0.dot(r1));
    if (n.norm() < 1e-9 * r0.norm() * r1.norm()) {
        // (anti)parallel endpoints: no rotation plane, fall back to the chord
        return (r1 - r0) / dt;
    }
    n.normalize();
    const Vec3 r0_hat = r0.normalized();
    const double radial_rate = (r1.norm() - r0.norm()) / dt;
    return (sweep / dt) * n.cross(r0) + radial_rate * r0_hat;
}

namespace detail {
// Minimum range to each body along a converged transfer, sampled at a fixed
// cadence. Used to tell apart the shooting branches.
inline std::pair<double, double> arc_clearance(const SystemModel& sys, const SpacecraftModel& sc,
                                               const Vec3& r0, Epoch t0, const Vec3& v0, Epoch t1,
                                               const ShootingOptions& opt) {
    StateVector s;
    s.r = r0;
    s.v = v0;
    s.epoch = t0;
    std::vector<Epoch> grid;
    for (double t = t0.t; t < t1.t; t += opt.clearance_dt) grid.push_back(Epoch{t});
    grid.push_back(t1);
    double min1 = std::numeric_limits<double>::max();
    double min2 = min1;
    propagate_sampled(NominalField{&sys, &sc}, s, grid,
                      [&](const StateVector& x) {
                          const auto [d1, d2] = asteroid_states(sys, x.epoch);
                          min1 = std::min(min1, (x.r - d1.r).norm());
                          min2 = std::min(min2, (x.r - d2.r).norm());
                      },
                      opt.prop);
    return {min1, min2};
}
}  // namespace detail

// Mission-level arc solver: enforces the turnaround-time bound (arcs shorter
// than 48 h cannot be commanded). The shooting is seeded from the two-body
// Lambert transfer about the barycentre with the mean radiation-pressure
// drift subtracted; without that correction the multi-day slow transfers
// drift kilometres off the two-body arc. When a transfer lasts a sizeable
// fraction of the local orbital period, the zero-revolution Lambert arc
// between nearby endpoints degenerates toward a radial plunge and the
// Newton iteration converges onto a branch that dives between the bodies,
// so with clearance floors set the solver retries from the constant-rate
// glide seed and keeps whichever branch stays clear.
inline ArcSolution solve_arc(const SystemModel& sys, const SpacecraftModel& sc, const Vec3& r0,
                             Epoch t0, const Vec3& r1, Epoch t1,
                             const ShootingOptions& opt = {}) {
    const double dt = t1 - t0;
    if (dt < hours(48.0) - 1e-6)
        throw ConstraintError("solve_arc: arc duration " + std::to_string(dt / 3600.0) +
                              " h is below the 48 h turnaround bound");
    const Vec3 srp_drift = 0.5 * dt * accel_srp(sc, sun_geometry(sys, t0 + 0.5 * dt),
                                                0.5 * (r0 + r1));
    std::vector<Vec3> seeds;
    try {
        seeds.push_back(lambert_universal(r0, r1, dt, sys.mu_sys()).v0 - srp_drift);
    } catch (const NumericalError&) {
        // fall through to the glide seed
    }
    seeds.push_back(glide_seed(r0, r1, dt) - srp_drift);

    const bool check = opt.clearance_d1 > 0.0 || opt.clearance_d2 > 0.0;
    std::string why;
    for (const Vec3& seed : seeds) {
        ArcSolution sol;
        try {
            sol = solve_bvp(NominalField{&sys, &sc}, r0, t0, r1, t1, seed, opt);
        } catch (const NumericalError& e) {
            why = e.what();
            continue;
        }
        if (!check) return sol;
        const auto [min1, min2] = detail::arc_clearance(sys, sc, r0, t0, sol.v0, t1, opt);
        if (min1 >= opt.clearance_d1 && min2 >= opt.clearance_d2) return sol;
        why = "converged branch dips to " + std::to_string(min1) + " m (primary) / " +
              std::to_string(min2) + " m (secondary)";
    }
    throw ConstraintError("solve_arc: no acceptable transfer branch: " + why);
}

}  // namespace proxops
