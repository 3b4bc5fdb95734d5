#pragma once

#include <cmath>

#include "proxops/constants.hpp"
#include "proxops/epoch.hpp"
#include "proxops/errors.hpp"
#include "proxops/state.hpp"

namespace proxops {

// First-order Gauss-Markov (Ornstein-Uhlenbeck) process parameters. sigma is
// the steady-state standard deviation, tau the correlation time.
struct GaussMarkov {
    double sigma = 0.0;
    double tau = days(1.0);  // [s]
};

// Proportional thruster execution error: a magnitude fraction along the
// commanded direction and an angular error on the two transverse axes.
struct ThrustErrorModel {
    double sigma_mag = 0.0;  // [fraction of |dv|]
    double sigma_dir = 0.0;  // [rad]
};

// Every stochastic contribution of the navigation analysis in one place.
// Knowledge-level numbers describe how well an executed maneuver is known
// afterwards; dispersion-level numbers describe how far the executed maneuver
// deviates from the command (quoted 3-sigma in the source requirements, held
// here as 1-sigma).
struct UncertaintyBudget {
    double sigma_mu = 1e-4;  // [m^3/s^2] consider std of the system GM

    ThrustErrorModel thrust_knowledge{0.0167, 0.67 * constants::DEG};
    ThrustErrorModel thrust_dispersion{0.05 / 3.0, (2.0 / 3.0) * constants::DEG};

    GaussMarkov srp_scale{0.08, days(1.0)};   // multiplicative, per axis
    GaussMarkov resid_accel{5e-9, days(1.0)};  // [m/s^2] additive, per axis

    // initial knowledge at phase start, per axis
    double init_sigma_pos = 100.0;  // [m]
    double init_sigma_vel = 1e-3;   // [m/s]

    // magnitude of the arrival maneuver that precedes the phase; its
    // execution error separates initial dispersion from initial knowledge
    double insertion_dv = 0.10;  // [m/s]

    void validate() const {
        if (sigma_mu < 0.0) throw ConfigError("UncertaintyBudget: sigma_mu must be >= 0");
        if (srp_scale.sigma < 0.0 || resid_accel.sigma < 0.0)
            throw ConfigError("UncertaintyBudget: process-noise sigmas must be >= 0");
        if (srp_scale.tau <= 0.0 || resid_accel.tau <= 0.0)
            throw ConfigError("UncertaintyBudget: correlation times must be > 0");
        if (thrust_knowledge.sigma_mag < 0.0 || thrust_dispersion.sigma_mag < 0.0 ||
            thrust_knowledge.sigma_dir < 0.0 || thrust_dispersion.sigma_dir < 0.0)
            throw ConfigError("UncertaintyBudget: thrust error sigmas must be >= 0");
        if (init_sigma_pos < 0.0 || init_sigma_vel < 0.0 || insertion_dv < 0.0)
            throw ConfigError("UncertaintyBudget: initial sigmas must be >= 0");
    }
};

// Execution-error covariance of a maneuver with nominal vector dv: the
// magnitude error acts along the commanded direction, the pointing error on
// the two transverse axes with equal strength. Zero maneuver, zero matrix.
inline Mat3 maneuver_exec_covariance(const Vec3& dv, const ThrustErrorModel& model) {
    const double m = dv.norm();
    if (m <= 0.0) return Mat3::Zero();
    const Vec3 along = dv / m;
    // any orthonormal completion works; the transverse variances are equal
    Vec3 pick = std::abs(along.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = along.cross(pick).normalized();
    const Vec3 t2 = along.cross(t1);
    const double var_along = std::pow(model.sigma_mag * m, 2);
    const double var_trans = std::pow(m * std::tan(model.sigma_dir), 2);
    return var_along * along * along.transpose() + var_trans * t1 * t1.transpose() +
           var_trans * t2 * t2.transpose();
}

}  // namespace proxops
