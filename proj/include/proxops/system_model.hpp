#pragma once

#include <cmath>
#include <string>

#include "proxops/constants.hpp"
#include "proxops/errors.hpp"
#include "proxops/state.hpp"

namespace proxops {

// Heliocentric orbit of the system barycentre. Size/shape come from (a, e)
// and the rate from the tabulated period, so the two are honoured exactly as
// configured and never re-derived from mu_sun.
struct HelioOrbit {
    double a = 1.66446 * constants::AU;  // semi-major axis [m]
    double e = 0.3839;                   // eccentricity
    double inc = 3.4083 * constants::DEG;  // inclination to ecliptic [rad]
    double raan = 0.0;                   // longitude of ascending node [rad]
    double argp = 0.0;                   // argument of perihelion [rad]
    double period = 770.0 * 86400.0;     // orbital period [s]
    double t_perihelion = 0.0;           // perihelion passage epoch [s]
};

/** @brief Physical model of the binary system plus its heliocentric context. */
struct SystemModel {
    double mu_sun = 1.32712440018e20;  // [m^3/s^2]
    HelioOrbit helio;

    double m1 = 5.226e11;  // primary mass [kg]
    double m2 = 4.860e9;   // secondary mass [kg]

    double spin_T1 = 2.26 * 3600.0;   // primary rotation period [s]
    double spin_T2 = 11.92 * 3600.0;  // secondary rotation period [s]

    // Mutual orbit, modelled as circular and equatorial. The default
    // separation is the value implied by the masses and the 11.92 h period
    // under tidal locking (the Kepler-consistent separation, ~1180 m).
    double separation_d12 = 1180.0;   // D1-D2 distance [m]
    bool tidally_locked = true;
    // D1->D2 angle from the x reference at t=0 [rad]. The default puts the
    // secondary near the sub-solar point of its orbit at the crater
    // observation epochs, so the observation points sit on the far side of
    // the primary instead of between the two bodies.
    double mutual_phase0 = 1.7907;

    // Spin-axis north pole, unit vector in DidymosEclipJ2000. The default is
    // a retrograde placeholder aligned with ecliptic south.
    Vec3 pole = Vec3(0.0, 0.0, -1.0);

    double mu1() const { return constants::GRAV * m1; }
    double mu2() const { return constants::GRAV * m2; }
    double mu_sys() const { return constants::GRAV * (m1 + m2); }

    // Keplerian period of the circular mutual orbit at the configured separation.
    double mutual_period() const {
        return 2.0 * constants::PI * std::sqrt(separation_d12 * separation_d12 *
                                               separation_d12 / mu_sys());
    }
    double mutual_rate() const { return 2.0 * constants::PI / mutual_period(); }

    // Throws ConfigError on non-physical inputs, and on a tidally locked
    // configuration whose mutual period disagrees with spin_T2 by more than
    // the given fraction (the secondary must co-rotate with the mutual orbit).
    void validate(double lock_tol = 0.01) const {
        if (m1 <= 0.0 || m2 <= 0.0) throw ConfigError("SystemModel: masses must be positive");
        if (separation_d12 <= 0.0) throw ConfigError("SystemModel: separation must be positive");
        if (helio.a <= 0.0 || helio.period <= 0.0)
            throw ConfigError("SystemModel: heliocentric orbit size/period must be positive");
        if (helio.e < 0.0 || helio.e >= 1.0)
            throw ConfigError("SystemModel: heliocentric eccentricity out of [0,1)");
        if (std::abs(pole.norm() - 1.0) > 1e-9)
            throw ConfigError("SystemModel: pole direction must be a unit vector");
        if (tidally_locked) {
            const double rel = std::abs(mutual_period() - spin_T2) / spin_T2;
            if (rel > lock_tol)
                throw ConfigError(
                    "SystemModel: tidal lock inconsistency, mutual period differs from "
                    "spin_T2 by " + std::to_string(rel * 100.0) + "% (limit " +
                    std::to_string(lock_tol * 100.0) + "%)");
        }
    }
};

/** @brief CubeSat ballistic/SRP properties. */
struct SpacecraftModel {
    double mass = 12.0;  // [kg]
    double area = 0.51;  // Sun-facing cross-section [m^2]
    double cr = 1.25;    // radiation pressure coefficient

    void validate() const {
        if (mass <= 0.0 || area <= 0.0 || cr <= 0.0)
            throw ConfigError("SpacecraftModel: mass, area and cr must be positive");
    }
};

}  // namespace proxops
