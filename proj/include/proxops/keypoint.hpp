#pragma once

#include <cmath>

#include "proxops/ephemeris.hpp"
#include "proxops/state.hpp"

namespace proxops {

// A science observation point: a position at a prescribed distance from the
// target body realizing a prescribed solar phase angle at its epoch.
struct KeyPoint {
    Epoch epoch;
    Vec3 position;      // DidymosEclipJ2000, barycentric [m]
    Body target = Body::D2;
    double distance = 0.0;  // [m] from target body
    double phase = 0.0;     // [rad] Sun-body-point angle
    double azimuth = 0.0;   // [rad] roll about the body-Sun line; 0 = equatorial,
                            // +90 deg = tilted toward the south (Sun-South +z)
};

// Construct the point by tilting off the body->Sun direction by the phase
// angle, with the azimuth selecting the tilt plane. By construction the
// returned position re-measures to (distance, phase) exactly.
inline KeyPoint make_keypoint(const SystemModel& sys, Epoch epoch, Body target,
                              double distance, double phase, double azimuth = 0.0) {
    if (distance <= 0.0) throw NumericalError("make_keypoint: distance must be positive");
    if (phase < 0.0 || phase > constants::PI)
        throw NumericalError("make_keypoint: phase angle out of [0, pi]");

    const SunGeometry geo = sun_geometry(sys, epoch);
    const Vec3 rb = body_position(sys, epoch, target);
    const Vec3 u = (geo.sun_position() - rb).normalized();  // body -> Sun

    const Vec3 south = -sys.pole.normalized();
    Vec3 e1 = south.cross(u);
    const double n = e1.norm();
    if (n < 1e-9) throw NumericalError("make_keypoint: Sun direction parallel to the pole");
    e1 /= n;                       // in the equatorial plane, normal to the Sun line
    const Vec3 e2 = u.cross(e1);   // completes; points toward the south pole side

    const Vec3 offset = std::cos(phase) * u +
                        std::sin(phase) * (std::cos(azimuth) * e1 + std::sin(azimuth) * e2);

    KeyPoint kp;
    kp.epoch = epoch;
    kp.position = rb + distance * offset;
    kp.target = target;
    kp.distance = distance;
    kp.phase = phase;
    kp.azimuth = azimuth;
    return kp;
}

}  // namespace proxops
