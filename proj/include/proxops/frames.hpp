#pragma once

#include <cmath>

#include "proxops/ephemeris.hpp"
#include "proxops/state.hpp"
#include "proxops/system_model.hpp"

namespace proxops {

// Rotation matrix DidymosEclipJ2000 -> DidymosEquatorialSunSouth at an epoch:
// z points to the pole's south, x is the Sun direction projected onto the
// equatorial plane, y completes the right-handed triad.
inline Mat3 sun_south_rotation(const SystemModel& sys, Epoch epoch) {
    const Vec3 z = -sys.pole.normalized();  // south
    const Vec3 s = sun_direction(sys, epoch);
    Vec3 x = s - s.dot(z) * z;
    const double n = x.norm();
    if (n < 1e-12)
        throw NumericalError("sun_south_rotation: Sun direction parallel to the pole");
    x /= n;
    const Vec3 y = z.cross(x);
    Mat3 rot;
    rot.row(0) = x.transpose();
    rot.row(1) = y.transpose();
    rot.row(2) = z.transpose();
    return rot;
}

namespace detail {
// Frame rotation rate handled by central differencing of the DCM; the frame
// turns with the Sun direction (~0.5 deg/day) so a 1 s stencil is far below
// truncation concerns and keeps the transform exactly invertible.
inline Mat3 sun_south_rotation_rate(const SystemModel& sys, Epoch epoch, double h = 1.0) {
    const Mat3 rp = sun_south_rotation(sys, epoch + h);
    const Mat3 rm = sun_south_rotation(sys, epoch - h);
    return (rp - rm) / (2.0 * h);
}
}  // namespace detail

inline StateVector to_sun_south(const SystemModel& sys, const StateVector& s) {
    if (s.frame != FrameId::DidymosEclipJ2000)
        throw NumericalError("to_sun_south: input must be in DidymosEclipJ2000");
    const Mat3 rot = sun_south_rotation(sys, s.epoch);
    const Mat3 rot_dot = detail::sun_south_rotation_rate(sys, s.epoch);
    StateVector out;
    out.r = rot * s.r;
    out.v = rot * s.v + rot_dot * s.r;
    out.epoch = s.epoch;
    out.frame = FrameId::DidymosEquatorialSunSouth;
    return out;
}

inline StateVector from_sun_south(const SystemModel& sys, const StateVector& s) {
    if (s.frame != FrameId::DidymosEquatorialSunSouth)
        throw NumericalError("from_sun_south: input must be in DidymosEquatorialSunSouth");
    const Mat3 rot = sun_south_rotation(sys, s.epoch);
    const Mat3 rot_dot = detail::sun_south_rotation_rate(sys, s.epoch);
    StateVector out;
    out.r = rot.transpose() * s.r;
    out.v = rot.transpose() * (s.v - rot_dot * out.r);
    out.epoch = s.epoch;
    out.frame = FrameId::DidymosEclipJ2000;
    return out;
}

}  // namespace proxops
