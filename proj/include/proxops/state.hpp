#pragma once

#include <Eigen/Dense>

#include "proxops/epoch.hpp"

namespace proxops {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Coordinate frames used throughout. All dynamics and design work happens in
// DidymosEclipJ2000 (quasi-inertial, origin at the system barycentre, axes of
// the ecliptic J2000 frame); the Sun-South frame is a rotating frame for
// geometry checks and human-readable output.
enum class FrameId {
    DidymosEclipJ2000,
    DidymosEquatorialSunSouth,
};

inline const char* frame_name(FrameId f) {
    switch (f) {
        case FrameId::DidymosEclipJ2000: return "DidymosEclipJ2000";
        case FrameId::DidymosEquatorialSunSouth: return "DidymosEquatorialSunSouth";
    }
    return "?";
}

// Translational state tagged with its epoch and frame.
struct StateVector {
    Vec3 r = Vec3::Zero();  // [m]
    Vec3 v = Vec3::Zero();  // [m/s]
    Epoch epoch;
    FrameId frame = FrameId::DidymosEclipJ2000;

    Vec6 vec() const {
        Vec6 y;
        y << r, v;
        return y;
    }
    static StateVector from_vec(const Vec6& y, Epoch ep,
                                FrameId f = FrameId::DidymosEclipJ2000) {
        StateVector s;
        s.r = y.head<3>();
        s.v = y.tail<3>();
        s.epoch = ep;
        s.frame = f;
        return s;
    }
};

// State transition matrix d x(t1) / d x(t0) with named 3x3 blocks.
struct Stm {
    Mat6 phi = Mat6::Identity();

    Mat3 rr() const { return phi.block<3, 3>(0, 0); }
    Mat3 rv() const { return phi.block<3, 3>(0, 3); }
    Mat3 vr() const { return phi.block<3, 3>(3, 0); }
    Mat3 vv() const { return phi.block<3, 3>(3, 3); }
};

}  // namespace proxops
