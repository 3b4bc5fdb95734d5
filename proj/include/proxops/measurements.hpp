#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "proxops/constants.hpp"
#include "proxops/ephemeris.hpp"
#include "proxops/errors.hpp"
#include "proxops/frames.hpp"
#include "proxops/rng.hpp"
#include "proxops/state.hpp"
#include "proxops/system_model.hpp"

namespace proxops {

// Optical navigation camera error model. The noise laws grow with range: the
// range noise linearly, the angle noise through a near-field arctangent term
// plus a far-field square-root term. The coefficient magnitudes are
// calibration inputs; the defaults below are same-order as the bias terms at
// a 10 km range.
struct NavCamModel {
    double c_r0 = 1.0;       // [m]
    double c_r1 = 1.5e-3;    // [-]
    double c_th0 = 1.0;      // [m]
    double c_th1 = 2.5e-6;   // [rad/sqrt(m)]
    double bias_range = 2.0;                          // [m]
    double bias_angle = 32.4 * constants::ARCSEC;     // [rad]

    double noise_range(double r) const { return c_r0 + c_r1 * r; }
    double noise_angle(double r) const { return std::atan(c_th0 / r) + c_th1 * std::sqrt(r); }

    void validate() const {
        if (c_r0 < 0.0 || c_r1 < 0.0 || c_th0 < 0.0 || c_th1 < 0.0)
            throw ConfigError("NavCamModel: noise coefficients must be non-negative");
    }
};

// Inter-satellite link to the mothercraft: range and range-rate relative to a
// reference trajectory. The large range bias absorbs the reference-orbit
// uncertainty. The default reference is a stationary point a fixed distance
// sunward of the barycentre in the Sun-South frame.
struct IslModel {
    double sigma_range = 0.5;    // [m]
    double sigma_rr = 0.015;     // [m/s]
    double bias_range = 150.0;   // [m]
    double bias_rr = 0.03;       // [m/s]
    double mothercraft_sunward_range = 10e3;  // [m]

    void validate() const {
        if (sigma_range <= 0.0 || sigma_rr <= 0.0)
            throw ConfigError("IslModel: noise sigmas must be positive");
        if (mothercraft_sunward_range <= 0.0)
            throw ConfigError("IslModel: no mothercraft reference trajectory configured");
    }
};

// Reference state of the link partner: fixed offset sunward of the barycentre
// in the Sun-South frame, mapped to the inertial frame with the full
// kinematic transform so it carries the small frame-rotation velocity.
inline StateVector mothercraft_state(const SystemModel& sys, const IslModel& isl, Epoch t) {
    if (isl.mothercraft_sunward_range <= 0.0)
        throw ConfigError("mothercraft_state: no reference trajectory configured");
    StateVector ss;
    ss.r = Vec3(isl.mothercraft_sunward_range, 0.0, 0.0);
    ss.v = Vec3::Zero();
    ss.epoch = t;
    ss.frame = FrameId::DidymosEquatorialSunSouth;
    return from_sun_south(sys, ss);
}

enum class MeasurementKind { NavCamRange, NavCamAngles, IslRange, IslRangeRate };

inline const char* measurement_kind_name(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::NavCamRange: return "navcam_range";
        case MeasurementKind::NavCamAngles: return "navcam_angles";
        case MeasurementKind::IslRange: return "isl_range";
        case MeasurementKind::IslRangeRate: return "isl_range_rate";
    }
    return "?";
}

inline int measurement_dim(MeasurementKind k) {
    return k == MeasurementKind::NavCamAngles ? 2 : 1;
}

// A single observable: scalar (range, range-rate) or 2-vector (angle pair).
// is_post_cot marks observables that arrive after the commanding cut-off and
// therefore only improve the reconstructed knowledge of the next arc.
struct Measurement {
    MeasurementKind kind = MeasurementKind::NavCamRange;
    Epoch epoch;
    Eigen::Vector2d value = Eigen::Vector2d::Zero();
    Eigen::Vector2d sigma = Eigen::Vector2d::Zero();
    bool is_post_cot = false;

    int dim() const { return measurement_dim(kind); }
};

namespace detail {

// Line of sight from the spacecraft to the barycentre, as range plus
// azimuth/elevation of the unit vector in inertial axes.
inline void navcam_geometry(const Vec3& r, double& range, double& az, double& el) {
    range = r.norm();
    if (range <= 0.0) throw NumericalError("navcam geometry: zero range");
    const Vec3 u = -r / range;
    az = std::atan2(u.y(), u.x());
    el = std::asin(std::clamp(u.z(), -1.0, 1.0));
}

inline void isl_geometry(const SystemModel& sys, const IslModel& isl, const StateVector& s,
                         double& range, double& range_rate) {
    const StateVector hera = mothercraft_state(sys, isl, s.epoch);
    const Vec3 d = s.r - hera.r;
    range = d.norm();
    if (range <= 0.0) throw NumericalError("isl geometry: zero relative range");
    range_rate = d.dot(s.v - hera.v) / range;
}

}  // namespace detail

// Noise-free, bias-free observable value for a given state. This is the
// prediction function the filter evaluates on the nominal trajectory.
inline Eigen::Vector2d observe_ideal(const SystemModel& sys, const IslModel& isl,
                                     MeasurementKind kind, const StateVector& s) {
    Eigen::Vector2d z = Eigen::Vector2d::Zero();
    double range, az, el, rr;
    switch (kind) {
        case MeasurementKind::NavCamRange:
            detail::navcam_geometry(s.r, range, az, el);
            z(0) = range;
            break;
        case MeasurementKind::NavCamAngles:
            detail::navcam_geometry(s.r, range, az, el);
            z(0) = az;
            z(1) = el;
            break;
        case MeasurementKind::IslRange:
            detail::isl_geometry(sys, isl, s, range, rr);
            z(0) = range;
            break;
        case MeasurementKind::IslRangeRate:
            detail::isl_geometry(sys, isl, s, range, rr);
            z(0) = rr;
            break;
    }
    return z;
}

// Simulated optical observation of the true state: barycentric range and the
// two line-of-sight angles, each with its constant bias and a noise draw at
// the model sigma for the current range. Optical navigation needs the target
// illuminated, so night-side epochs are rejected.
inline std::pair<Measurement, Measurement> navcam_observe(const SystemModel& sys,
                                                          const StateVector& true_state, Epoch t,
                                                          const NavCamModel& model,
                                                          std::mt19937_64& eng,
                                                          Body target = Body::D2) {
    const double phase = phase_angle(sys, t, true_state.r, target);
    if (phase > 0.5 * constants::PI)
        throw ScheduleError("navcam_observe: target is on the night side (phase " +
                            std::to_string(phase / constants::DEG) + " deg)");
    double range, az, el;
    detail::navcam_geometry(true_state.r, range, az, el);
    const double f_r = model.noise_range(range);
    const double f_th = model.noise_angle(range);

    Measurement m_range;
    m_range.kind = MeasurementKind::NavCamRange;
    m_range.epoch = t;
    m_range.value(0) = range + model.bias_range + draw_normal(eng, 0.0, f_r);
    m_range.sigma(0) = f_r;

    Measurement m_ang;
    m_ang.kind = MeasurementKind::NavCamAngles;
    m_ang.epoch = t;
    m_ang.value(0) = az + model.bias_angle + draw_normal(eng, 0.0, f_th);
    m_ang.value(1) = el + model.bias_angle + draw_normal(eng, 0.0, f_th);
    m_ang.sigma(0) = f_th;
    m_ang.sigma(1) = f_th;
    return {m_range, m_ang};
}

// Simulated radiometric observation relative to the mothercraft reference.
inline Measurement isl_observe(const SystemModel& sys, const StateVector& true_state, Epoch t,
                               const IslModel& model, std::mt19937_64& eng,
                               MeasurementKind kind) {
    StateVector s = true_state;
    s.epoch = t;
    double range, rr;
    detail::isl_geometry(sys, model, s, range, rr);
    Measurement m;
    m.epoch = t;
    if (kind == MeasurementKind::IslRange) {
        m.kind = MeasurementKind::IslRange;
        m.value(0) = range + model.bias_range + draw_normal(eng, 0.0, model.sigma_range);
        m.sigma(0) = model.sigma_range;
    } else if (kind == MeasurementKind::IslRangeRate) {
        m.kind = MeasurementKind::IslRangeRate;
        m.value(0) = rr + model.bias_rr + draw_normal(eng, 0.0, model.sigma_rr);
        m.sigma(0) = model.sigma_rr;
    } else {
        throw ConfigError("isl_observe: not an ISL observable kind");
    }
    return m;
}

// Analytic observation partials with respect to the translational state,
// (dim x 6), evaluated on a nominal state.
inline Eigen::MatrixXd measurement_partials(const SystemModel& sys, const IslModel& isl,
                                            MeasurementKind kind, const StateVector& s) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(measurement_dim(kind), 6);
    switch (kind) {
        case MeasurementKind::NavCamRange: {
            const double range = s.r.norm();
            if (range <= 0.0) throw NumericalError("measurement_partials: zero range");
            H.block<1, 3>(0, 0) = (s.r / range).transpose();
            break;
        }
        case MeasurementKind::NavCamAngles: {
            const double range = s.r.norm();
            if (range <= 0.0) throw NumericalError("measurement_partials: zero range");
            const double rho2 = s.r.x() * s.r.x() + s.r.y() * s.r.y();
            if (rho2 <= 0.0)
                throw NumericalError("measurement_partials: line of sight along the pole");
            // az = atan2(-ry, -rx)
            H(0, 0) = -s.r.y() / rho2;
            H(0, 1) = s.r.x() / rho2;
            // el = asin(-rz/|r|)
            const double sin_el = -s.r.z() / range;
            const double cos_el = std::sqrt(std::max(0.0, 1.0 - sin_el * sin_el));
            if (cos_el <= 0.0)
                throw NumericalError("measurement_partials: line of sight along the pole");
            const Vec3 r_hat = s.r / range;
            const Vec3 g = -(Vec3::UnitZ() - (s.r.z() / range) * r_hat) / (range * cos_el);
            H.block<1, 3>(1, 0) = g.transpose();
            break;
        }
        case MeasurementKind::IslRange: {
            const StateVector hera = mothercraft_state(sys, isl, s.epoch);
            const Vec3 d = s.r - hera.r;
            const double range = d.norm();
            if (range <= 0.0) throw NumericalError("measurement_partials: zero relative range");
            H.block<1, 3>(0, 0) = (d / range).transpose();
            break;
        }
        case MeasurementKind::IslRangeRate: {
            const StateVector hera = mothercraft_state(sys, isl, s.epoch);
            const Vec3 d = s.r - hera.r;
            const Vec3 w = s.v - hera.v;
            const double range = d.norm();
            if (range <= 0.0) throw NumericalError("measurement_partials: zero relative range");
            const Vec3 d_hat = d / range;
            const double rr = d_hat.dot(w);
            H.block<1, 3>(0, 0) = ((w - rr * d_hat) / range).transpose();
            H.block<1, 3>(0, 3) = d_hat.transpose();
            break;
        }
    }
    return H;
}

}  // namespace proxops
