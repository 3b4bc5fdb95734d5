#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "proxops/errors.hpp"
#include "proxops/state.hpp"

namespace proxops {

// Correction-law settings. A negative weight selects the automatic value
// 1/dt^2 for a leg of duration dt. Against the position normal term, whose
// scale is the squared velocity-to-position sensitivity, that value is
// vanishingly small, so the automatic mode behaves as pure next-node
// position targeting with the velocity term kept only as a regularizer.
// Weighting the velocity term up to parity sounds attractive but is
// destabilizing here: the tidal field amplifies the velocity sensitivities
// through every science passage, a commensurate weight then lets the
// velocity objective crowd out position nulling, and the uncancelled
// position error compounds several-fold per leg. The impulse that would
// close the loop at the final node is normally left unexecuted.
struct GuidanceConfig {
    double q = -1.0;  // [s^2]
    bool apply_final_impulse = false;
};

inline double guidance_weight(const GuidanceConfig& cfg, double leg_dt) {
    return cfg.q >= 0.0 ? cfg.q : 1.0 / (leg_dt * leg_dt);
}

// Impulsive correction at t_j from the estimated deviation, weighing the
// predicted position miss at t_{j+1} against the predicted velocity miss:
//
//   dv = -(Phi_rv' Phi_rv + q Phi_vv' Phi_vv)^-1
//         (Phi_rv' Phi_rr + q Phi_vv' Phi_vr) dr  -  dv_est
//
// With q = 0 this reduces to -Phi_rv^-1 Phi_rr dr - dv_est, which cancels
// the linearly propagated position deviation at t_{j+1} exactly.
inline Vec3 differential_guidance(const Vec3& dr_est, const Vec3& dv_est, const Stm& stm,
                                  double q) {
    if (q < 0.0) throw ConfigError("differential_guidance: weight must be >= 0");
    const Mat3 n = stm.rv().transpose() * stm.rv() + q * stm.vv().transpose() * stm.vv();
    const Mat3 m = stm.rv().transpose() * stm.rr() + q * stm.vv().transpose() * stm.vr();
    const Eigen::JacobiSVD<Mat3> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(2);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e14)
        throw NumericalError("differential_guidance: normal matrix is singular (condition " +
                             std::to_string(smax / (smin > 0.0 ? smin : 1e-300)) + ")");
    return -svd.solve(m * dr_est) - dv_est;
}

}  // namespace proxops
