#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "proxops/errors.hpp"
#include "proxops/measurements.hpp"
#include "proxops/propagation.hpp"
#include "proxops/uncertainty.hpp"

namespace proxops {

// Layout of the augmented estimation state. The deviation vector stacks, in
// order: position and velocity (6), radiation-pressure scale factors (3),
// residual acceleration (3), measurement biases (5), gravity parameter (1).
// Everything up to n_est() is estimated, the rest is carried as consider
// parameters whose covariance the filter never reduces. The gravity
// parameter is always a consider state; the biases switch role via
// estimate_biases.
struct StateLayout {
    static constexpr int kRv = 0;
    static constexpr int kSrp = 6;
    static constexpr int kRes = 9;
    static constexpr int kBias = 12;  // navcam range, navcam az, navcam el, isl range, isl rate
    static constexpr int kMu = 17;
    static constexpr int kTotal = 18;

    bool estimate_biases = false;

    int n_est() const { return estimate_biases ? kMu : kBias; }
    int n_consider() const { return kTotal - n_est(); }
};

// Column index of the bias state feeding a measurement component.
inline int bias_index(MeasurementKind kind, int component) {
    switch (kind) {
        case MeasurementKind::NavCamRange: return StateLayout::kBias + 0;
        case MeasurementKind::NavCamAngles: return StateLayout::kBias + 1 + component;
        case MeasurementKind::IslRange: return StateLayout::kBias + 3;
        case MeasurementKind::IslRangeRate: return StateLayout::kBias + 4;
    }
    return -1;
}

// Deviation estimate and covariance over the augmented state. In a pure
// covariance analysis x stays zero (all innovations vanish along the nominal)
// and only P carries information.
struct FilterState {
    StateLayout layout;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(StateLayout::kTotal);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(StateLayout::kTotal, StateLayout::kTotal);
    Epoch epoch;

    double sigma_pos() const { return std::sqrt(P(0, 0) + P(1, 1) + P(2, 2)); }
    double sigma_vel() const { return std::sqrt(P(3, 3) + P(4, 4) + P(5, 5)); }
    Mat6 rv_covariance() const { return P.topLeftCorner<6, 6>(); }
};

// Initial covariance at phase start: diagonal position/velocity knowledge,
// steady-state priors on the stochastic accelerations, data-sheet priors on
// the biases, and the consider variance on the gravity parameter.
inline FilterState initial_filter_state(const StateLayout& layout, const UncertaintyBudget& budget,
                                        const NavCamModel& navcam, const IslModel& isl,
                                        Epoch t0) {
    FilterState fs;
    fs.layout = layout;
    fs.epoch = t0;
    Eigen::VectorXd d(StateLayout::kTotal);
    d << budget.init_sigma_pos, budget.init_sigma_pos, budget.init_sigma_pos,
        budget.init_sigma_vel, budget.init_sigma_vel, budget.init_sigma_vel,
        budget.srp_scale.sigma, budget.srp_scale.sigma, budget.srp_scale.sigma,
        budget.resid_accel.sigma, budget.resid_accel.sigma, budget.resid_accel.sigma,
        navcam.bias_range, navcam.bias_angle, navcam.bias_angle, isl.bias_range, isl.bias_rr,
        budget.sigma_mu;
    fs.P = d.cwiseProduct(d).asDiagonal();
    return fs;
}

// Covariance propagation over one nominal-trajectory interval. The 6x6 state
// transition block comes from the variational integration, the stochastic
// accelerations decay exponentially and receive their discrete steady-state
// process noise, and the gravity column couples the consider parameter into
// the translational state.
inline FilterState time_update(const FilterState& fs, const VariationalTransition& vt,
                               const UncertaintyBudget& budget) {
    const double dt = vt.state.epoch - fs.epoch;
    if (dt < 0.0) throw NumericalError("time_update: transition ends before the filter epoch");

    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(StateLayout::kTotal, StateLayout::kTotal);
    phi.block<6, 6>(0, 0) = vt.stm;
    phi.block<6, 3>(0, StateLayout::kSrp) = vt.gm_map.leftCols<3>();
    phi.block<6, 3>(0, StateLayout::kRes) = vt.gm_map.rightCols<3>();
    const double f_srp = std::exp(-dt / budget.srp_scale.tau);
    const double f_res = std::exp(-dt / budget.resid_accel.tau);
    phi.block<3, 3>(StateLayout::kSrp, StateLayout::kSrp) *= f_srp;
    phi.block<3, 3>(StateLayout::kRes, StateLayout::kRes) *= f_res;
    phi.block<6, 1>(0, StateLayout::kMu) = vt.mu_map;

    Eigen::VectorXd q = Eigen::VectorXd::Zero(StateLayout::kTotal);
    q.segment<3>(StateLayout::kSrp).setConstant(budget.srp_scale.sigma * budget.srp_scale.sigma *
                                                (1.0 - f_srp * f_srp));
    q.segment<3>(StateLayout::kRes).setConstant(budget.resid_accel.sigma *
                                                budget.resid_accel.sigma * (1.0 - f_res * f_res));

    FilterState out = fs;
    out.epoch = vt.state.epoch;
    out.x = phi * fs.x;
    out.P = phi * fs.P * phi.transpose();
    out.P.diagonal() += q;
    out.P = 0.5 * (out.P + out.P.transpose()).eval();
    return out;
}

// Measurement update in the consider formulation: the gain is computed over
// the full augmented state, then zeroed on the consider rows, so estimated
// states absorb the information while consider covariances only feed the
// innovation statistics. Joseph form keeps the result symmetric
// positive-semidefinite; the consider block itself is untouched.
inline FilterState schmidt_update(const FilterState& fs, const Measurement& meas,
                                  const Eigen::MatrixXd& h_rv,
                                  const Eigen::Vector2d& innovation = Eigen::Vector2d::Zero()) {
    const int m = meas.dim();
    if (h_rv.rows() != m || h_rv.cols() != 6)
        throw NumericalError("schmidt_update: partial matrix dimensions do not match");
    for (int i = 0; i < m; ++i)
        if (!(meas.sigma(i) > 0.0))
            throw ConfigError("schmidt_update: measurement sigma must be positive");

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, StateLayout::kTotal);
    H.leftCols<6>() = h_rv;
    for (int i = 0; i < m; ++i) H(i, bias_index(meas.kind, i)) = 1.0;

    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) R(i, i) = meas.sigma(i) * meas.sigma(i);

    const Eigen::MatrixXd S = H * fs.P * H.transpose() + R;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw NumericalError("schmidt_update: innovation covariance is not positive definite");

    Eigen::MatrixXd K = llt.solve(H * fs.P).transpose();  // kTotal x m
    K.bottomRows(fs.layout.n_consider()).setZero();

    FilterState out = fs;
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(StateLayout::kTotal, StateLayout::kTotal) - K * H;
    out.P = A * fs.P * A.transpose() + K * R * K.transpose();
    out.P = 0.5 * (out.P + out.P.transpose()).eval();
    out.x = fs.x + K * (innovation.head(m) - H * fs.x);
    return out;
}

// Execution-error inflation at a maneuver: the commanded impulse is known
// only to the thruster knowledge accuracy, so its error covariance is added
// onto the velocity block.
inline FilterState apply_maneuver_knowledge(const FilterState& fs, const Vec3& dv_nominal,
                                            const UncertaintyBudget& budget) {
    FilterState out = fs;
    out.P.block<3, 3>(3, 3) += maneuver_exec_covariance(dv_nominal, budget.thrust_knowledge);
    return out;
}

}  // namespace proxops
