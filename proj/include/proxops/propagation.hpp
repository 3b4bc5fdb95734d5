#pragma once

#include <functional>
#include <vector>

#include "proxops/dynamics.hpp"
#include "proxops/integrator.hpp"
#include "proxops/state.hpp"

namespace proxops {

// Tolerances follow the translational-state contract: 1e-10 relative,
// 1e-6 m / 1e-9 m/s absolute. Variational components get a loose absolute
// floor and ride on the relative tolerance once they grow.
struct PropagationOptions {
    double rtol = 1e-10;
    double atol_pos = 1e-6;   // [m]
    double atol_vel = 1e-9;   // [m/s]
    double atol_var = 1e-9;   // variational entries
    long max_steps = 2000000;

    IntegratorOptions integrator(long nvar = 0) const {
        IntegratorOptions o;
        o.rtol = rtol;
        o.atol = Eigen::VectorXd::Constant(6 + nvar, atol_var);
        o.atol.head<3>().setConstant(atol_pos);
        o.atol.segment<3>(3).setConstant(atol_vel);
        o.max_steps = max_steps;
        return o;
    }
};

// Propagate a state under an arbitrary dynamics functor (see NominalField).
template <class Field>
StateVector propagate_field(const Field& field, const StateVector& s0, Epoch tf,
                            const PropagationOptions& opt = {}) {
    auto rhs = [&field](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd dy(6);
        dy.head<3>() = y.segment<3>(3);
        dy.tail<3>() = field.accel(y.head<3>(), t);
        return dy;
    };
    const Eigen::VectorXd y1 = dp54_integrate(rhs, s0.epoch.t, s0.vec(), tf.t, opt.integrator());
    return StateVector::from_vec(y1, tf, s0.frame);
}

inline StateVector propagate(const SystemModel& sys, const SpacecraftModel& sc,
                             const StateVector& s0, Epoch tf,
                             const PropagationOptions& opt = {}) {
    return propagate_field(NominalField{&sys, &sc}, s0, tf, opt);
}

// Propagate through a sorted list of epochs, invoking the callback at each.
// Integration restarts from each sample point, so every reported state sits
// exactly on its epoch regardless of the adaptive step sequence.
template <class Field>
StateVector propagate_sampled(const Field& field, const StateVector& s0,
                              const std::vector<Epoch>& epochs,
                              const std::function<void(const StateVector&)>& cb,
                              const PropagationOptions& opt = {}) {
    StateVector s = s0;
    for (const Epoch& ep : epochs) {
        if (ep.t != s.epoch.t) s = propagate_field(field, s, ep, opt);
        cb(s);
    }
    return s;
}

template <class Field>
std::pair<StateVector, Stm> propagate_with_stm_field(const Field& field, const StateVector& s0,
                                                     Epoch tf,
                                                     const PropagationOptions& opt = {}) {
    auto rhs = [&field](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd dy(42);
        const Vec3 r = y.head<3>();
        dy.head<3>() = y.segment<3>(3);
        dy.segment<3>(3) = field.accel(r, t);
        const Mat3 g = field.grad(r, t);
        const Eigen::Map<const Mat6> phi(y.data() + 6);
        Mat6 dphi;
        // A*Phi with A = [[0, I], [G, 0]] written out by block
        dphi.topRows<3>() = phi.bottomRows<3>();
        dphi.bottomRows<3>() = g * phi.topRows<3>();
        Eigen::Map<Mat6>(dy.data() + 6) = dphi;
        return dy;
    };
    Eigen::VectorXd y0(42);
    y0.head<6>() = s0.vec();
    Eigen::Map<Mat6>(y0.data() + 6) = Mat6::Identity();
    const Eigen::VectorXd y1 = dp54_integrate(rhs, s0.epoch.t, y0, tf.t, opt.integrator(36));
    Stm stm;
    stm.phi = Eigen::Map<const Mat6>(y1.data() + 6);
    return {StateVector::from_vec(y1.head<6>(), tf, s0.frame), stm};
}

inline std::pair<StateVector, Stm> propagate_with_stm(const SystemModel& sys,
                                                      const SpacecraftModel& sc,
                                                      const StateVector& s0, Epoch tf,
                                                      const PropagationOptions& opt = {}) {
    return propagate_with_stm_field(NominalField{&sys, &sc}, s0, tf, opt);
}

// First-order Gauss-Markov time constants for the stochastic acceleration
// states carried by the navigation filter (per-axis SRP scale, residual).
struct GmParams {
    double tau_srp = 86400.0;  // [s]
    double tau_res = 86400.0;  // [s]
};

// Propagation of the nominal state together with every sensitivity the
// filter's time update needs across one interval [t0, t1]:
//   stm     Phi(t1, t0), 6x6
//   gm_map  integral of Phi(t1,s) B(s) E(s,t0) ds, 6x6 over the six GM states
//           (columns 0-2: per-axis SRP scale, 3-5: residual acceleration),
//           including the exponential decay of the source inside the interval
//   mu_map  integral of Phi(t1,s) d a/d mu ds, the consider-parameter column
struct VariationalTransition {
    StateVector state;
    Mat6 stm;
    Mat6 gm_map;
    Vec6 mu_map;
};

inline VariationalTransition propagate_variational(const SystemModel& sys,
                                                   const SpacecraftModel& sc,
                                                   const StateVector& s0, Epoch tf,
                                                   const GmParams& gm,
                                                   const PropagationOptions& opt = {}) {
    if (tf.t < s0.epoch.t)
        throw NumericalError("propagate_variational: backward intervals unsupported");
    const double t0 = s0.epoch.t;
    auto rhs = [&](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd dy(84);
        const Vec3 r = y.head<3>();
        const Epoch ep{t};
        dy.head<3>() = y.segment<3>(3);
        const SunGeometry geo = sun_geometry(sys, ep);
        const Vec3 srp = accel_srp(sc, geo, r);
        dy.segment<3>(3) = accel_gravity(sys, ep, r) + accel_fourbody(sys.mu_sun, geo, r) + srp;
        const Mat3 g = accel_gradient(sys, sc, ep, r);

        const Eigen::Map<const Mat6> phi(y.data() + 6);
        Mat6 dphi;
        dphi.topRows<3>() = phi.bottomRows<3>();
        dphi.bottomRows<3>() = g * phi.topRows<3>();
        Eigen::Map<Mat6>(dy.data() + 6) = dphi;

        const Eigen::Map<const Mat6> s(y.data() + 42);
        Mat6 ds;
        ds.topRows<3>() = s.bottomRows<3>();
        ds.bottomRows<3>() = g * s.topRows<3>();
        // forcing columns, decayed to their value at interval start
        const double decay_srp = std::exp(-(t - t0) / gm.tau_srp);
        const double decay_res = std::exp(-(t - t0) / gm.tau_res);
        ds.block<3, 3>(3, 0) += decay_srp * srp.asDiagonal().toDenseMatrix();
        ds.block<3, 3>(3, 3) += decay_res * Mat3::Identity();
        Eigen::Map<Mat6>(dy.data() + 42) = ds;

        const Eigen::Map<const Vec6> th(y.data() + 78);
        Vec6 dth;
        dth.head<3>() = th.tail<3>();
        dth.tail<3>() = g * th.head<3>() + accel_mu_sensitivity(sys, ep, r);
        Eigen::Map<Vec6>(dy.data() + 78) = dth;
        return dy;
    };

    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(84);
    y0.head<6>() = s0.vec();
    Eigen::Map<Mat6>(y0.data() + 6) = Mat6::Identity();
    const Eigen::VectorXd y1 = dp54_integrate(rhs, t0, y0, tf.t, opt.integrator(78));

    VariationalTransition out;
    out.state = StateVector::from_vec(y1.head<6>(), tf, s0.frame);
    out.stm = Eigen::Map<const Mat6>(y1.data() + 6);
    out.gm_map = Eigen::Map<const Mat6>(y1.data() + 42);
    out.mu_map = Eigen::Map<const Vec6>(y1.data() + 78);
    return out;
}

}  // namespace proxops
