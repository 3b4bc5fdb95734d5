#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "proxops/bvp.hpp"
#include "proxops/guidance.hpp"
#include "proxops/knowledge.hpp"
#include "proxops/plan.hpp"
#include "proxops/rng.hpp"
#include "proxops/uncertainty.hpp"

namespace proxops {

// How the ground's estimate travels from the cut-off to the maneuver epoch.
// Propagating the estimated state through the nominal dynamics keeps the
// velocity estimate honest through the science passages; the linearized
// transition matrix misjudges it by tens of mm/s per kilometre of deviation
// there, which is lethal when the local escape speed is about 0.1 m/s. The
// linear variant is kept for comparison studies.
enum class EstTransport { Nonlinear, Stm };

// Where a correction aims. NextManeuver skips the zero-magnitude mid nodes
// of the long arcs and nulls the deviation at the next commanded burn, so
// the mid-node correction that follows acts as a refinement with fresher
// knowledge. NextNode nulls at whatever node comes next, mid or not.
enum class CorrectionTarget { NextManeuver, NextNode };

struct DispersionOptions {
    int n_samples = 500;
    std::uint64_t master_seed = 1;
    int workers = 1;
    double truth_step = 60.0;    // [s] fixed integration step of the truth
    double sample_dt = 1800.0;   // [s] reporting cadence
    double collision_radius_d1 = 400.0;  // [m]
    double collision_radius_d2 = 100.0;  // [m]
    double escape_radius = 30e3;         // [m]
    double stop_collision_fraction = 0.01;
    bool loop_final_impulse = false;  // execute the loop-closing impulse at the end
    EstTransport est_transport = EstTransport::Nonlinear;
    CorrectionTarget correction_target = CorrectionTarget::NextManeuver;
    GuidanceConfig guidance;
    PropagationOptions prop;  // for the nominal transition matrices
};

struct SampleStatus {
    enum class Outcome { Completed, Collided, Escaped, Failed };
    Outcome outcome = Outcome::Completed;
    Epoch epoch;
    int leg = -1;
    Body body = Body::D1;
};

// Full record of one Monte Carlo sample, for inspection and tests. The batch
// runner keeps only the compact parts.
struct SampleRun {
    std::uint64_t sample_index = 0;
    std::vector<double> t_grid;
    std::vector<Vec3> r_true;
    std::vector<double> dispersion;  // |r_true - r_reference| [m]
    std::vector<std::pair<double, Vec3>> corrections;
    double nav_cost = 0.0;  // [m/s]
    SampleStatus status;
};

struct DispersionPoint {
    double t = 0.0;
    double sigma_abs = 0.0;       // [m] rms of |r_true - r_ref| over alive samples
    double rel = 0.0;             // sigma_abs / nominal min body range
    double nom_min_range = 0.0;   // [m]
    int alive = 0;
    bool at_node = false;
};

struct NodeRecord {
    int node = 0;
    double t = 0.0;
    double cum_collision_fraction = 0.0;
};

struct DispersionResult {
    int n_samples = 0;
    std::vector<DispersionPoint> series;  // truncated at stop_node when set
    std::vector<double> nav_costs;        // per sample, in sample order
    std::vector<SampleStatus> statuses;   // per sample
    std::vector<NodeRecord> nodes;
    double collision_fraction = 0.0;
    double escape_fraction = 0.0;
    int stop_node = -1;
    int guidance_failures = 0;
};

namespace detail {

// Symmetric PSD square root; tolerates zero and near-singular matrices.
inline Mat6 psd_sqrt(const Mat6& p) {
    Eigen::SelfAdjointEigenSolver<Mat6> es(p);
    const Vec6 s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

// Executes a commanded impulse through the proportional thruster error model.
// The three unit draws are consumed unconditionally so the sample stream
// layout does not depend on the command magnitude; with all errors exactly
// zero the command passes through bitwise.
inline Vec3 execute_impulse(const Vec3& dv_cmd, const ThrustErrorModel& model,
                            std::mt19937_64& eng) {
    const double x1 = draw_normal(eng);
    const double x2 = draw_normal(eng);
    const double x3 = draw_normal(eng);
    const double mag = dv_cmd.norm();
    if (mag <= 0.0) return dv_cmd;
    const double em = model.sigma_mag * x1;
    const double e1 = std::tan(model.sigma_dir) * x2;
    const double e2 = std::tan(model.sigma_dir) * x3;
    if (em == 0.0 && e1 == 0.0 && e2 == 0.0) return dv_cmd;
    const Vec3 d = dv_cmd / mag;
    const Vec3 pick = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = d.cross(pick).normalized();
    const Vec3 t2 = d.cross(t1);
    return mag * (1.0 + em) * (d + e1 * t1 + e2 * t2).normalized();
}

// One classic RK4 step of the translational state under a frozen field.
template <class Field>
inline void rk4_push(const Field& f, double t, Vec3& r, Vec3& v, double h) {
    const Vec3 k1v = f.accel(r, t);
    const Vec3 r2 = r + 0.5 * h * v;
    const Vec3 k2v = f.accel(r2, t + 0.5 * h);
    const Vec3 k2r = v + 0.5 * h * k1v;
    const Vec3 r3 = r + 0.5 * h * k2r;
    const Vec3 k3v = f.accel(r3, t + 0.5 * h);
    const Vec3 k3r = v + 0.5 * h * k2v;
    const Vec3 r4 = r + h * k3r;
    const Vec3 k4v = f.accel(r4, t + h);
    const Vec3 k4r = v + h * k3v;
    r += h / 6.0 * (v + 2.0 * k2r + 2.0 * k3r + k4r);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

inline long exact_steps(double span, double h, const char* what) {
    const double n = span / h;
    const long ln = std::lround(n);
    if (std::abs(n - ln) > 1e-9)
        throw ConfigError(std::string("dispersion grid: ") + what +
                          " is not a whole number of steps");
    return ln;
}

}  // namespace detail

// Everything the per-sample simulation needs, computed once. The reference
// trajectory is re-flown with the same fixed-step integrator and the same
// field type as the samples, so a sample with every error zeroed reproduces
// it bitwise and reports exactly zero dispersion.
struct DispersionContext {
    const SystemModel* sys = nullptr;
    const SpacecraftModel* sc = nullptr;
    const TrajectoryPlan* plan = nullptr;
    const UncertaintyBudget* budget = nullptr;
    DispersionOptions opts;

    struct Leg {
        Epoch t0, t1, cot;
        long steps = 0;
        long cot_step = 0;
        long stride = 0;   // truth steps per reporting point
        int grid0 = 0;
        Vec3 dv_node = Vec3::Zero();  // nominal maneuver opening this leg
        Vec6 ref_cot = Vec6::Zero();  // reference state at the cut-off
        Vec6 ref_end = Vec6::Zero();  // reference state at the leg end, pre-maneuver
        Mat6 stm_cot_to_end = Mat6::Identity();
        Mat6 knowledge_sqrt = Mat6::Zero();
        // correction at the node closing this leg
        bool has_correction = false;
        Vec3 dv_close = Vec3::Zero();  // nominal maneuver at that node
        Mat6 stm_node_to_target = Mat6::Identity();
        double target_dt = 0.0;
    };
    std::vector<Leg> legs;
    Vec6 ref0 = Vec6::Zero();
    Mat6 sqrt_d0 = Mat6::Zero();
    std::vector<double> grid;           // reporting epochs
    std::vector<Vec3> nom_grid;         // reference positions at the grid
    std::vector<double> nom_min_range;  // [m]
    std::vector<int> node_grid;         // grid index of every node epoch
};

inline DispersionContext build_dispersion_context(const SystemModel& sys,
                                                  const SpacecraftModel& sc,
                                                  const TrajectoryPlan& plan,
                                                  const KnowledgeTimeline& knowledge,
                                                  const UncertaintyBudget& budget,
                                                  const DispersionOptions& opts) {
    if (knowledge.legs.size() != plan.arcs.size())
        throw ConfigError("dispersion: knowledge timeline does not match the plan");
    const double h = opts.truth_step;
    if (h <= 0.0 || opts.sample_dt <= 0.0)
        throw ConfigError("dispersion: step sizes must be positive");

    DispersionContext ctx;
    ctx.sys = &sys;
    ctx.sc = &sc;
    ctx.plan = &plan;
    ctx.budget = &budget;
    ctx.opts = opts;

    const std::size_t nlegs = plan.arcs.size();
    ctx.legs.resize(nlegs);
    const long stride = detail::exact_steps(opts.sample_dt, h, "reporting cadence");

    // per-leg bookkeeping and nominal transition matrices
    std::vector<Mat6> leg_stm(nlegs);
    PropagationOptions prop = opts.prop;
    for (std::size_t j = 0; j < nlegs; ++j) {
        const Arc& arc = plan.arcs[j];
        DispersionContext::Leg& leg = ctx.legs[j];
        leg.t0 = arc.start.epoch;
        leg.t1 = arc.end_epoch;
        leg.cot = knowledge.legs[j].cot;
        leg.steps = detail::exact_steps(leg.t1 - leg.t0, h, "leg duration");
        leg.cot_step = detail::exact_steps(leg.cot - leg.t0, h, "cut-off offset");
        leg.stride = stride;
        if (leg.steps % stride != 0)
            throw ConfigError("dispersion grid: leg duration is not a whole number of points");
        leg.dv_node = j == 0 ? Vec3::Zero() : arc.start.dv;
        leg.knowledge_sqrt = detail::psd_sqrt(knowledge.legs[j].ground_rv_at_cot);

        StateVector nom0;
        nom0.r = arc.start.position;
        nom0.v = arc.v0;
        nom0.epoch = leg.t0;
        auto [at_cot, stm_to_cot] = propagate_with_stm(sys, sc, nom0, leg.cot, prop);
        auto [at_end, stm_cot_end] = propagate_with_stm(sys, sc, at_cot, leg.t1, prop);
        leg.stm_cot_to_end = stm_cot_end.phi;
        leg_stm[j] = (stm_cot_end.phi * stm_to_cot.phi).eval();
    }

    // correction targeting: the correction applied at each interior node
    // nulls the predicted position deviation at the following node (receding
    // horizon, one leg ahead). Mid-arc zero-magnitude nodes host corrections
    // like any other commanded point; with no concurrent nominal burn the
    // executed correction is nearly noise-free, which is what makes the
    // long-arc pattern recover between science passages.
    for (std::size_t j = 0; j + 1 < nlegs; ++j) {
        const std::size_t node = j + 1;
        DispersionContext::Leg& leg = ctx.legs[j];
        leg.has_correction = true;
        leg.dv_close = plan.arcs[node].start.dv;
        Mat6 stm = leg_stm[node];
        double dt = plan.arcs[node].duration();
        if (opts.correction_target == CorrectionTarget::NextManeuver) {
            // extend the horizon through zero-magnitude mid nodes
            std::size_t k = node;
            while (k + 1 < nlegs && plan.arcs[k + 1].start.zero_magnitude) {
                ++k;
                stm = (leg_stm[k] * stm).eval();
                dt += plan.arcs[k].duration();
            }
        }
        leg.stm_node_to_target = stm;
        leg.target_dt = dt;
    }

    // initial dispersion: knowledge at phase start plus the execution error
    // of the arrival maneuver
    Mat6 p_d0 = Mat6::Zero();
    for (int i = 0; i < 3; ++i) {
        p_d0(i, i) = budget.init_sigma_pos * budget.init_sigma_pos;
        p_d0(3 + i, 3 + i) = budget.init_sigma_vel * budget.init_sigma_vel;
    }
    const Vec3 closure = plan.arcs.front().start.dv;
    const Vec3 ins_dir = closure.norm() > 0.0 ? Vec3(closure.normalized()) : Vec3::UnitX();
    p_d0.block<3, 3>(3, 3) +=
        maneuver_exec_covariance(budget.insertion_dv * ins_dir, budget.thrust_dispersion);
    ctx.sqrt_d0 = detail::psd_sqrt(p_d0);

    // reference fly-through on the truth integrator
    const long total_points = [&] {
        long n = 1;
        for (const auto& leg : ctx.legs) n += leg.steps / leg.stride;
        return n;
    }();
    ctx.grid.reserve(total_points);
    ctx.nom_grid.reserve(total_points);
    ctx.nom_min_range.reserve(total_points);

    const PerturbedField neutral{&sys, &sc};
    Vec3 r = plan.arcs.front().start.position;
    Vec3 v = plan.arcs.front().v0;
    ctx.ref0.head<3>() = r;
    ctx.ref0.tail<3>() = v;

    auto push_point = [&](double t) {
        const auto [d1, d2] = asteroid_states(sys, Epoch{t});
        ctx.grid.push_back(t);
        ctx.nom_grid.push_back(r);
        ctx.nom_min_range.push_back(std::min((r - d1.r).norm(), (r - d2.r).norm()));
    };

    ctx.node_grid.push_back(0);
    push_point(ctx.legs.front().t0.t);
    for (std::size_t j = 0; j < nlegs; ++j) {
        DispersionContext::Leg& leg = ctx.legs[j];
        leg.grid0 = static_cast<int>(ctx.grid.size()) - 1;
        v += leg.dv_node;
        for (long s = 0; s < leg.steps; ++s) {
            const double t = leg.t0.t + s * h;
            detail::rk4_push(neutral, t, r, v, h);
            if (s + 1 == leg.cot_step) {
                leg.ref_cot.head<3>() = r;
                leg.ref_cot.tail<3>() = v;
            }
            if ((s + 1) % leg.stride == 0) push_point(t + h);
        }
        leg.ref_end.head<3>() = r;
        leg.ref_end.tail<3>() = v;
        ctx.node_grid.push_back(static_cast<int>(ctx.grid.size()) - 1);
    }
    return ctx;
}

namespace detail {

struct CompactSample {
    std::vector<double> d2;  // squared deviation per grid point, while alive
    int last_grid = 0;
    double nav_cost = 0.0;
    int guidance_skipped = 0;
    SampleStatus status;
};

inline CompactSample run_sample_core(const DispersionContext& ctx, std::uint64_t index,
                                     SampleRun* capture) {
    const DispersionOptions& opts = ctx.opts;
    const UncertaintyBudget& budget = *ctx.budget;
    const double h = opts.truth_step;
    std::mt19937_64 eng = make_engine(opts.master_seed, index);

    CompactSample out;
    out.d2.assign(ctx.grid.size(), 0.0);

    // fixed draw layout: initial state, gravity offset, initial stochastic
    // accelerations; then per-step process noise, per-cut-off knowledge
    // draws, per-node execution errors, in chronological order
    Vec6 xi;
    for (int i = 0; i < 6; ++i) xi(i) = draw_normal(eng);
    Vec6 x = ctx.ref0 + ctx.sqrt_d0 * xi;

    PerturbedField field{ctx.sys, ctx.sc};
    field.dmu = budget.sigma_mu * draw_normal(eng);
    Vec3 srp_state, res_state;
    for (int i = 0; i < 3; ++i) srp_state(i) = budget.srp_scale.sigma * draw_normal(eng);
    for (int i = 0; i < 3; ++i) res_state(i) = budget.resid_accel.sigma * draw_normal(eng);

    const double f_srp = std::exp(-h / budget.srp_scale.tau);
    const double f_res = std::exp(-h / budget.resid_accel.tau);
    const double q_srp = budget.srp_scale.sigma * std::sqrt(1.0 - f_srp * f_srp);
    const double q_res = budget.resid_accel.sigma * std::sqrt(1.0 - f_res * f_res);

    Vec3 r = x.head<3>();
    Vec3 v = x.tail<3>();

    auto record = [&](int gi) {
        const Vec3 dev = r - ctx.nom_grid[gi];
        out.d2[gi] = dev.squaredNorm();
        out.last_grid = gi;
        if (capture) {
            capture->r_true.push_back(r);
            capture->dispersion.push_back(dev.norm());
        }
    };

    record(0);
    bool alive = true;
    Vec6 est_cot = Vec6::Zero();    // estimated deviation at the cut-off
    Vec6 est_state = Vec6::Zero();  // estimated full state at the cut-off
    const PerturbedField predict{ctx.sys, ctx.sc};  // the ground's model

    for (std::size_t j = 0; j < ctx.legs.size() && alive; ++j) {
        const DispersionContext::Leg& leg = ctx.legs[j];

        // nominal-plus-correction maneuver at the node opening this leg
        if (j > 0) {
            const DispersionContext::Leg& prev = ctx.legs[j - 1];
            Vec3 dv_cmd = leg.dv_node;
            if (prev.has_correction) {
                Vec6 est_node;
                if (opts.est_transport == EstTransport::Stm) {
                    est_node = prev.stm_cot_to_end * est_cot;
                } else {
                    Vec3 er = est_state.head<3>();
                    Vec3 ev = est_state.tail<3>();
                    for (long s = prev.cot_step; s < prev.steps; ++s)
                        rk4_push(predict, prev.t0.t + s * h, er, ev, h);
                    est_node.head<3>() = er - prev.ref_end.head<3>();
                    est_node.tail<3>() = ev - prev.ref_end.tail<3>();
                }
                try {
                    const Vec3 corr = differential_guidance(
                        est_node.head<3>(), est_node.tail<3>(),
                        Stm{prev.stm_node_to_target},
                        guidance_weight(opts.guidance, prev.target_dt));
                    dv_cmd += corr;
                    out.nav_cost += corr.norm();
                    if (capture) capture->corrections.push_back({leg.t0.t, corr});
                } catch (const NumericalError&) {
                    ++out.guidance_skipped;
                }
            }
            v += execute_impulse(dv_cmd, budget.thrust_dispersion, eng);
        }

        for (long s = 0; s < leg.steps; ++s) {
            const double t = leg.t0.t + s * h;
            field.srp_scale = srp_state;
            field.extra_accel = res_state;
            rk4_push(field, t, r, v, h);
            for (int i = 0; i < 3; ++i)
                srp_state(i) = f_srp * srp_state(i) + q_srp * draw_normal(eng);
            for (int i = 0; i < 3; ++i)
                res_state(i) = f_res * res_state(i) + q_res * draw_normal(eng);

            const auto [d1, d2b] = asteroid_states(*ctx.sys, Epoch{t + h});
            const double range1 = (r - d1.r).norm();
            const double range2 = (r - d2b.r).norm();
            if (range1 < opts.collision_radius_d1 || range2 < opts.collision_radius_d2) {
                out.status.outcome = SampleStatus::Outcome::Collided;
                out.status.epoch = Epoch{t + h};
                out.status.leg = static_cast<int>(j);
                out.status.body = range1 < opts.collision_radius_d1 ? Body::D1 : Body::D2;
                alive = false;
            } else if (r.norm() > opts.escape_radius) {
                out.status.outcome = SampleStatus::Outcome::Escaped;
                out.status.epoch = Epoch{t + h};
                out.status.leg = static_cast<int>(j);
                alive = false;
            }

            if (s + 1 == leg.cot_step && alive) {
                // orbit determination emulation: the ground's estimate is the
                // truth plus a draw from the delivered knowledge covariance
                for (int i = 0; i < 6; ++i) xi(i) = draw_normal(eng);
                Vec6 truth;
                truth.head<3>() = r;
                truth.tail<3>() = v;
                const Vec6 noise = leg.knowledge_sqrt * xi;
                est_cot = truth - leg.ref_cot + noise;
                est_state = truth + noise;
            }
            if (!alive) break;
            if ((s + 1) % leg.stride == 0) record(leg.grid0 + static_cast<int>((s + 1) / leg.stride));
        }
    }

    if (alive && opts.loop_final_impulse && ctx.plan->loop)
        v += execute_impulse(ctx.plan->arcs.front().start.dv, budget.thrust_dispersion, eng);

    if (capture) {
        capture->sample_index = index;
        capture->nav_cost = out.nav_cost;
        capture->status = out.status;
        capture->t_grid.assign(ctx.grid.begin(), ctx.grid.begin() + out.last_grid + 1);
    }
    return out;
}

}  // namespace detail

// Single-sample simulation with full capture, mainly for tests and debugging.
inline SampleRun simulate_sample(const DispersionContext& ctx, std::uint64_t index) {
    SampleRun run;
    detail::run_sample_core(ctx, index, &run);
    return run;
}

// Monte Carlo batch. Samples are fully independent given (context, index),
// so they fan out to worker threads; the aggregation pass walks them in
// index order, which makes every statistic independent of the worker count.
inline DispersionResult run_dispersion(const DispersionContext& ctx) {
    const int n = ctx.opts.n_samples;
    if (n < 1) throw ConfigError("run_dispersion: need at least one sample");

    std::vector<detail::CompactSample> outs(n);
    const int workers = std::max(1, ctx.opts.workers);
    std::atomic<int> cursor{0};
    auto work = [&] {
        for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
            try {
                outs[i] = detail::run_sample_core(ctx, static_cast<std::uint64_t>(i), nullptr);
            } catch (const std::exception&) {
                outs[i].status.outcome = SampleStatus::Outcome::Failed;
                outs[i].last_grid = 0;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    DispersionResult res;
    res.n_samples = n;
    res.nav_costs.reserve(n);
    res.statuses.reserve(n);
    int collided = 0, escaped = 0;
    for (int i = 0; i < n; ++i) {
        res.nav_costs.push_back(outs[i].nav_cost);
        res.statuses.push_back(outs[i].status);
        res.guidance_failures += outs[i].guidance_skipped;
        if (outs[i].status.outcome == SampleStatus::Outcome::Collided) ++collided;
        if (outs[i].status.outcome == SampleStatus::Outcome::Escaped) ++escaped;
    }
    res.collision_fraction = double(collided) / n;
    res.escape_fraction = double(escaped) / n;

    // cumulative collision fraction at each node, and the early-stop node
    for (std::size_t k = 1; k < ctx.node_grid.size(); ++k) {
        const double t_node = ctx.grid[ctx.node_grid[k]];
        int cum = 0;
        for (const auto& st : res.statuses)
            if (st.outcome == SampleStatus::Outcome::Collided && st.epoch.t <= t_node + 1e-6)
                ++cum;
        NodeRecord rec;
        rec.node = static_cast<int>(k);
        rec.t = t_node;
        rec.cum_collision_fraction = double(cum) / n;
        res.nodes.push_back(rec);
        if (res.stop_node < 0 && rec.cum_collision_fraction > ctx.opts.stop_collision_fraction)
            res.stop_node = rec.node;
    }

    const int last_grid = res.stop_node < 0 ? static_cast<int>(ctx.grid.size()) - 1
                                            : ctx.node_grid[res.stop_node];
    res.series.reserve(last_grid + 1);
    for (int k = 0; k <= last_grid; ++k) {
        DispersionPoint p;
        p.t = ctx.grid[k];
        p.nom_min_range = ctx.nom_min_range[k];
        p.at_node = false;
        for (int ng : ctx.node_grid)
            if (ng == k) p.at_node = true;
        double sum = 0.0;
        int alive = 0;
        for (int i = 0; i < n; ++i) {
            if (outs[i].status.outcome == SampleStatus::Outcome::Failed) continue;
            if (outs[i].last_grid >= k) {
                sum += outs[i].d2[k];
                ++alive;
            }
        }
        p.alive = alive;
        p.sigma_abs = alive > 0 ? std::sqrt(sum / alive) : 0.0;
        p.rel = p.nom_min_range > 0.0 ? p.sigma_abs / p.nom_min_range : 0.0;
        res.series.push_back(p);
    }
    return res;
}

inline DispersionResult run_dispersion(const SystemModel& sys, const SpacecraftModel& sc,
                                       const TrajectoryPlan& plan,
                                       const KnowledgeTimeline& knowledge,
                                       const UncertaintyBudget& budget,
                                       const DispersionOptions& opts) {
    const DispersionContext ctx =
        build_dispersion_context(sys, sc, plan, knowledge, budget, opts);
    return run_dispersion(ctx);
}

// Empirical distribution of the per-sample navigation cost.
inline std::vector<std::pair<double, double>> nav_cost_cdf(const DispersionResult& res) {
    std::vector<double> costs = res.nav_costs;
    std::sort(costs.begin(), costs.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i)
        cdf.push_back({costs[i], double(i + 1) / costs.size()});
    return cdf;
}

// Nearest-rank percentile of the navigation-cost distribution.
inline double nav_cost_percentile(const DispersionResult& res, double p) {
    if (res.nav_costs.empty()) return 0.0;
    std::vector<double> costs = res.nav_costs;
    std::sort(costs.begin(), costs.end());
    const std::size_t k =
        std::min(costs.size() - 1,
                 static_cast<std::size_t>(std::ceil(p * costs.size())) - (p > 0.0 ? 1 : 0));
    return costs[k];
}

}  // namespace proxops
