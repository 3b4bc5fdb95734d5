#pragma once

#include <algorithm>
#include <vector>

#include "proxops/filter.hpp"
#include "proxops/plan.hpp"
#include "proxops/schedule.hpp"

namespace proxops {

// One reported point of the knowledge timeline. Up to the arc's cut-off time
// the two tracks coincide; afterwards the ground track shows what the flight
// dynamics team knew when the next maneuver was commanded, while the
// a-posteriori track folds in the late observables that only benefit the
// following arc.
struct KnowledgeSample {
    Epoch epoch;
    int leg = 0;
    double sigma_pos_ground = 0.0;  // [m]
    double sigma_vel_ground = 0.0;  // [m/s]
    double sigma_pos_post = 0.0;    // [m]
    double sigma_vel_post = 0.0;    // [m/s]
    bool at_cot = false;
    bool at_maneuver = false;
};

// Per-leg knowledge products: the ground covariance frozen at the cut-off
// (what orbit determination can deliver to the maneuver computation) and the
// knowledge standing at the maneuver itself.
struct LegKnowledge {
    int leg_index = 0;
    Epoch cot;
    Mat6 ground_rv_at_cot = Mat6::Zero();
    double sigma_pos_at_node = 0.0;  // ground track, at leg end
    double sigma_vel_at_node = 0.0;
};

struct KnowledgeTimeline {
    std::vector<KnowledgeSample> samples;
    std::vector<LegKnowledge> legs;
};

struct KnowledgeOptions {
    StateLayout layout;
    double sample_dt = hours(1.0);
    PropagationOptions prop;
};

namespace detail {

// Measurement stub with the model sigma evaluated on the nominal state, as
// the filter design would assume it.
inline Measurement knowledge_stub(const ScheduledObservable& obs, const StateVector& nom,
                                  const NavCamModel& navcam, const IslModel& isl) {
    Measurement m;
    m.kind = obs.kind;
    m.epoch = obs.epoch;
    m.is_post_cot = obs.is_post_cot;
    switch (obs.kind) {
        case MeasurementKind::NavCamRange:
            m.sigma(0) = navcam.noise_range(nom.r.norm());
            break;
        case MeasurementKind::NavCamAngles:
            m.sigma(0) = navcam.noise_angle(nom.r.norm());
            m.sigma(1) = m.sigma(0);
            break;
        case MeasurementKind::IslRange:
            m.sigma(0) = isl.sigma_range;
            break;
        case MeasurementKind::IslRangeRate:
            m.sigma(0) = isl.sigma_rr;
            break;
    }
    return m;
}

inline std::vector<double> leg_event_epochs(const ArcSchedule& arc, double sample_dt) {
    std::vector<double> ts;
    ts.push_back(arc.start.t);
    for (double t = arc.start.t + sample_dt; t < arc.end.t - 1e-6; t += sample_dt)
        ts.push_back(t);
    for (const auto& o : arc.observables) ts.push_back(o.epoch.t);
    ts.push_back(arc.cot.t);
    ts.push_back(arc.end.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-6; }),
             ts.end());
    return ts;
}

}  // namespace detail

// Linear covariance analysis along the whole plan. Each leg starts from the
// previous leg's a-posteriori covariance inflated by the execution error of
// the maneuver at the joining node; within the leg the filter processes
// pre-cut-off observables into the ground track, and a second track continues
// through the post-cut-off observables to seed the next leg.
inline KnowledgeTimeline run_knowledge(const SystemModel& sys, const SpacecraftModel& sc,
                                       const TrajectoryPlan& plan,
                                       const MeasurementSchedule& sched,
                                       const UncertaintyBudget& budget,
                                       const NavCamModel& navcam, const IslModel& isl,
                                       const KnowledgeOptions& opts = {}) {
    if (sched.arcs.size() != plan.arcs.size())
        throw ConfigError("run_knowledge: schedule does not match the plan");

    GmParams gm;
    gm.tau_srp = budget.srp_scale.tau;
    gm.tau_res = budget.resid_accel.tau;

    KnowledgeTimeline timeline;
    FilterState fs =
        initial_filter_state(opts.layout, budget, navcam, isl, plan.start_epoch());
    fs = apply_maneuver_knowledge(fs, plan.arcs.front().start.dv, budget);

    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        const Arc& leg = plan.arcs[j];
        const ArcSchedule& arc = sched.arcs[j];

        StateVector nom;
        nom.r = leg.start.position;
        nom.v = leg.v0;
        nom.epoch = leg.start.epoch;

        auto record = [&](const FilterState& ground, const FilterState& post, Epoch t) {
            KnowledgeSample s;
            s.epoch = t;
            s.leg = static_cast<int>(j);
            s.sigma_pos_ground = ground.sigma_pos();
            s.sigma_vel_ground = ground.sigma_vel();
            s.sigma_pos_post = post.sigma_pos();
            s.sigma_vel_post = post.sigma_vel();
            s.at_cot = std::abs(t - arc.cot) < 1e-6;
            s.at_maneuver = std::abs(t - arc.end) < 1e-6;
            timeline.samples.push_back(s);
        };

        auto obs_at = [&](double t) {
            std::vector<const ScheduledObservable*> out;
            for (const auto& o : arc.observables)
                if (std::abs(o.epoch.t - t) < 1e-6) out.push_back(&o);
            return out;
        };

        const std::vector<double> events = detail::leg_event_epochs(arc, opts.sample_dt);
        // cross-leg link sessions can place an observable exactly on the node
        for (const auto* o : obs_at(events.front())) {
            if (o->is_post_cot) continue;
            const Measurement stub = detail::knowledge_stub(*o, nom, navcam, isl);
            fs = schmidt_update(fs, stub, measurement_partials(sys, isl, o->kind, nom));
        }
        record(fs, fs, Epoch{events.front()});

        // shared track up to the cut-off
        std::size_t k = 1;
        for (; k < events.size() && events[k] <= arc.cot.t + 1e-6; ++k) {
            const auto vt = propagate_variational(sys, sc, nom, Epoch{events[k]}, gm, opts.prop);
            fs = time_update(fs, vt, budget);
            nom = vt.state;
            for (const auto* o : obs_at(events[k])) {
                if (o->is_post_cot) continue;
                const Measurement stub = detail::knowledge_stub(*o, nom, navcam, isl);
                fs = schmidt_update(fs, stub, measurement_partials(sys, isl, o->kind, nom));
            }
            record(fs, fs, Epoch{events[k]});
        }

        LegKnowledge lk;
        lk.leg_index = static_cast<int>(j);
        lk.cot = arc.cot;
        lk.ground_rv_at_cot = fs.rv_covariance();

        // fork: ground coasts, a-posteriori keeps absorbing late observables
        FilterState ground = fs;
        FilterState post = fs;
        for (; k < events.size(); ++k) {
            const auto vt = propagate_variational(sys, sc, nom, Epoch{events[k]}, gm, opts.prop);
            ground = time_update(ground, vt, budget);
            post = time_update(post, vt, budget);
            nom = vt.state;
            for (const auto* o : obs_at(events[k])) {
                const Measurement stub = detail::knowledge_stub(*o, nom, navcam, isl);
                post = schmidt_update(post, stub, measurement_partials(sys, isl, o->kind, nom));
            }
            record(ground, post, Epoch{events[k]});
        }

        lk.sigma_pos_at_node = ground.sigma_pos();
        lk.sigma_vel_at_node = ground.sigma_vel();
        timeline.legs.push_back(lk);

        fs = post;
        if (j + 1 < plan.arcs.size())
            fs = apply_maneuver_knowledge(fs, plan.arcs[j + 1].start.dv, budget);
    }
    return timeline;
}

}  // namespace proxops
