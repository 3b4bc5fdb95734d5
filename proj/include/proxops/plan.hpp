#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxops/bvp.hpp"
#include "proxops/frames.hpp"
#include "proxops/keypoint.hpp"
#include "proxops/state.hpp"

namespace proxops {

// Input to plan construction: a patch point the trajectory must pass through.
// If split_after > 0, the outgoing arc is solved whole and then cut at
// epoch + split_after into two legs joined by an exact zero-magnitude node,
// giving long arcs a mid-course command opportunity.
struct NodeSpec {
    Epoch epoch;
    Vec3 position;                      // DidymosEclipJ2000 [m]
    std::optional<KeyPoint> keypoint;   // set if this node is a science keypoint
    double split_after = 0.0;           // [s]
};

// A commanded impulse at a patch point.
struct ManeuverNode {
    Epoch epoch;
    Vec3 position;
    Vec3 dv = Vec3::Zero();   // [m/s]
    bool zero_magnitude = false;  // mid-arc split node: no nominal impulse
};

// One ballistic leg between consecutive command nodes. Split arcs appear as
// two legs sharing one pattern_arc index.
struct Arc {
    ManeuverNode start;
    Epoch end_epoch;
    Vec3 end_position;
    Vec3 v0;  // departure velocity (post-maneuver)
    Vec3 v1;  // arrival velocity
    std::optional<KeyPoint> keypoint;  // keypoint reached at the end of this leg
    int pattern_arc = 0;       // index of the designed arc this leg belongs to
    bool first_leg = true;     // first leg of its pattern arc

    double duration() const { return end_epoch - start.epoch; }
};

struct TrajectoryPlan {
    std::string option_label = "custom";
    std::vector<Arc> arcs;              // ordered legs
    std::vector<double> pattern_days;   // designed arc durations [days]
    bool loop = false;                  // last node position equals the first
    double total_dv = 0.0;              // [m/s] sum of |dv|, closure included

    Epoch start_epoch() const { return arcs.front().start.epoch; }
    Epoch end_epoch() const { return arcs.back().end_epoch; }
    double span() const { return end_epoch() - start_epoch(); }
};

inline double plan_total_dv(const TrajectoryPlan& plan) {
    double sum = 0.0;
    for (const Arc& a : plan.arcs) sum += a.start.dv.norm();
    return sum;
}

// Pre-flight spacing check; returns one message per offending arc.
inline std::vector<std::string> check_node_spacing(const std::vector<NodeSpec>& nodes,
                                                   double min_duration = hours(48.0)) {
    std::vector<std::string> bad;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double dt = nodes[i + 1].epoch - nodes[i].epoch;
        if (dt < min_duration - 1e-6)
            bad.push_back("arc " + std::to_string(i) + ": duration " +
                          std::to_string(dt / 3600.0) + " h below the 48 h turnaround bound");
        else if (dt <= 0.0)
            bad.push_back("arc " + std::to_string(i) + ": non-increasing epochs");
    }
    return bad;
}

// Shooting configuration for plan construction. The terminal tolerance is
// pushed to the millimetre level: every leg of the patched plan seeds later
// re-propagations (reference marches, transition matrices), and the hover
// dynamics amplify a patch-point inconsistency by roughly 4x per leg, so a
// metre-level miss grows to kilometres by the end of a month-long loop.
// Clearance floors reject transfer branches that dive between the bodies.
inline ShootingOptions plan_shooting_defaults() {
    ShootingOptions o;
    o.tol_pos = 1e-3;
    o.clearance_d1 = 1960.0;  // NIR saturation range
    o.clearance_d2 = 1500.0;
    o.prop.rtol = 1e-12;
    return o;
}

// Patch consecutive ballistic arcs through the node list. The node list
// includes the closing node (same position as node 0 for a loop); per-node
// delta-v is the velocity discontinuity between the incoming and outgoing
// legs, and for loops node 0 carries the closure impulse.
inline TrajectoryPlan build_plan(const SystemModel& sys, const SpacecraftModel& sc,
                                 const std::vector<NodeSpec>& nodes,
                                 const std::string& option_label = "custom",
                                 const ShootingOptions& shoot = plan_shooting_defaults()) {
    if (nodes.size() < 2) throw ConstraintError("build_plan: need at least two nodes");
    const auto spacing = check_node_spacing(nodes);
    if (!spacing.empty()) {
        std::string msg = "build_plan: node spacing violations:";
        for (const auto& s : spacing) msg += "\n  " + s;
        throw ConstraintError(msg);
    }

    TrajectoryPlan plan;
    plan.option_label = option_label;
    plan.loop = (nodes.back().position - nodes.front().position).norm() < 1e-6;

    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const NodeSpec& a = nodes[i];
        const NodeSpec& b = nodes[i + 1];
        const ArcSolution sol = solve_arc(sys, sc, a.position, a.epoch, b.position, b.epoch, shoot);
        plan.pattern_days.push_back((b.epoch - a.epoch) / 86400.0);

        Arc leg;
        leg.start.epoch = a.epoch;
        leg.start.position = a.position;
        leg.pattern_arc = int(i);
        leg.first_leg = true;
        leg.v0 = sol.v0;

        if (a.split_after > 0.0) {
            const Epoch t_mid = a.epoch + a.split_after;
            if (t_mid.t >= b.epoch.t - hours(48.0) + 1e-6 || a.split_after < hours(48.0) - 1e-6)
                throw ConstraintError("build_plan: split of arc " + std::to_string(i) +
                                      " leaves a leg below the 48 h turnaround bound");
            StateVector s0;
            s0.r = a.position;
            s0.v = sol.v0;
            s0.epoch = a.epoch;
            const StateVector mid = propagate(sys, sc, s0, t_mid, shoot.prop);

            leg.end_epoch = t_mid;
            leg.end_position = mid.r;
            leg.v1 = mid.v;
            plan.arcs.push_back(leg);

            Arc cont;
            cont.start.epoch = t_mid;
            cont.start.position = mid.r;
            cont.start.dv = Vec3::Zero();  // exact continuation by construction
            cont.start.zero_magnitude = true;
            cont.end_epoch = b.epoch;
            cont.end_position = b.position;
            cont.v0 = mid.v;
            cont.v1 = sol.v1;
            cont.keypoint = b.keypoint;
            cont.pattern_arc = int(i);
            cont.first_leg = false;
            plan.arcs.push_back(cont);
        } else {
            leg.end_epoch = b.epoch;
            leg.end_position = b.position;
            leg.v1 = sol.v1;
            leg.keypoint = b.keypoint;
            plan.arcs.push_back(leg);
        }
    }

    // velocity discontinuities at the command nodes
    for (size_t j = 0; j < plan.arcs.size(); ++j) {
        Arc& leg = plan.arcs[j];
        if (leg.start.zero_magnitude) continue;  // exact zero by construction
        if (j == 0) {
            leg.start.dv = plan.loop ? Vec3(leg.v0 - plan.arcs.back().v1) : Vec3::Zero();
        } else {
            leg.start.dv = leg.v0 - plan.arcs[j - 1].v1;
        }
    }
    plan.total_dv = plan_total_dv(plan);
    return plan;
}

// ---------------------------------------------------------------------------
// Reference trajectory construction
//
// Both reference options alternate far day-side waypoints with science
// keypoints: waypoints are parameterized in the Sun-South frame (range,
// azimuth about +x in the equatorial plane, elevation toward +z) and
// keypoints are built at the configured distance/phase sunward of D2. Arcs
// ending at odd-numbered patch points arrive at keypoints.
// ---------------------------------------------------------------------------

struct DesignParameters {
    Epoch start{0.0};
    double kp_distance = 4000.0;        // [m] inside the science band
    double kp_phase = 7.0 * constants::DEG;
    double kp_azimuth = 0.0;
    double wp_range = 8500.0;           // [m] barycentric
    std::vector<double> wp_ranges;      // [m] per waypoint; empty = wp_range everywhere
    std::vector<double> wp_azimuth;     // [rad] per waypoint; empty = option default
    std::vector<double> wp_elevation;   // [rad] per waypoint; empty = zeros
    double split_days = 3.0;            // long-arc split offset (3+4 or 4+3)
    double split_pre_kp_days = 4.625;   // split offset when the long arc ends at a keypoint
};

// Reference design parameters shipped with the repo. Option A follows the
// tight repeating loop; its waypoints alternate about the sun line at
// mid-band range. Option B's waypoints were tuned against the Monte Carlo:
// the node after each keypoint sits far out along the direction the
// post-passage flow already drifts, which keeps the nominal dip under the
// dispersed cloud and stops tail samples from reaching the bodies right
// after a passage.
inline DesignParameters design_defaults_option_a() {
    return DesignParameters{};
}

inline DesignParameters design_defaults_option_b() {
    DesignParameters p;
    p.kp_distance = 4500.0;
    p.wp_ranges = {9900.0, 15000.0, 13500.0, 9900.0};
    p.wp_azimuth = {32.5 * constants::DEG, -50.0 * constants::DEG, -80.0 * constants::DEG,
                    -10.4 * constants::DEG};
    p.wp_elevation = {-15.0 * constants::DEG, -15.0 * constants::DEG, -15.0 * constants::DEG,
                      -15.0 * constants::DEG};
    return p;
}

namespace detail {
inline Vec3 sun_south_point(const SystemModel& sys, Epoch epoch, double range, double az,
                            double el) {
    const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    return sun_south_rotation(sys, epoch).transpose() * (range * dir);
}

inline NodeSpec waypoint_node(const SystemModel& sys, Epoch epoch, const DesignParameters& p,
                              size_t wp_ordinal, const std::vector<double>& default_az) {
    const double az = (wp_ordinal < p.wp_azimuth.size()) ? p.wp_azimuth[wp_ordinal]
                                                         : default_az[wp_ordinal];
    const double el = (wp_ordinal < p.wp_elevation.size()) ? p.wp_elevation[wp_ordinal] : 0.0;
    const double range = (wp_ordinal < p.wp_ranges.size()) ? p.wp_ranges[wp_ordinal]
                                                           : p.wp_range;
    NodeSpec n;
    n.epoch = epoch;
    n.position = sun_south_point(sys, epoch, range, az, el);
    return n;
}

inline NodeSpec keypoint_node(const SystemModel& sys, Epoch epoch, const DesignParameters& p) {
    NodeSpec n;
    n.epoch = epoch;
    const KeyPoint kp = make_keypoint(sys, epoch, Body::D2, p.kp_distance, p.kp_phase,
                                      p.kp_azimuth);
    n.position = kp.position;
    n.keypoint = kp;
    return n;
}
}  // namespace detail

// Option A: 8-point loop, 3-4 day pattern repeated four times (28 days).
// Waypoints at even patch points, keypoints reached by every odd arc.
inline std::vector<NodeSpec> reference_nodes_option_a(const SystemModel& sys,
                                                      const DesignParameters& p = {}) {
    const std::vector<double> day = {0, 3, 7, 10, 14, 17, 21, 24, 28};
    const std::vector<double> default_az = {25.0 * constants::DEG, -25.0 * constants::DEG,
                                            25.0 * constants::DEG, -25.0 * constants::DEG,
                                            25.0 * constants::DEG};
    std::vector<NodeSpec> nodes;
    size_t wp = 0;
    for (size_t i = 0; i < day.size(); ++i) {
        const Epoch ep = p.start + days(day[i]);
        if (i % 2 == 0) {
            // closing node (i == 8) repeats waypoint 0 at the same inertial position
            if (i + 1 == day.size()) {
                NodeSpec n;
                n.epoch = ep;
                n.position = nodes.front().position;
                nodes.push_back(n);
            } else {
                nodes.push_back(detail::waypoint_node(sys, ep, p, wp++, default_az));
            }
        } else {
            nodes.push_back(detail::keypoint_node(sys, ep, p));
        }
    }
    return nodes;
}

// Option B: 6-point loop with the (7, 4, 7, 7, 3, 7) day pattern (35 days),
// keypoint passages halved relative to Option A. Seven-day arcs are split
// into two legs joined by a zero-magnitude node; see split_days and
// split_pre_kp_days for where the cut lands.
inline std::vector<NodeSpec> reference_nodes_option_b(const SystemModel& sys,
                                                      const DesignParameters& p =
                                                          design_defaults_option_b()) {
    const std::vector<double> day = {0, 7, 11, 18, 25, 28, 35};
    const std::vector<bool> is_kp = {false, true, false, true, false, false, false};
    const std::vector<double> default_az = {32.5 * constants::DEG, -50.0 * constants::DEG,
                                            -80.0 * constants::DEG, -10.4 * constants::DEG};
    std::vector<NodeSpec> nodes;
    size_t wp = 0;
    for (size_t i = 0; i < day.size(); ++i) {
        const Epoch ep = p.start + days(day[i]);
        if (i + 1 == day.size()) {
            NodeSpec n;
            n.epoch = ep;
            n.position = nodes.front().position;
            nodes.push_back(n);
        } else if (is_kp[i]) {
            nodes.push_back(detail::keypoint_node(sys, ep, p));
        } else {
            nodes.push_back(detail::waypoint_node(sys, ep, p, wp++, default_az));
        }
        // Split every 7-day arc for a mid-course command opportunity. Arcs
        // that end at a keypoint are cut late: the mid node then fires with a
        // knowledge cut-off only ~2 days before the passage, which bounds the
        // unobserved stochastic-acceleration drift carried into it. Stray
        // position at a passage is what the tidal field converts into
        // velocity error downstream, so this is the cheapest place to fight.
        if (i + 1 < day.size() && day[i + 1] - day[i] > 4.0 + 1e-9)
            nodes.back().split_after =
                days(is_kp[i + 1] ? p.split_pre_kp_days : p.split_days);
    }
    return nodes;
}

}  // namespace proxops
