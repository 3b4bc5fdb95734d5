#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "proxops/ephemeris.hpp"
#include "proxops/plan.hpp"
#include "proxops/propagation.hpp"

namespace proxops {

// Hard mission constraints plus advisory flags checked over a dense sampling
// of every leg. Day-side and range limits are hard; the near-infrared
// saturation range only raises a flag.
struct ConstraintConfig {
    double min_arc_duration = hours(48.0);
    double day_side_max_phase = 90.0 * constants::DEG;  // w.r.t. D1
    double kp_distance_min = 2780.0;   // [m]
    double kp_distance_max = 4572.0;   // [m]
    // admissible solar phase bands at a keypoint [rad]
    std::vector<std::pair<double, double>> kp_phase_bands = {
        {0.0, 10.0 * constants::DEG}, {30.0 * constants::DEG, 60.0 * constants::DEG}};
    double min_range_d1 = 400.0;       // [m] collision margin, primary
    double min_range_d2 = 100.0;       // [m] collision margin, secondary
    double nir_saturation_range = 1960.0;  // [m] D1 range below which NIR saturates
    double sample_dt = 1800.0;         // [s] dense check cadence
    double band_tol = 1e-6;            // edge tolerance for band membership
};

struct ArcReport {
    int leg = 0;
    double duration = 0.0;        // [s]
    double min_range_d1 = 0.0;    // [m] over the leg
    double min_range_d2 = 0.0;
    double max_phase_d1 = 0.0;    // [rad]
    bool day_side_ok = true;
    bool duration_ok = true;
    bool range_ok = true;
    bool keypoint_ok = true;      // true when no keypoint present
    double kp_distance = 0.0;     // re-measured at the keypoint, if any
    double kp_phase = 0.0;
    bool nir_flagged = false;     // leg dips inside the NIR saturation range
    double terminal_miss = 0.0;   // [m] propagated end vs plan end position
};

struct ConstraintReport {
    std::vector<ArcReport> arcs;
    std::vector<std::string> hard_violations;
    std::vector<std::string> flags;

    bool passed() const { return hard_violations.empty(); }
};

namespace detail {
inline bool in_bands(double x, const std::vector<std::pair<double, double>>& bands, double tol) {
    return std::any_of(bands.begin(), bands.end(), [&](const auto& b) {
        return x >= b.first - tol && x <= b.second + tol;
    });
}
}  // namespace detail

// Re-propagates every leg from its patched initial conditions and checks the
// geometry along a dense grid. A plan passes only with zero hard violations.
inline ConstraintReport validate_plan(const SystemModel& sys, const SpacecraftModel& sc,
                                      const TrajectoryPlan& plan,
                                      const ConstraintConfig& cfg = {},
                                      const PropagationOptions& prop = {}) {
    ConstraintReport rep;
    for (size_t j = 0; j < plan.arcs.size(); ++j) {
        const Arc& leg = plan.arcs[j];
        ArcReport ar;
        ar.leg = int(j);
        ar.duration = leg.duration();
        ar.duration_ok = ar.duration >= cfg.min_arc_duration - 1e-6;
        if (!ar.duration_ok)
            rep.hard_violations.push_back("leg " + std::to_string(j) + ": duration " +
                                          std::to_string(ar.duration / 3600.0) +
                                          " h below minimum");

        std::vector<Epoch> grid;
        for (double t = leg.start.epoch.t; t < leg.end_epoch.t; t += cfg.sample_dt)
            grid.push_back(Epoch{t});
        grid.push_back(leg.end_epoch);

        ar.min_range_d1 = std::numeric_limits<double>::infinity();
        ar.min_range_d2 = std::numeric_limits<double>::infinity();
        ar.max_phase_d1 = 0.0;

        StateVector s0;
        s0.r = leg.start.position;
        s0.v = leg.v0;
        s0.epoch = leg.start.epoch;
        StateVector send = propagate_sampled(
            NominalField{&sys, &sc}, s0, grid,
            [&](const StateVector& s) {
                const auto [d1, d2] = asteroid_states(sys, s.epoch);
                ar.min_range_d1 = std::min(ar.min_range_d1, (s.r - d1.r).norm());
                ar.min_range_d2 = std::min(ar.min_range_d2, (s.r - d2.r).norm());
                ar.max_phase_d1 = std::max(ar.max_phase_d1, phase_angle(sys, s.epoch, s.r, Body::D1));
            },
            prop);
        ar.terminal_miss = (send.r - leg.end_position).norm();

        ar.day_side_ok = ar.max_phase_d1 <= cfg.day_side_max_phase + cfg.band_tol;
        if (!ar.day_side_ok)
            rep.hard_violations.push_back(
                "leg " + std::to_string(j) + ": leaves the day side (max phase " +
                std::to_string(ar.max_phase_d1 / constants::DEG) + " deg)");

        ar.range_ok = ar.min_range_d1 >= cfg.min_range_d1 && ar.min_range_d2 >= cfg.min_range_d2;
        if (!ar.range_ok)
            rep.hard_violations.push_back("leg " + std::to_string(j) +
                                          ": violates the collision margin (min D1 " +
                                          std::to_string(ar.min_range_d1) + " m, min D2 " +
                                          std::to_string(ar.min_range_d2) + " m)");

        ar.nir_flagged = ar.min_range_d1 < cfg.nir_saturation_range;
        if (ar.nir_flagged)
            rep.flags.push_back("leg " + std::to_string(j) +
                                ": D1 range dips below the NIR saturation limit (" +
                                std::to_string(ar.min_range_d1) + " m)");

        if (leg.keypoint) {
            const KeyPoint& kp = *leg.keypoint;
            const Vec3 rb = body_position(sys, kp.epoch, kp.target);
            ar.kp_distance = (kp.position - rb).norm();
            ar.kp_phase = phase_angle(sys, kp.epoch, kp.position, kp.target);
            const bool dist_ok = ar.kp_distance >= cfg.kp_distance_min - cfg.band_tol &&
                                 ar.kp_distance <= cfg.kp_distance_max + cfg.band_tol;
            const bool phase_ok = detail::in_bands(ar.kp_phase, cfg.kp_phase_bands, cfg.band_tol);
            ar.keypoint_ok = dist_ok && phase_ok;
            if (!ar.keypoint_ok)
                rep.hard_violations.push_back(
                    "leg " + std::to_string(j) + ": keypoint outside admissible bands (distance " +
                    std::to_string(ar.kp_distance) + " m, phase " +
                    std::to_string(ar.kp_phase / constants::DEG) + " deg)");
        }
        rep.arcs.push_back(ar);
    }
    return rep;
}

}  // namespace proxops
