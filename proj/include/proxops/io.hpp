#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "proxops/constraints.hpp"
#include "proxops/dispersion.hpp"
#include "proxops/ephemeris.hpp"
#include "proxops/knowledge.hpp"
#include "proxops/plan.hpp"

namespace proxops {

// Shortest round-trip decimal form. All numeric output goes through here so
// a run's files are reproducible byte for byte.
inline std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    return f;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f = open_out(path);
    f << text;
}

inline std::string outcome_name(SampleStatus::Outcome o) {
    switch (o) {
        case SampleStatus::Outcome::Completed: return "completed";
        case SampleStatus::Outcome::Collided: return "collided";
        case SampleStatus::Outcome::Escaped: return "escaped";
        default: return "failed";
    }
}

// Node table plus per-leg metadata, meant to be read next to the trajectory
// CSV when judging a design by hand.
inline void write_plan_text(const std::string& path, const SystemModel& sys,
                            const TrajectoryPlan& plan) {
    std::ofstream f = open_out(path);
    f << "plan " << plan.option_label << "\n";
    f << "legs " << plan.arcs.size() << "  loop " << (plan.loop ? "yes" : "no")
      << "  span_days " << g17(plan.span() / 86400.0) << "  total_dv_mps "
      << g17(plan.total_dv) << "\n\n";
    f << "leg  pattern_arc  day        dur_h     kind       dv_mps_x        dv_mps_y"
         "        dv_mps_z        |dv|_mps\n";
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        const Arc& a = plan.arcs[j];
        std::string kind = a.start.zero_magnitude ? "split" : "burn";
        if (j == 0) kind = plan.loop ? "closure" : "start";
        char line[256];
        std::snprintf(line, sizeof(line), "%-4zu %-12d %-10.4f %-9.2f %-10s", j,
                      a.pattern_arc, a.start.epoch.t / 86400.0, a.duration() / 3600.0,
                      kind.c_str());
        f << line << g17(a.start.dv.x()) << "  " << g17(a.start.dv.y()) << "  "
          << g17(a.start.dv.z()) << "  " << g17(a.start.dv.norm()) << "\n";
    }
    f << "\nnode positions (DidymosEclipJ2000, m) and arrival keypoints\n";
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        const Arc& a = plan.arcs[j];
        f << "leg " << j << "  r0 [" << g17(a.start.position.x()) << ", "
          << g17(a.start.position.y()) << ", " << g17(a.start.position.z()) << "]";
        if (a.keypoint) {
            const KeyPoint& kp = *a.keypoint;
            f << "  -> keypoint " << (kp.target == Body::D2 ? "D2" : "D1") << " dist "
              << g17(kp.distance) << " m, phase "
              << g17(phase_angle(sys, a.end_epoch, kp.position, kp.target) /
                     constants::DEG)
              << " deg";
        }
        f << "\n";
    }
}

// Dense fly-through of the whole plan. Leg boundaries appear twice, once
// with the arrival velocity and once with the post-maneuver departure
// velocity.
inline void write_trajectory_csv(const std::string& path, const SystemModel& sys,
                                 const SpacecraftModel& sc, const TrajectoryPlan& plan,
                                 double dt = 1800.0, const PropagationOptions& prop = {}) {
    std::ofstream f = open_out(path);
    f << "epoch_s,day,leg,frame,rx_m,ry_m,rz_m,vx_mps,vy_mps,vz_mps,"
         "range_d1_m,range_d2_m,phase_d1_deg,phase_d2_deg\n";
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        const Arc& leg = plan.arcs[j];
        std::vector<Epoch> grid;
        for (double t = leg.start.epoch.t; t < leg.end_epoch.t; t += dt)
            grid.push_back(Epoch{t});
        grid.push_back(leg.end_epoch);
        StateVector s0;
        s0.r = leg.start.position;
        s0.v = leg.v0;
        s0.epoch = leg.start.epoch;
        propagate_sampled(
            NominalField{&sys, &sc}, s0, grid,
            [&](const StateVector& s) {
                const auto [d1, d2] = asteroid_states(sys, s.epoch);
                f << g17(s.epoch.t) << ',' << g17(s.epoch.t / 86400.0) << ',' << j
                  << ",DidymosEclipJ2000," << g17(s.r.x()) << ',' << g17(s.r.y()) << ','
                  << g17(s.r.z()) << ',' << g17(s.v.x()) << ',' << g17(s.v.y()) << ','
                  << g17(s.v.z()) << ',' << g17((s.r - d1.r).norm()) << ','
                  << g17((s.r - d2.r).norm()) << ','
                  << g17(phase_angle(sys, s.epoch, s.r, Body::D1) / constants::DEG) << ','
                  << g17(phase_angle(sys, s.epoch, s.r, Body::D2) / constants::DEG) << "\n";
            },
            prop);
    }
}

inline void write_knowledge_csv(const std::string& path, const KnowledgeTimeline& tl) {
    std::ofstream f = open_out(path);
    f << "epoch_s,day,leg,sigma_pos_ground_m,sigma_vel_ground_mps,"
         "sigma_pos_post_m,sigma_vel_post_mps,at_cot,at_maneuver\n";
    for (const KnowledgeSample& s : tl.samples)
        f << g17(s.epoch.t) << ',' << g17(s.epoch.t / 86400.0) << ',' << s.leg << ','
          << g17(s.sigma_pos_ground) << ',' << g17(s.sigma_vel_ground) << ','
          << g17(s.sigma_pos_post) << ',' << g17(s.sigma_vel_post) << ','
          << (s.at_cot ? 1 : 0) << ',' << (s.at_maneuver ? 1 : 0) << "\n";
}

inline void write_dispersion_csv(const std::string& path, const DispersionResult& res) {
    std::ofstream f = open_out(path);
    f << "epoch_s,day,sigma_abs_m,rel_sigma_pct,nom_min_range_m,alive,at_node\n";
    for (const DispersionPoint& p : res.series)
        f << g17(p.t) << ',' << g17(p.t / 86400.0) << ',' << g17(p.sigma_abs) << ','
          << g17(100.0 * p.rel) << ',' << g17(p.nom_min_range) << ',' << p.alive << ','
          << (p.at_node ? 1 : 0) << "\n";
}

inline void write_nav_cost_csv(const std::string& path, const DispersionResult& res) {
    std::ofstream f = open_out(path);
    f << "sample,nav_cost_mps,outcome,end_day,end_leg\n";
    for (std::size_t i = 0; i < res.nav_costs.size(); ++i) {
        const SampleStatus& st = res.statuses[i];
        f << i << ',' << g17(res.nav_costs[i]) << ',' << outcome_name(st.outcome) << ','
          << g17(st.epoch.t / 86400.0) << ',' << st.leg << "\n";
    }
}

inline void write_constraint_report(const std::string& path, const ConstraintReport& rep) {
    std::ofstream f = open_out(path);
    f << (rep.passed() ? "PASS" : "FAIL") << "  hard_violations " << rep.hard_violations.size()
      << "  flags " << rep.flags.size() << "\n\n";
    f << "leg  dur_h    min_d1_m   min_d2_m   max_phase_d1_deg  terminal_miss_m\n";
    for (const ArcReport& a : rep.arcs) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-4d %-8.2f %-10.1f %-10.1f %-17.3f %.6f\n", a.leg,
                      a.duration / 3600.0, a.min_range_d1, a.min_range_d2,
                      a.max_phase_d1 / constants::DEG, a.terminal_miss);
        f << line;
    }
    if (!rep.hard_violations.empty()) {
        f << "\nhard violations\n";
        for (const auto& v : rep.hard_violations) f << "  " << v << "\n";
    }
    if (!rep.flags.empty()) {
        f << "\nflags\n";
        for (const auto& v : rep.flags) f << "  " << v << "\n";
    }
}

// Column dictionary for every CSV an output directory can contain.
inline void write_schema(const std::string& path) {
    write_text_file(path,
        "trajectory.csv\n"
        "  epoch_s          mission-elapsed time [s]\n"
        "  day              epoch_s / 86400\n"
        "  leg              plan leg index\n"
        "  frame            coordinate frame of r and v\n"
        "  rx_m,ry_m,rz_m   position [m]\n"
        "  vx_mps..vz_mps   velocity [m/s]\n"
        "  range_d1_m       distance to the primary [m]\n"
        "  range_d2_m       distance to the secondary [m]\n"
        "  phase_d1_deg     Sun-primary-spacecraft angle [deg]\n"
        "  phase_d2_deg     Sun-secondary-spacecraft angle [deg]\n"
        "\n"
        "knowledge.csv\n"
        "  epoch_s, day, leg    as above\n"
        "  sigma_pos_ground_m   1-sigma position knowledge, ground track [m]\n"
        "  sigma_vel_ground_mps 1-sigma velocity knowledge, ground track [m/s]\n"
        "  sigma_pos_post_m     1-sigma position knowledge, a-posteriori track [m]\n"
        "  sigma_vel_post_mps   1-sigma velocity knowledge, a-posteriori track [m/s]\n"
        "  at_cot               1 at an arc's commanding cut-off epoch\n"
        "  at_maneuver          1 at a maneuver node\n"
        "\n"
        "dispersion.csv\n"
        "  epoch_s, day         as above\n"
        "  sigma_abs_m          rms dispersion about the reference [m]\n"
        "  rel_sigma_pct        100 * sigma_abs / nominal min body range\n"
        "  nom_min_range_m      nominal distance to the nearer body [m]\n"
        "  alive                samples still flying at this epoch\n"
        "  at_node              1 at a plan node epoch\n"
        "\n"
        "nav_costs.csv\n"
        "  sample               Monte Carlo sample index\n"
        "  nav_cost_mps         summed correction magnitude [m/s]\n"
        "  outcome              completed | collided | escaped | failed\n"
        "  end_day              epoch the sample stopped [day]\n"
        "  end_leg              leg the sample stopped in (-1: ran to the end)\n");
}

}  // namespace proxops
