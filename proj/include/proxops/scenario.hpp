#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "proxops/config.hpp"
#include "proxops/dispersion.hpp"
#include "proxops/knowledge.hpp"
#include "proxops/plan.hpp"
#include "proxops/schedule.hpp"
#include "proxops/system_model.hpp"
#include "proxops/uncertainty.hpp"

namespace proxops {

// A fully resolved run description: models, plan source, budget, options.
// Everything a command needs is in here, so a run is a pure function of
// (scenario, seed) and the batch front end stays a thin shell.
struct Scenario {
    std::string option = "B";  // "A", "B" or "custom"
    std::string name = "scenario";

    SystemModel system;
    SpacecraftModel spacecraft;
    UncertaintyBudget budget;
    NavCamModel navcam;
    IslModel isl;
    DesignParameters design;
    KnowledgeOptions knowledge;
    DispersionOptions dispersion;

    ScheduleStyle schedule_style = ScheduleStyle::OptionB;
    bool schedule_empty = false;  // run the filter with no observables

    std::vector<NodeSpec> custom_nodes;  // used when option == "custom"

    std::string output_dir = "out";

    std::vector<NodeSpec> make_nodes() const {
        if (option == "A") return reference_nodes_option_a(system, design);
        if (option == "B") return reference_nodes_option_b(system, design);
        return custom_nodes;
    }

    std::string plan_label() const { return option == "custom" ? name : option; }
};

namespace detail {

inline Vec3 parse_pole(const Config& cfg, const std::string& key, const Vec3& fallback) {
    if (!cfg.has(key)) return fallback;
    const auto v = cfg.get_vector(key);
    if (v.size() != 3) throw ConfigError("config key '" + key + "' needs three components");
    return Vec3(v[0], v[1], v[2]).normalized();
}

inline std::vector<double> scaled(std::vector<double> v, double s) {
    for (double& x : v) x *= s;
    return v;
}

// One [node.k] section. A node is located either by sun-south spherical
// coordinates (range/azimuth/elevation), by an explicit inertial position,
// or by keypoint geometry; `repeat = j` copies the inertial position of an
// earlier node, which is how a loop closes.
inline NodeSpec parse_node(const Config& cfg, const SystemModel& sys, int k,
                           const std::vector<NodeSpec>& built) {
    const std::string p = "node." + std::to_string(k) + ".";
    if (!cfg.has(p + "day"))
        throw ConfigError("custom plan: missing key '" + p + "day'");
    NodeSpec n;
    n.epoch = Epoch{cfg.get_double(p + "day") * 86400.0};
    if (cfg.has(p + "split_after_days"))
        n.split_after = days(cfg.get_double(p + "split_after_days"));

    if (cfg.has(p + "repeat")) {
        const long j = cfg.get_long(p + "repeat", -1);
        if (j < 0 || j >= static_cast<long>(built.size()))
            throw ConfigError("custom plan: '" + p + "repeat' must name an earlier node");
        n.position = built[static_cast<std::size_t>(j)].position;
        return n;
    }
    if (cfg.has(p + "keypoint_distance")) {
        const KeyPoint kp = make_keypoint(
            sys, n.epoch, Body::D2, cfg.get_double(p + "keypoint_distance"),
            cfg.get_double(p + "keypoint_phase_deg", 7.0) * constants::DEG,
            cfg.get_double(p + "keypoint_azimuth_deg", 0.0) * constants::DEG);
        n.position = kp.position;
        n.keypoint = kp;
        return n;
    }
    if (cfg.has(p + "x")) {
        n.position = Vec3(cfg.get_double(p + "x"), cfg.get_double(p + "y"),
                          cfg.get_double(p + "z"));
        return n;
    }
    if (cfg.has(p + "range")) {
        const double az = cfg.get_double(p + "azimuth_deg", 0.0) * constants::DEG;
        const double el = cfg.get_double(p + "elevation_deg", 0.0) * constants::DEG;
        const double range = cfg.get_double(p + "range");
        const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                       std::sin(el));
        n.position = sun_south_rotation(sys, n.epoch).transpose() * (range * dir);
        return n;
    }
    throw ConfigError("custom plan: node " + std::to_string(k) +
                      " needs 'range', 'x/y/z', 'keypoint_distance' or 'repeat'");
}

}  // namespace detail

// Builds a Scenario from a parsed config. Option A and B start from their
// reference design parameters; every key is optional on top of those, so a
// scenario file only says what it changes.
inline Scenario load_scenario(const Config& cfg) {
    Scenario s;
    s.option = cfg.get_string("scenario.option", "B");
    if (s.option != "A" && s.option != "B" && s.option != "custom")
        throw ConfigError("scenario.option must be A, B or custom, got '" + s.option + "'");
    s.name = cfg.get_string("scenario.name", s.option == "custom" ? "custom" : s.option);
    s.output_dir = cfg.get_string("scenario.output_dir", "out");

    // system
    SystemModel& sys = s.system;
    sys.mu_sun = cfg.get_double("system.mu_sun", sys.mu_sun);
    sys.m1 = cfg.get_double("system.m1", sys.m1);
    sys.m2 = cfg.get_double("system.m2", sys.m2);
    sys.spin_T1 = cfg.get_double("system.spin_t1_h", sys.spin_T1 / 3600.0) * 3600.0;
    sys.spin_T2 = cfg.get_double("system.spin_t2_h", sys.spin_T2 / 3600.0) * 3600.0;
    sys.separation_d12 = cfg.get_double("system.separation", sys.separation_d12);
    sys.tidally_locked = cfg.get_bool("system.tidally_locked", sys.tidally_locked);
    sys.mutual_phase0 = cfg.get_double("system.mutual_phase0", sys.mutual_phase0);
    sys.pole = detail::parse_pole(cfg, "system.pole", sys.pole);
    sys.helio.a = cfg.get_double("system.helio_a_au", sys.helio.a / constants::AU) *
                  constants::AU;
    sys.helio.e = cfg.get_double("system.helio_e", sys.helio.e);
    sys.helio.inc = cfg.get_double("system.helio_inc_deg", sys.helio.inc / constants::DEG) *
                    constants::DEG;
    sys.helio.period = cfg.get_double("system.helio_period_days",
                                      sys.helio.period / 86400.0) * 86400.0;
    sys.helio.t_perihelion = cfg.get_double("system.helio_t_perihelion_days",
                                            sys.helio.t_perihelion / 86400.0) * 86400.0;

    // spacecraft
    s.spacecraft.mass = cfg.get_double("spacecraft.mass", s.spacecraft.mass);
    s.spacecraft.area = cfg.get_double("spacecraft.area", s.spacecraft.area);
    s.spacecraft.cr = cfg.get_double("spacecraft.cr", s.spacecraft.cr);
    s.spacecraft.validate();

    // uncertainty budget; thrust errors configured as the 3-sigma values
    // they are quoted at, stored as 1-sigma
    UncertaintyBudget& b = s.budget;
    b.sigma_mu = cfg.get_double("budget.sigma_mu", b.sigma_mu);
    b.thrust_knowledge.sigma_mag =
        cfg.get_double("budget.thrust_knowledge_mag_3s", b.thrust_knowledge.sigma_mag * 3.0) /
        3.0;
    b.thrust_knowledge.sigma_dir =
        cfg.get_double("budget.thrust_knowledge_dir_deg_3s",
                       b.thrust_knowledge.sigma_dir * 3.0 / constants::DEG) /
        3.0 * constants::DEG;
    b.thrust_dispersion.sigma_mag =
        cfg.get_double("budget.thrust_dispersion_mag_3s",
                       b.thrust_dispersion.sigma_mag * 3.0) /
        3.0;
    b.thrust_dispersion.sigma_dir =
        cfg.get_double("budget.thrust_dispersion_dir_deg_3s",
                       b.thrust_dispersion.sigma_dir * 3.0 / constants::DEG) /
        3.0 * constants::DEG;
    b.srp_scale.sigma = cfg.get_double("budget.srp_sigma", b.srp_scale.sigma);
    b.srp_scale.tau = cfg.get_double("budget.srp_tau_days", b.srp_scale.tau / 86400.0) *
                      86400.0;
    b.resid_accel.sigma = cfg.get_double("budget.resid_sigma", b.resid_accel.sigma);
    b.resid_accel.tau = cfg.get_double("budget.resid_tau_days", b.resid_accel.tau / 86400.0) *
                        86400.0;
    b.init_sigma_pos = cfg.get_double("budget.init_sigma_pos", b.init_sigma_pos);
    b.init_sigma_vel = cfg.get_double("budget.init_sigma_vel", b.init_sigma_vel);
    b.insertion_dv = cfg.get_double("budget.insertion_dv", b.insertion_dv);
    b.validate();

    // measurement models
    s.navcam.c_r0 = cfg.get_double("navcam.c_r0", s.navcam.c_r0);
    s.navcam.c_r1 = cfg.get_double("navcam.c_r1", s.navcam.c_r1);
    s.navcam.c_th0 = cfg.get_double("navcam.c_th0", s.navcam.c_th0);
    s.navcam.c_th1 = cfg.get_double("navcam.c_th1", s.navcam.c_th1);
    s.navcam.bias_range = cfg.get_double("navcam.bias_range", s.navcam.bias_range);
    s.navcam.bias_angle = cfg.get_double("navcam.bias_angle_arcsec",
                                         s.navcam.bias_angle / constants::ARCSEC) *
                          constants::ARCSEC;
    s.navcam.validate();
    s.isl.sigma_range = cfg.get_double("isl.sigma_range", s.isl.sigma_range);
    s.isl.sigma_rr = cfg.get_double("isl.sigma_rr", s.isl.sigma_rr);
    s.isl.bias_range = cfg.get_double("isl.bias_range", s.isl.bias_range);
    s.isl.bias_rr = cfg.get_double("isl.bias_rr", s.isl.bias_rr);
    s.isl.mothercraft_sunward_range =
        cfg.get_double("isl.mothercraft_sunward_range", s.isl.mothercraft_sunward_range);
    s.isl.validate();

    // trajectory design, on top of the option's reference values
    s.design = s.option == "A" ? design_defaults_option_a() : design_defaults_option_b();
    DesignParameters& d = s.design;
    d.start = Epoch{cfg.get_double("design.start_day", d.start.t / 86400.0) * 86400.0};
    d.kp_distance = cfg.get_double("design.kp_distance", d.kp_distance);
    d.kp_phase = cfg.get_double("design.kp_phase_deg", d.kp_phase / constants::DEG) *
                 constants::DEG;
    d.kp_azimuth = cfg.get_double("design.kp_azimuth_deg", d.kp_azimuth / constants::DEG) *
                   constants::DEG;
    d.wp_range = cfg.get_double("design.wp_range", d.wp_range);
    if (cfg.has("design.wp_ranges")) d.wp_ranges = cfg.get_vector("design.wp_ranges");
    if (cfg.has("design.wp_azimuth_deg"))
        d.wp_azimuth = detail::scaled(cfg.get_vector("design.wp_azimuth_deg"), constants::DEG);
    if (cfg.has("design.wp_elevation_deg"))
        d.wp_elevation =
            detail::scaled(cfg.get_vector("design.wp_elevation_deg"), constants::DEG);
    d.split_days = cfg.get_double("design.split_days", d.split_days);
    d.split_pre_kp_days = cfg.get_double("design.split_pre_kp_days", d.split_pre_kp_days);

    // knowledge run
    s.knowledge.sample_dt = hours(cfg.get_double("knowledge.sample_dt_h",
                                                 s.knowledge.sample_dt / 3600.0));
    s.knowledge.layout.estimate_biases =
        cfg.get_bool("knowledge.estimate_biases", s.knowledge.layout.estimate_biases);

    // dispersion run
    DispersionOptions& o = s.dispersion;
    o.n_samples = static_cast<int>(cfg.get_long("dispersion.n_samples", o.n_samples));
    o.master_seed = static_cast<std::uint64_t>(
        cfg.get_long("dispersion.master_seed", static_cast<long>(o.master_seed)));
    o.workers = static_cast<int>(cfg.get_long("dispersion.workers", o.workers));
    o.truth_step = cfg.get_double("dispersion.truth_step", o.truth_step);
    o.sample_dt = cfg.get_double("dispersion.sample_dt", o.sample_dt);
    o.collision_radius_d1 = cfg.get_double("dispersion.collision_radius_d1",
                                           o.collision_radius_d1);
    o.collision_radius_d2 = cfg.get_double("dispersion.collision_radius_d2",
                                           o.collision_radius_d2);
    o.escape_radius = cfg.get_double("dispersion.escape_radius", o.escape_radius);
    o.stop_collision_fraction = cfg.get_double("dispersion.stop_collision_fraction",
                                               o.stop_collision_fraction);
    o.loop_final_impulse = cfg.get_bool("dispersion.loop_final_impulse",
                                        o.loop_final_impulse);
    const std::string tr = cfg.get_string("dispersion.est_transport", "nonlinear");
    if (tr == "nonlinear")
        o.est_transport = EstTransport::Nonlinear;
    else if (tr == "stm")
        o.est_transport = EstTransport::Stm;
    else
        throw ConfigError("dispersion.est_transport must be nonlinear or stm, got '" + tr +
                          "'");
    const std::string ct = cfg.get_string("dispersion.correction_target", "next_maneuver");
    if (ct == "next_maneuver")
        o.correction_target = CorrectionTarget::NextManeuver;
    else if (ct == "next_node")
        o.correction_target = CorrectionTarget::NextNode;
    else
        throw ConfigError(
            "dispersion.correction_target must be next_maneuver or next_node, got '" + ct +
            "'");
    o.guidance.q = cfg.get_double("dispersion.guidance_q", o.guidance.q);

    // observation schedule
    const std::string style = cfg.get_string(
        "schedule.style", s.option == "A" ? "a" : "b");
    if (style == "a" || style == "A")
        s.schedule_style = ScheduleStyle::OptionA;
    else if (style == "b" || style == "B")
        s.schedule_style = ScheduleStyle::OptionB;
    else if (style == "none")
        s.schedule_empty = true;
    else
        throw ConfigError("schedule.style must be a, b or none, got '" + style + "'");
    if (s.schedule_empty)
        s.schedule_style = s.option == "A" ? ScheduleStyle::OptionA : ScheduleStyle::OptionB;

    // custom node list
    if (s.option == "custom") {
        for (int k = 0;; ++k) {
            if (!cfg.has("node." + std::to_string(k) + ".day")) {
                if (static_cast<int>(s.custom_nodes.size()) != k)
                    throw ConfigError("custom plan: node sections must be numbered 0..n-1");
                break;
            }
            s.custom_nodes.push_back(detail::parse_node(cfg, sys, k, s.custom_nodes));
        }
        if (s.custom_nodes.size() < 2)
            throw ConfigError("custom plan: at least two [node.k] sections required");
    }
    return s;
}

// Schedule for a scenario: the option's observation pattern, or a bare
// timeline with the correct cut-off epochs and no observables at all when
// schedule.style = none (pure covariance growth).
inline MeasurementSchedule make_schedule(const Scenario& s, const TrajectoryPlan& plan) {
    if (!s.schedule_empty) return build_schedule(plan, s.schedule_style);
    MeasurementSchedule sched;
    sched.style = s.schedule_style;
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        ArcSchedule arc;
        arc.leg_index = static_cast<int>(j);
        arc.start = plan.arcs[j].start.epoch;
        arc.end = plan.arcs[j].end_epoch;
        arc.cot = arc.end - hours(49.0);
        if (arc.cot.t < arc.start.t) arc.cot = arc.start;
        sched.arcs.push_back(arc);
    }
    return sched;
}

}  // namespace proxops
