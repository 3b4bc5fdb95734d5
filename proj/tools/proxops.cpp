// Batch front end. Every command resolves a scenario (built-in option A/B
// defaults, optionally overlaid by a config file and command-line flags),
// runs one stage of the analysis chain and writes its products to the output
// directory. Exit codes: 0 ok, 2 constraint violation, 3 numerical failure,
// 4 configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "proxops/proxops.hpp"

namespace px = proxops;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    std::string option;
    std::optional<long> seed;
    std::optional<long> samples;
    std::optional<long> workers;
};

// Scenario plus everything derived from it that more than one command needs.
struct Run {
    px::Scenario scen;
    px::Config cfg;
    std::string out;
    px::TrajectoryPlan plan;
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Run setup(const CliArgs& args, bool need_plan) {
    px::Config cfg = args.config_path.empty() ? px::Config{}
                                              : px::Config::load(args.config_path);
    if (!args.option.empty()) cfg.set("scenario.option", args.option, "<cli>");
    if (args.seed) cfg.set("dispersion.master_seed", std::to_string(*args.seed), "<cli>");
    if (args.samples) cfg.set("dispersion.n_samples", std::to_string(*args.samples), "<cli>");
    if (!args.out_dir.empty()) cfg.set("scenario.output_dir", args.out_dir, "<cli>");

    Run run{px::load_scenario(cfg), cfg, "", {}};

    // Worker count is an execution detail: applied directly, never echoed,
    // so the products of a run do not depend on how it was parallelized.
    if (args.workers)
        run.scen.dispersion.workers = static_cast<int>(*args.workers);
    else if (!cfg.has("dispersion.workers"))
        run.scen.dispersion.workers =
            std::max(1u, std::thread::hardware_concurrency());

    run.out = run.scen.output_dir;
    fs::create_directories(run.out);
    px::write_text_file(run.out + "/config_echo.cfg", cfg.echo());
    px::write_schema(run.out + "/schema.txt");

    if (need_plan) {
        const auto nodes = run.scen.make_nodes();
        run.plan = px::build_plan(run.scen.system, run.scen.spacecraft, nodes,
                                  run.scen.plan_label());
    }
    return run;
}

int cmd_design(const CliArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    Run run = setup(args, true);
    px::write_plan_text(run.out + "/plan.txt", run.scen.system, run.plan);
    px::write_trajectory_csv(run.out + "/trajectory.csv", run.scen.system,
                             run.scen.spacecraft, run.plan);
    const px::ConstraintReport rep =
        px::validate_plan(run.scen.system, run.scen.spacecraft, run.plan);
    px::write_constraint_report(run.out + "/constraints.txt", rep);
    std::printf("design %s: %zu legs, total dv %.4f m/s, constraints %s (%.1f s)\n",
                run.plan.option_label.c_str(), run.plan.arcs.size(), run.plan.total_dv,
                rep.passed() ? "pass" : "FAIL", elapsed_s(t0));
    if (!rep.passed()) {
        for (const auto& v : rep.hard_violations) std::fprintf(stderr, "  %s\n", v.c_str());
        return 2;
    }
    return 0;
}

px::KnowledgeTimeline knowledge_stage(const Run& run) {
    const px::MeasurementSchedule sched = px::make_schedule(run.scen, run.plan);
    std::size_t n_obs = 0;
    for (const auto& a : sched.arcs) n_obs += a.observables.size();
    if (n_obs == 0)
        std::fprintf(stderr,
                     "warning: schedule carries no observables; knowledge timeline is pure "
                     "covariance growth\n");
    return px::run_knowledge(run.scen.system, run.scen.spacecraft, run.plan, sched,
                             run.scen.budget, run.scen.navcam, run.scen.isl,
                             run.scen.knowledge);
}

int cmd_knowledge(const CliArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    Run run = setup(args, true);
    const px::KnowledgeTimeline tl = knowledge_stage(run);
    px::write_knowledge_csv(run.out + "/knowledge.csv", tl);
    double pos_lo = 1e99, pos_hi = 0.0, vel_hi = 0.0;
    for (const auto& leg : tl.legs) {
        pos_lo = std::min(pos_lo, leg.sigma_pos_at_node);
        pos_hi = std::max(pos_hi, leg.sigma_pos_at_node);
        vel_hi = std::max(vel_hi, leg.sigma_vel_at_node);
    }
    std::printf("knowledge %s: %zu samples, sigma_pos at nodes [%.1f, %.1f] m, "
                "sigma_vel max %.3f cm/s (%.1f s)\n",
                run.plan.option_label.c_str(), tl.samples.size(), pos_lo, pos_hi,
                vel_hi * 100.0, elapsed_s(t0));
    return 0;
}

int cmd_dispersion(const CliArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    Run run = setup(args, true);
    const px::KnowledgeTimeline tl = knowledge_stage(run);
    px::write_knowledge_csv(run.out + "/knowledge.csv", tl);

    const px::DispersionResult res =
        px::run_dispersion(run.scen.system, run.scen.spacecraft, run.plan, tl,
                           run.scen.budget, run.scen.dispersion);
    px::write_dispersion_csv(run.out + "/dispersion.csv", res);
    px::write_nav_cost_csv(run.out + "/nav_costs.csv", res);

    double peak_rel = 0.0, peak_day = 0.0;
    for (const auto& p : res.series)
        if (p.rel > peak_rel) { peak_rel = p.rel; peak_day = p.t / 86400.0; }

    json summary;
    summary["plan"] = run.plan.option_label;
    summary["n_samples"] = res.n_samples;
    summary["master_seed"] = run.scen.dispersion.master_seed;
    summary["collision_fraction"] = res.collision_fraction;
    summary["escape_fraction"] = res.escape_fraction;
    summary["stop_node"] = res.stop_node;
    summary["guidance_failures"] = res.guidance_failures;
    summary["peak_rel_dispersion"] = peak_rel;
    summary["peak_rel_dispersion_day"] = peak_day;
    summary["nav_cost_mps"] = {{"p50", px::nav_cost_percentile(res, 0.50)},
                               {"p95", px::nav_cost_percentile(res, 0.95)},
                               {"p99", px::nav_cost_percentile(res, 0.99)}};
    summary["total_dv_mps"] = run.plan.total_dv;
    summary["config"] = run.cfg.echo();
    px::write_text_file(run.out + "/summary.json", summary.dump(2) + "\n");

    std::printf("dispersion %s: %d samples, collided %.1f%%, escaped %.1f%%, "
                "stop_node %d, peak rel %.3f @ day %.2f, p95 cost %.3f m/s (%.1f s)\n",
                run.plan.option_label.c_str(), res.n_samples, 100.0 * res.collision_fraction,
                100.0 * res.escape_fraction, res.stop_node, peak_rel, peak_day,
                px::nav_cost_percentile(res, 0.95), elapsed_s(t0));
    return 0;
}

int cmd_validate(const CliArgs& args) {
    Run run = setup(args, true);
    const px::ConstraintReport rep =
        px::validate_plan(run.scen.system, run.scen.spacecraft, run.plan);
    px::write_constraint_report(run.out + "/constraints.txt", rep);
    std::printf("validate %s: %s, %zu hard violations, %zu flags\n",
                run.plan.option_label.c_str(), rep.passed() ? "pass" : "FAIL",
                rep.hard_violations.size(), rep.flags.size());
    for (const auto& v : rep.hard_violations) std::fprintf(stderr, "  %s\n", v.c_str());
    for (const auto& v : rep.flags) std::fprintf(stderr, "  flag: %s\n", v.c_str());
    return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Close-range proximity operations design and navigation analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the shared flags after the subcommand as well

    CliArgs args;
    app.add_option("--config", args.config_path, "scenario config file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", args.out_dir, "output directory (overrides the scenario)");
    app.add_option("--option", args.option, "plan source: A, B or custom")
        ->check(CLI::IsMember({"A", "B", "custom"}));
    app.add_option("--seed", args.seed, "Monte Carlo master seed");
    app.add_option("--samples", args.samples, "Monte Carlo sample count");
    app.add_option("--workers", args.workers, "worker threads (default: all cores)");

    auto* c_design = app.add_subcommand("design", "build the plan, write trajectory products");
    auto* c_knowledge = app.add_subcommand("knowledge", "run the knowledge analysis");
    auto* c_dispersion =
        app.add_subcommand("dispersion", "run the Monte Carlo dispersion analysis");
    auto* c_validate = app.add_subcommand("validate", "re-check plan constraints");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_design->parsed()) return cmd_design(args);
        if (c_knowledge->parsed()) return cmd_knowledge(args);
        if (c_dispersion->parsed()) return cmd_dispersion(args);
        if (c_validate->parsed()) return cmd_validate(args);
    } catch (const px::ConstraintError& e) {
        std::fprintf(stderr, "constraint violation: %s\n", e.what());
        return 2;
    } catch (const px::ScheduleError& e) {
        std::fprintf(stderr, "constraint violation: %s\n", e.what());
        return 2;
    } catch (const px::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const px::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
