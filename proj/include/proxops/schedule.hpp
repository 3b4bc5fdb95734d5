#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "proxops/epoch.hpp"
#include "proxops/errors.hpp"
#include "proxops/measurements.hpp"
#include "proxops/plan.hpp"

namespace proxops {

// Which per-arc observation rules to apply. The two reference strategies
// differ in how far the radiometric link runs past the commanding cut-off and
// in how many images are taken per arc.
enum class ScheduleStyle { OptionA, OptionB };

// A planned observable: what to measure and when. Values are filled in later
// (by simulation) or never (linear covariance analysis needs only epochs,
// kinds and sigmas).
struct ScheduledObservable {
    MeasurementKind kind = MeasurementKind::NavCamRange;
    Epoch epoch;
    bool is_post_cot = false;
};

// Observation timeline for one commanded leg. The cut-off time (COT) is the
// epoch of the last observable that can still influence the maneuver closing
// the leg: 49 h before it, covering image downlink, ground orbit
// determination and command uplink.
struct ArcSchedule {
    int leg_index = 0;
    Epoch start;
    Epoch end;
    Epoch cot;
    std::vector<ScheduledObservable> observables;  // time-ordered

    int count(MeasurementKind k, bool post) const {
        int n = 0;
        for (const auto& o : observables)
            if (o.kind == k && o.is_post_cot == post) ++n;
        return n;
    }
    // number of distinct imaging epochs (each carries a range and an angle pair)
    int optical_epochs(bool post) const { return count(MeasurementKind::NavCamRange, post); }
};

struct MeasurementSchedule {
    ScheduleStyle style = ScheduleStyle::OptionA;
    std::vector<ArcSchedule> arcs;  // one per plan leg, in leg order
};

namespace detail {

constexpr double kCotLead = hours(49.0);
constexpr double kIslStartLag = hours(6.0);
constexpr double kIslEndMargin = hours(3.0);
constexpr double kIslRangeStep = hours(3.0);
constexpr double kIslRateStep = hours(1.0);

inline void add_optical_pre(ArcSchedule& arc, Epoch w0, Epoch w1, int n) {
    for (int i = 0; i < n; ++i) {
        const Epoch t = w0 + (w1 - w0) * (n > 1 ? double(i) / (n - 1) : 0.0);
        arc.observables.push_back({MeasurementKind::NavCamRange, t, false});
        arc.observables.push_back({MeasurementKind::NavCamAngles, t, false});
    }
}

// post-downlink images sit strictly between the cut-off and the next maneuver
inline void add_optical_post(ArcSchedule& arc, Epoch cot, Epoch end, int n) {
    for (int i = 1; i <= n; ++i) {
        const Epoch t = cot + (end - cot) * double(i) / (n + 1);
        arc.observables.push_back({MeasurementKind::NavCamRange, t, true});
        arc.observables.push_back({MeasurementKind::NavCamAngles, t, true});
    }
}

inline void add_isl(ArcSchedule& arc, Epoch w0, Epoch w1, double step, MeasurementKind kind) {
    for (double dt = 0.0; w0 + dt <= w1 + 1e-9; dt += step) {
        const Epoch t = w0 + dt;
        arc.observables.push_back({kind, t, t > arc.cot});
    }
}

inline void sort_observables(ArcSchedule& arc) {
    std::stable_sort(arc.observables.begin(), arc.observables.end(),
                     [](const ScheduledObservable& a, const ScheduledObservable& b) {
                         if (a.epoch.t != b.epoch.t) return a.epoch.t < b.epoch.t;
                         return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                     });
}

}  // namespace detail

// Builds the per-leg observation timeline for a plan.
//
// Common rules: COT = leg end − 49 h; the radiometric link starts 6 h after
// the start of the pattern arc, with ranges every 3 h and range-rates every
// hour; pre-COT images are evenly spaced up to the COT inclusive.
//
// OptionA style: the link stops 3 h before the COT, and every leg carries
// 7 images, 4 before the COT and 3 after.
//
// OptionB style: the link runs to 3 h before the end of the pattern arc,
// crossing the ballistic mid node of split arcs, and every pattern arc
// carries 12 images, 7 before its legs' cut-offs and 5 after. Across a split
// pair they divide 4+3 on the first leg and 3+2 on the second.
inline MeasurementSchedule build_schedule(const TrajectoryPlan& plan, ScheduleStyle style) {
    MeasurementSchedule sched;
    sched.style = style;

    // group legs into pattern arcs
    std::map<int, std::vector<int>> groups;
    for (int j = 0; j < static_cast<int>(plan.arcs.size()); ++j)
        groups[plan.arcs[j].pattern_arc].push_back(j);

    std::vector<ArcSchedule> per_leg(plan.arcs.size());
    for (int j = 0; j < static_cast<int>(plan.arcs.size()); ++j) {
        const Arc& leg = plan.arcs[j];
        if (leg.duration() < detail::kCotLead + detail::kIslStartLag)
            throw ScheduleError("build_schedule: leg " + std::to_string(j) + " lasts " +
                                std::to_string(leg.duration() / 3600.0) +
                                " h, shorter than the 49 h turnaround plus margins");
        per_leg[j].leg_index = j;
        per_leg[j].start = leg.start.epoch;
        per_leg[j].end = leg.end_epoch;
        per_leg[j].cot = leg.end_epoch - detail::kCotLead;
    }

    for (const auto& [pat, legs] : groups) {
        const Epoch pat_start = per_leg[legs.front()].start;
        const Epoch pat_end = per_leg[legs.back()].end;
        const Epoch isl_start = pat_start + detail::kIslStartLag;

        if (style == ScheduleStyle::OptionA) {
            for (int j : legs) {
                ArcSchedule& arc = per_leg[j];
                const Epoch w0 = std::max(isl_start, arc.start + detail::kIslStartLag);
                const Epoch w1 = arc.cot - detail::kIslEndMargin;
                detail::add_isl(arc, w0, w1, detail::kIslRangeStep, MeasurementKind::IslRange);
                detail::add_isl(arc, w0, w1, detail::kIslRateStep, MeasurementKind::IslRangeRate);
                detail::add_optical_pre(arc, w0, arc.cot, 4);
                detail::add_optical_post(arc, arc.cot, arc.end, 3);
            }
        } else {
            // one link session across the whole pattern arc, split by leg
            const Epoch w1 = pat_end - detail::kIslEndMargin;
            for (double step : {detail::kIslRangeStep, detail::kIslRateStep}) {
                const MeasurementKind kind = step == detail::kIslRangeStep
                                                 ? MeasurementKind::IslRange
                                                 : MeasurementKind::IslRangeRate;
                for (double dt = 0.0; isl_start + dt <= w1 + 1e-9; dt += step) {
                    const Epoch t = isl_start + dt;
                    int owner = legs.front();
                    for (int j : legs)
                        if (t.t >= per_leg[j].start.t) owner = j;
                    per_leg[owner].observables.push_back({kind, t, t > per_leg[owner].cot});
                }
            }
            if (legs.size() == 1) {
                ArcSchedule& arc = per_leg[legs.front()];
                detail::add_optical_pre(arc, isl_start, arc.cot, 7);
                detail::add_optical_post(arc, arc.cot, arc.end, 5);
            } else if (legs.size() == 2) {
                ArcSchedule& first = per_leg[legs[0]];
                ArcSchedule& second = per_leg[legs[1]];
                detail::add_optical_pre(first, isl_start, first.cot, 4);
                detail::add_optical_post(first, first.cot, first.end, 3);
                detail::add_optical_pre(second, second.start, second.cot, 3);
                detail::add_optical_post(second, second.cot, second.end, 2);
            } else {
                throw ScheduleError("build_schedule: pattern arc with " +
                                    std::to_string(legs.size()) +
                                    " legs has no image-distribution rule");
            }
        }
    }

    for (auto& arc : per_leg) detail::sort_observables(arc);
    sched.arcs = std::move(per_leg);
    return sched;
}

}  // namespace proxops
