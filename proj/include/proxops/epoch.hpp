#pragma once

#include <compare>

namespace proxops {

// Mission-elapsed time in seconds past the scenario reference epoch.
// Wrapped in a struct so epochs and durations do not mix silently.
struct Epoch {
    double t = 0.0;  // [s]

    constexpr auto operator<=>(const Epoch&) const = default;

    constexpr Epoch operator+(double dt) const { return Epoch{t + dt}; }
    constexpr Epoch operator-(double dt) const { return Epoch{t - dt}; }
    constexpr double operator-(const Epoch& other) const { return t - other.t; }
    constexpr Epoch& operator+=(double dt) { t += dt; return *this; }
};

constexpr double seconds(double s) { return s; }
constexpr double minutes(double m) { return m * 60.0; }
constexpr double hours(double h) { return h * 3600.0; }
constexpr double days(double d) { return d * 86400.0; }

}  // namespace proxops
