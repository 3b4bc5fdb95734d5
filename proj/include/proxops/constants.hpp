#pragma once

#include <numbers>

namespace proxops::constants {

inline constexpr double PI = std::numbers::pi;
inline constexpr double DEG = PI / 180.0;            // degrees -> radians
inline constexpr double ARCSEC = DEG / 3600.0;       // arcseconds -> radians

inline constexpr double GRAV = 6.6743e-11;           // [m^3 kg^-1 s^-2] CODATA 2018
inline constexpr double AU = 1.495978707e11;         // [m]
inline constexpr double C_LIGHT = 299792458.0;       // [m/s]
inline constexpr double SOLAR_FLUX_1AU = 1367.0;     // [W/m^2] solar constant

}  // namespace proxops::constants
