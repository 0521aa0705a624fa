#pragma once

// Physical constants (CODATA 2018, SI units).
namespace atip::constants {

inline constexpr double c_light = 2.99792458e8;        // m/s
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double sigma_sb = 5.670374419e-8;     // W/(m^2 K^4)
inline constexpr double pi = 3.14159265358979323846;

}  // namespace atip::constants
