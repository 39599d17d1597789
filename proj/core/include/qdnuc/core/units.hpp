#pragma once

#include <numbers>

// Boundary convention: frequencies and rates in MHz (linear), times in us,
// fields in T, temperatures in mK. Code that needs angular frequency
// multiplies by kTwoPi explicitly.
namespace qdnuc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PhysicalConstants {
  // h / k_B expressed as mK per MHz.
  static constexpr double planck_over_boltzmann = 6.62607015e-34 * 1e6 / 1.380649e-23 * 1e3;
};

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace qdnuc
