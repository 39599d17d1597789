#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdnuc/core/params.hpp"

namespace qdnuc {

// Environment variable consulted for the config path when none is given.
inline constexpr const char* kConfigEnvVar = "QDNUC_CONFIG";

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  // steps == 1 yields {min}.
  std::vector<double> values() const;
  bool operator==(const SweepAxis&) const = default;
};

struct IntegratorSettings {
  double max_step_us = 0.0;  // 0 selects the step from the spectral bound of H
  double rel_tol = 1e-6;
  bool operator==(const IntegratorSettings&) const = default;
};

struct OutputSettings {
  std::string dir = "out";
  bool plot_script = false;
  bool operator==(const OutputSettings&) const = default;
};

// How the spectrum command builds p(I_z).
//   cooled:    Gaussian with the variance of the cooling optimum at model.b_field
//   variance:  Gaussian with the given I_z variance
//   sigma_mhz: Gaussian whose carrier shift a_c*I_z has this standard deviation
//   delta:     all weight on I_z = iz
struct OverhauserSettings {
  std::string mode = "cooled";
  double variance = 0.0;
  double sigma_mhz = 0.0;
  double iz = 0.0;
  int points = 41;
  double sigma_range = 4.0;
  bool operator==(const OverhauserSettings&) const = default;
};

struct SpectrumSettings {
  OverhauserSettings overhauser;
  std::vector<std::pair<double, double>> slices{{0.0, 0.15}, {0.85, 1.0}};
  double readout_scale = 0.6;
  bool operator==(const SpectrumSettings&) const = default;
};

struct RabiSettings {
  std::vector<double> rabi_values{7.0, 9.0, 12.0};
  std::optional<double> detuning;  // empty: locate the dressed sideband resonance
  int sideband_order = -2;
  bool operator==(const RabiSettings&) const = default;
};

struct ThermometrySettings {
  std::vector<double> variance_targets{100.0};
  double temperature_field = 3.3;
  bool include_infinite_beta = true;
  bool operator==(const ThermometrySettings&) const = default;
};

struct RunConfig {
  ModelParams model;
  DriveSettings drive;
  MagnonParams magnon;
  std::vector<SweepAxis> sweep;
  IntegratorSettings integrator;
  std::uint64_t seed = 1;
  int workers = 1;
  OutputSettings output;
  SpectrumSettings spectrum;
  RabiSettings rabi;
  ThermometrySettings thermometry;

  const SweepAxis* find_axis(const std::string& name) const;
  // Throws ConfigError naming sweep.<name> when the axis is missing.
  const SweepAxis& axis(const std::string& name) const;
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

}  // namespace qdnuc
