#pragma once

#include <cmath>

namespace rsnoum {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kPi = 3.14159265358979323846;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Physical constants of one satellite scenario. Every field is linear-scale;
/// dB quantities are converted when the configuration is loaded.
struct SystemConfig {
  int nt_x = 6;
  int nt_y = 6;
  double altitude = 600e3;         // m
  double coverage_radius = 120e3;  // m
  double carrier_freq = 20e9;      // Hz
  double bandwidth = 10e6;         // Hz
  double tx_gain = db_to_linear(6.0);
  double rx_gain = db_to_linear(25.0);
  double sys_noise_temp = 150.0;  // K
  double noise_var = 1.0;
  double tx_power = 50.0;  // W
  double rician_k = db_to_linear(12.0);

  int antennas() const { return nt_x * nt_y; }

  /// sigma_n^2 / P, the identity loading of every quadratic form.
  double noise_scale() const { return noise_var / tx_power; }

  /// Throws std::invalid_argument when any field is non-positive or non-finite.
  void validate() const;
};

}  // namespace rsnoum
