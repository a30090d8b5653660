#include "rsnoum/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsnoum {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("SystemConfig: ") + name + " must be positive and finite");
  }
}

}  // namespace

void SystemConfig::validate() const {
  if (nt_x < 1 || nt_y < 1) throw std::invalid_argument("SystemConfig: antenna counts must be >= 1");
  require_positive(altitude, "altitude");
  require_positive(coverage_radius, "coverage_radius");
  require_positive(carrier_freq, "carrier_freq");
  require_positive(bandwidth, "bandwidth");
  require_positive(tx_gain, "tx_gain");
  require_positive(rx_gain, "rx_gain");
  require_positive(sys_noise_temp, "sys_noise_temp");
  require_positive(noise_var, "noise_var");
  require_positive(tx_power, "tx_power");
  // kappa = 0 is Rayleigh fading and still meaningful.
  if (!(rician_k >= 0.0) || !std::isfinite(rician_k)) {
    throw std::invalid_argument("SystemConfig: rician_k must be non-negative and finite");
  }
}

UserGeometry user_at(double ground_range, double azimuth, const SystemConfig& config) {
  UserGeometry g;
  g.azimuth = azimuth;
  g.distance = std::hypot(config.altitude, ground_range);
  g.off_nadir = std::atan(ground_range / config.altitude);
  return g;
}

std::vector<UserGeometry> place_users(const SystemConfig& config, int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("place_users: count must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<UserGeometry> users;
  users.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    // sqrt of a uniform draw gives a uniform density over the disk area
    const double r = config.coverage_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * kPi * unit(rng);
    users.push_back(user_at(r, theta, config));
  }
  return users;
}

Eigen::VectorXcd array_response(const UserGeometry& geom, const SystemConfig& config) {
  const double s = std::sin(geom.off_nadir);
  const double phase_x = -kPi * s * std::cos(geom.azimuth);
  const double phase_y = -kPi * s * std::sin(geom.azimuth);
  Eigen::VectorXcd a(config.antennas());
  for (int nx = 0; nx < config.nt_x; ++nx) {
    for (int ny = 0; ny < config.nt_y; ++ny) {
      a(nx * config.nt_y + ny) = std::polar(1.0, phase_x * nx + phase_y * ny);
    }
  }
  return a;
}

double link_budget_gamma(const UserGeometry& geom, const SystemConfig& config) {
  const double spreading = 4.0 * kPi * config.carrier_freq * geom.distance / kSpeedOfLight;
  const double thermal = kBoltzmann * config.sys_noise_temp * config.bandwidth;
  return config.tx_gain * config.rx_gain / (spreading * spreading * thermal);
}

ChannelStats channel_stats(const UserGeometry& geom, const SystemConfig& config) {
  return ChannelStats{array_response(geom, config), link_budget_gamma(geom, config), config.rician_k};
}

std::vector<ChannelStats> channel_stats(const std::vector<UserGeometry>& users,
                                        const SystemConfig& config) {
  std::vector<ChannelStats> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(channel_stats(u, config));
  return out;
}

ChannelSample sample_gain(const ChannelStats& stats, Rng& rng) {
  const double denom = 2.0 * (stats.kappa + 1.0);
  const double mean = std::sqrt(stats.kappa * stats.gamma / denom);
  const double sd = std::sqrt(stats.gamma / denom);
  std::normal_distribution<double> re(mean, sd);
  std::normal_distribution<double> im(mean, sd);
  const double x = re(rng);
  const double y = im(rng);
  return ChannelSample{{x, y}};
}

}  // namespace rsnoum
