#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rsnoum/system_config.hpp"

namespace rsnoum {

using Rng = std::mt19937_64;

/// Position of one ground user as seen from the satellite.
struct UserGeometry {
  double azimuth = 0.0;    // rad, [0, 2pi)
  double off_nadir = 0.0;  // rad, [0, pi/2)
  double distance = 0.0;   // m, >= altitude
};

/// Statistical channel knowledge for one user: LOS array response, average
/// channel power and Rician factor.
struct ChannelStats {
  Eigen::VectorXcd array_response;
  double gamma = 0.0;
  double kappa = 0.0;
};

struct ChannelSample {
  std::complex<double> gain;
};

/// Geometry of a user at ground radius `ground_range` and azimuth `azimuth`
/// on the flat tangent plane below the satellite.
UserGeometry user_at(double ground_range, double azimuth, const SystemConfig& config);

/// Drops `count` users uniformly over the coverage disk.
std::vector<UserGeometry> place_users(const SystemConfig& config, int count, Rng& rng);

/// UPA response, x-major Kronecker ordering: index = nx * nt_y + ny.
Eigen::VectorXcd array_response(const UserGeometry& geom, const SystemConfig& config);

/// Average channel power normalized by the thermal noise power k_B T B.
double link_budget_gamma(const UserGeometry& geom, const SystemConfig& config);

ChannelStats channel_stats(const UserGeometry& geom, const SystemConfig& config);
std::vector<ChannelStats> channel_stats(const std::vector<UserGeometry>& users,
                                        const SystemConfig& config);

/// One Rician draw: Re and Im are independent N(sqrt(kappa*gamma/(2(kappa+1))),
/// gamma/(2(kappa+1))).
ChannelSample sample_gain(const ChannelStats& stats, Rng& rng);

}  // namespace rsnoum
