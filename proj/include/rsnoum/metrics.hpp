#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rsnoum/quadforms.hpp"

namespace rsnoum {

/// Mean absolute error over the K unicast messages and the multicast message.
double mae(const Eigen::VectorXd& offered_uc, double offered_mc, const DemandProfile& demands);
double mae(const OfferedRates& offered, const DemandProfile& demands);

/// Linearly interpolated order statistic at rank h = (n-1) p / 100 of the
/// sorted values. p in [0, 100]; throws on empty input.
double percentile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);
/// Standard error of the mean (sample standard deviation over sqrt(n));
/// zero for fewer than two values.
double standard_error(const std::vector<double>& values);

/// Empirical CDF support: the values sorted ascending. The i-th entry (0-based)
/// has cumulative probability (i+1)/n.
std::vector<double> empirical_cdf(std::vector<double> values);

}  // namespace rsnoum
