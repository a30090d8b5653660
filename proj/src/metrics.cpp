#include "rsnoum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsnoum {

double mae(const Eigen::VectorXd& offered_uc, double offered_mc, const DemandProfile& demands) {
  if (offered_uc.size() != demands.unicast.size() || offered_uc.size() == 0) {
    throw std::invalid_argument("mae: offered and demanded rate counts differ");
  }
  const double total = (demands.unicast - offered_uc).cwiseAbs().sum() + std::abs(demands.multicast - offered_mc);
  return total / static_cast<double>(offered_uc.size() + 1);
}

double mae(const OfferedRates& offered, const DemandProfile& demands) {
  return mae(offered.unicast, offered.multicast, demands);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile: p must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

std::vector<double> empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace rsnoum
