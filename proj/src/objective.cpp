#include "rsnoum/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace rsnoum {

namespace {

// Residuals smaller than this are treated as exact matches.
constexpr double kResidualFloor = 1e-15;

double floor_residual(double r) { return std::abs(r) < kResidualFloor ? 0.0 : r; }

}  // namespace

void SmoothingParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("SmoothingParams: alpha must be positive");
  if (!(alpha_growth > 1.0)) throw std::invalid_argument("SmoothingParams: alpha_growth must exceed 1");
  if (max_escalations < 0) throw std::invalid_argument("SmoothingParams: max_escalations must be >= 0");
}

double smoothed_min(const Eigen::VectorXd& rates, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("smoothed_min: alpha must be positive");
  if (rates.size() == 0) throw std::invalid_argument("smoothed_min: empty rate vector");
  const double lo = rates.minCoeff();
  const double tail = (-(rates.array() - lo) / alpha).exp().sum();
  return lo - alpha * std::log(tail / static_cast<double>(rates.size()));
}

Eigen::VectorXd softmax_weights(const Eigen::VectorXd& rates, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("softmax_weights: alpha must be positive");
  const double lo = rates.minCoeff();
  Eigen::VectorXd w = (-(rates.array() - lo) / alpha).exp().matrix();
  return w / w.sum();
}

double smoothed_min_common(const Eigen::VectorXcd& f, const QuadFormSet& q, double alpha) {
  return smoothed_min(common_rates(f, q), alpha);
}

Eigen::VectorXd portions(const Eigen::VectorXd& v) {
  const double norm2 = v.squaredNorm();
  if (!(norm2 > 0.0)) throw std::invalid_argument("portions: portion vector must be non-zero");
  return v.array().square().matrix() / norm2;
}

Evaluation evaluate(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                    const DemandProfile& demands, double alpha) {
  const int k_users = q.users();
  if (demands.users() != k_users) throw std::invalid_argument("evaluate: demand count differs from K");
  if (v.size() != k_users + 1) throw std::invalid_argument("evaluate: portion vector must have K+1 entries");
  if (!(f.squaredNorm() > 0.0)) throw std::invalid_argument("evaluate: zero precoder");

  Evaluation e;
  e.quad = q.values(f);
  e.common = common_rates(e.quad);
  e.priv = private_rates(e.quad);
  e.smoothed = smoothed_min(e.common, alpha);
  e.weights = softmax_weights(e.common, alpha);
  e.shares = portions(v);

  e.residual_uc.resize(k_users);
  for (int j = 0; j < k_users; ++j) {
    e.residual_uc(j) = floor_residual(demands.unicast(j) - (e.priv(j) + e.shares(j) * e.smoothed));
  }
  e.residual_mc = floor_residual(demands.multicast - e.shares(k_users) * e.smoothed);
  e.unicast_error = e.residual_uc.squaredNorm();
  e.multicast_error = demands.eta_mc * e.residual_mc * e.residual_mc;
  e.objective = e.unicast_error + e.multicast_error;
  return e;
}

double objective_value(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                       const DemandProfile& demands, double alpha) {
  return evaluate(f, v, q, demands, alpha).objective;
}

double eigenvalue_lambda(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                         const DemandProfile& demands, double alpha) {
  return std::exp(-objective_value(f, v, q, demands, alpha));
}

}  // namespace rsnoum
