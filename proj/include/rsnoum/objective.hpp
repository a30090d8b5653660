#pragma once

#include <Eigen/Dense>

#include "rsnoum/quadforms.hpp"

namespace rsnoum {

/// LogSumExp smoothing of the common-rate minimum.
struct SmoothingParams {
  double alpha = 1e-2;
  double alpha_growth = 10.0;
  int max_escalations = 3;

  void validate() const;
};

/// -alpha * ln( (1/K) sum_i exp(-rates_i / alpha) ), evaluated around the
/// minimum so nothing overflows. Lies in [min, min + alpha ln K].
double smoothed_min(const Eigen::VectorXd& rates, double alpha);

/// Softmax of -rates/alpha; the weights of the smoothed minimum's gradient.
Eigen::VectorXd softmax_weights(const Eigen::VectorXd& rates, double alpha);

double smoothed_min_common(const Eigen::VectorXcd& f, const QuadFormSet& q, double alpha);

/// p_j = v_j^2 / ||v||^2. Throws std::invalid_argument on a zero vector.
Eigen::VectorXd portions(const Eigen::VectorXd& v);

/// Everything the objective and the KKT builders need at one (f, v) point.
struct Evaluation {
  QuadValues quad;
  Eigen::VectorXd common;   // per-user common rate bound, K
  Eigen::VectorXd priv;     // per-user private rate bound, K
  double smoothed = 0.0;    // smoothed minimum of `common`
  Eigen::VectorXd weights;  // softmax weights of `common`, K
  Eigen::VectorXd shares;   // portions of v, K+1
  Eigen::VectorXd residual_uc;  // demand - offered, K
  double residual_mc = 0.0;
  double unicast_error = 0.0;    // sum of squared unicast residuals
  double multicast_error = 0.0;  // eta_mc * residual_mc^2
  double objective = 0.0;
};

Evaluation evaluate(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                    const DemandProfile& demands, double alpha);

/// Rate-matching objective: unicast squared gaps plus eta_mc times the
/// multicast squared gap.
double objective_value(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                       const DemandProfile& demands, double alpha);

/// exp(-objective_value), the eigenvalue of the stacked NEPv.
double eigenvalue_lambda(const Eigen::VectorXcd& f, const Eigen::VectorXd& v, const QuadFormSet& q,
                         const DemandProfile& demands, double alpha);

}  // namespace rsnoum
