#include "validate.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>

#include "rsnoum/gpi_solver.hpp"

using namespace rsnoum;

namespace {

struct Instance {
  QuadFormSet q;
  DemandProfile demands;
};

Instance random_instance(int nt_x, int nt_y, int users, Rng& rng) {
  SystemConfig cfg;
  cfg.nt_x = nt_x;
  cfg.nt_y = nt_y;
  const auto stats = channel_stats(place_users(cfg, users, rng), cfg);
  std::uniform_real_distribution<double> demand(0.2, 3.0);
  Eigen::VectorXd uc(users);
  for (int k = 0; k < users; ++k) uc(k) = demand(rng);
  return {build_quadforms(stats, cfg), DemandProfile::with_default_eta(uc, demand(rng))};
}

double rel_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Largest relative mismatch between the KKT-derived gradients and central
// differences of the objective along a few random directions.
double gradient_mismatch(const Instance& in, const SolverState& s, double alpha, Rng& rng) {
  std::normal_distribution<double> normal;
  auto obj = [&](const Eigen::VectorXcd& f, const Eigen::VectorXd& v) {
    return objective_value(f, v, in.q, in.demands, alpha);
  };
  const Evaluation eval = evaluate(s.f, s.v, in.q, in.demands, alpha);
  const Eigen::VectorXcd gf = kkt_gradient_f(build_kkt_f(eval, in.demands, in.q), s.f, in.q);
  const Eigen::VectorXd gv = kkt_gradient_v(build_kkt_v(eval, s.v, in.demands), s.v, eval.smoothed);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::VectorXcd df(s.f.size());
    for (Eigen::Index i = 0; i < df.size(); ++i) df(i) = {normal(rng), normal(rng)};
    Eigen::VectorXd dv(s.v.size());
    for (Eigen::Index i = 0; i < dv.size(); ++i) dv(i) = normal(rng);
    const double fd = (obj(s.f + h * df, s.v + h * dv) - obj(s.f - h * df, s.v - h * dv)) / (2.0 * h);
    double analytic = dv.dot(gv);
    for (Eigen::Index i = 0; i < df.size(); ++i) {
      analytic += gf(i).real() * df(i).real() + gf(i).imag() * df(i).imag();
    }
    worst = std::max(worst, rel_error(fd, analytic));
  }
  return worst;
}

}  // namespace

bool run_validation(std::uint64_t seed, std::ostream& out) {
  Rng rng(seed);
  bool all = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    out << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
    all = all && ok;
  };

  double lambda_gap = 0.0;
  double sandwich_slack = 1e300;
  double portion_gap = 0.0;
  double grad = 0.0;
  double min_eig = 1e300;
  double norm_gap = 0.0;
  double scale_gap = 0.0;
  const double alpha = 1e-2;
  const int sizes[][3] = {{1, 2, 2}, {2, 2, 3}, {3, 3, 4}};
  for (const auto& sz : sizes) {
    const Instance in = random_instance(sz[0], sz[1], sz[2], rng);
    const int k_users = sz[2];
    for (int t = 0; t < 5; ++t) {
      const SolverState s = random_state(in.q, rng());
      const Evaluation eval = evaluate(s.f, s.v, in.q, in.demands, alpha);
      lambda_gap = std::max(lambda_gap, std::abs(std::log(eigenvalue_lambda(s.f, s.v, in.q, in.demands, alpha)) +
                                                 eval.objective));
      const double lo = eval.common.minCoeff();
      sandwich_slack = std::min({sandwich_slack, eval.smoothed - lo, lo + alpha * std::log(k_users) - eval.smoothed});
      portion_gap = std::max(portion_gap, std::abs(eval.shares.sum() - 1.0));
      grad = std::max(grad, gradient_mismatch(in, s, alpha, rng));
      min_eig = std::min({min_eig, build_kkt_f(eval, in.demands, in.q).b_matrix(in.q).min_eigenvalue(),
                          build_kkt_v(eval, s.v, in.demands).e.minCoeff()});
      const SolverState next = gpi_step(s, in.q, in.demands, alpha);
      norm_gap = std::max({norm_gap, std::abs(next.f.norm() - 1.0), std::abs(next.v.norm() - 1.0)});
      scale_gap = std::max(scale_gap, (common_rates(0.3 * s.f, in.q) - eval.common).cwiseAbs().maxCoeff());
    }
  }
  report("lambda equals exp(-objective)", lambda_gap <= 1e-12, lambda_gap);
  report("smoothed minimum within [min, min + alpha ln K]", sandwich_slack >= -1e-9, sandwich_slack);
  report("portions sum to one", portion_gap <= 1e-12, portion_gap);
  report("KKT gradients match central differences", grad <= 1e-4, grad);
  report("B and E positive definite", min_eig > 0.0, min_eig);
  report("iterates stay unit-norm", norm_gap <= 1e-12, norm_gap);
  report("rates are scale invariant", scale_gap <= 1e-12, scale_gap);
  return all;
}
