#include "rsnoum/gpi_solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rsnoum {

SolverState initial_state(const QuadFormSet& q) {
  const int n = q.antennas();
  const int k_users = q.users();
  SolverState s;
  s.f.resize(q.stacked_dim());
  Eigen::VectorXcd common = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < k_users; ++k) common += q.responses().col(k).normalized();
  // Responses can cancel for symmetric drops; fall back to the first one.
  if (common.norm() < 1e-9) common = q.responses().col(0);
  stream_block(s.f, n, 0) = common.normalized();
  for (int k = 0; k < k_users; ++k) stream_block(s.f, n, k + 1) = q.responses().col(k).normalized();
  s.f.normalize();
  s.v = Eigen::VectorXd::Ones(k_users + 1).normalized();
  return s;
}

SolverState random_state(const QuadFormSet& q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SolverState s;
  s.f.resize(q.stacked_dim());
  for (Eigen::Index i = 0; i < s.f.size(); ++i) s.f(i) = {normal(rng), normal(rng)};
  s.f.normalize();
  s.v.resize(q.users() + 1);
  for (Eigen::Index i = 0; i < s.v.size(); ++i) s.v(i) = std::abs(normal(rng)) + 1e-3;
  s.v.normalize();
  return s;
}

Eigen::VectorXd multicast_only_portions(int users) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(users + 1);
  v(users) = 1.0;
  return v;
}

SolverState gpi_step(const SolverState& state, const QuadFormSet& q, const DemandProfile& demands,
                     double alpha, Prefactors prefactors, bool freeze_v) {
  const Evaluation eval = evaluate(state.f, state.v, q, demands, alpha);

  const KktF kf = build_kkt_f(eval, demands, q, prefactors);
  Eigen::VectorXcd f_next = kf.b_matrix(q).solve(kf.a_matrix(q).apply(state.f));
  const double f_norm = f_next.norm();
  if (!(f_norm > 0.0) || !std::isfinite(f_norm)) {
    throw NumericalBreakdown("precoder update vanished or overflowed");
  }
  f_next /= f_norm;

  Eigen::VectorXd v_next = state.v;
  if (!freeze_v) {
    const KktV kv = build_kkt_v(eval, state.v, demands, prefactors);
    v_next = kv.d_diagonal().cwiseProduct(state.v).cwiseQuotient(kv.e_diagonal());
    const double v_norm = v_next.norm();
    if (!(v_norm > 0.0) || !std::isfinite(v_norm)) {
      throw NumericalBreakdown("portion update vanished or overflowed");
    }
    v_next /= v_norm;
  }

  SolverState next;
  next.iteration = state.iteration + 1;
  next.residual_f = (f_next - state.f).norm();
  next.residual_v = (v_next - state.v).norm();
  next.f = std::move(f_next);
  next.v = std::move(v_next);
  return next;
}

SolverReport solve(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                   SolverState init) {
  options.smoothing.validate();
  demands.validate();
  if (demands.users() != q.users()) throw std::invalid_argument("solve: demand count differs from K");
  if (options.stop.t_max < 1 || !(options.stop.epsilon > 0.0)) {
    throw std::invalid_argument("solve: need t_max >= 1 and epsilon > 0");
  }
  if (init.f.size() != q.stacked_dim() || init.v.size() != q.users() + 1) {
    throw std::invalid_argument("solve: initial state has the wrong dimensions");
  }

  SolverState state = std::move(init);
  state.f.normalize();
  state.v.normalize();
  state.iteration = 0;

  SolverReport report;
  double alpha = options.smoothing.alpha;
  try {
    for (int level = 0; level <= options.smoothing.max_escalations; ++level) {
      for (int t = 0; t < options.stop.t_max; ++t) {
        if (options.certify_pd) {
          const Evaluation eval = evaluate(state.f, state.v, q, demands, alpha);
          report.min_eig_b.push_back(build_kkt_f(eval, demands, q).b_matrix(q).min_eigenvalue());
          report.min_eig_e.push_back(build_kkt_v(eval, state.v, demands).e.minCoeff());
        }
        state = gpi_step(state, q, demands, alpha, options.prefactors, options.freeze_v);
        if (options.record_trace) {
          const double obj = objective_value(state.f, state.v, q, demands, alpha);
          report.trace.push_back({state.iteration, state.residual_f, state.residual_v, obj, std::exp(-obj), alpha});
        }
        if (state.residual_f < options.stop.epsilon && state.residual_v < options.stop.epsilon) {
          report.converged = true;
          break;
        }
      }
      if (report.converged || level == options.smoothing.max_escalations) break;
      alpha *= options.smoothing.alpha_growth;
      ++report.escalations;
    }
  } catch (const NumericalBreakdown& e) {
    report.failure = e.what();
    report.converged = false;
  }

  const Evaluation eval = evaluate(state.f, state.v, q, demands, alpha);
  report.iterations = state.iteration;
  report.alpha_used = alpha;
  report.final_objective = eval.objective;
  try {
    report.kkt_residual = kkt_residual(state.f, state.v, q, demands, alpha, options.freeze_v);
  } catch (const NumericalBreakdown&) {
    report.kkt_residual = std::numeric_limits<double>::infinity();
  }
  report.shares = eval.shares;
  report.offered_uc = eval.priv + eval.shares.head(q.users()) * eval.smoothed;
  report.offered_mc = eval.shares(q.users()) * eval.smoothed;
  report.f = std::move(state.f);
  report.v = std::move(state.v);
  return report;
}

}  // namespace rsnoum
