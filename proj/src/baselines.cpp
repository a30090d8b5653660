#include "rsnoum/baselines.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rsnoum {

namespace {

using PairBuilder = std::function<std::pair<QuadCombination, QuadCombination>(const Eigen::VectorXcd&, double)>;
using PhaseObjective = std::function<double(const Eigen::VectorXcd&, double)>;

// Power iteration f <- normalize(B^{-1} A f) on one reduced phase. A
// stationary point satisfies B^{-1} A f = f, which is what the residual
// measures.
SolverReport run_phase(const QuadFormSet& q, const PairBuilder& build, const PhaseObjective& objective,
                       const SolverOptions& options, Eigen::VectorXcd f, bool smoothed) {
  f.normalize();
  SolverReport report;
  double alpha = options.smoothing.alpha;
  const int levels = smoothed ? options.smoothing.max_escalations : 0;
  int iteration = 0;
  try {
    for (int level = 0; level <= levels; ++level) {
      for (int t = 0; t < options.stop.t_max; ++t) {
        const auto [a, b] = build(f, alpha);
        Eigen::VectorXcd next = BlockDiagonal::from(b, q).solve(BlockDiagonal::from(a, q).apply(f));
        const double norm = next.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalBreakdown("phase update vanished or overflowed");
        next /= norm;
        const double step = (next - f).norm();
        f = std::move(next);
        ++iteration;
        if (options.record_trace) {
          const double obj = objective(f, alpha);
          report.trace.push_back({iteration, step, 0.0, obj, std::exp(-obj), alpha});
        }
        if (step < options.stop.epsilon) {
          report.converged = true;
          break;
        }
      }
      if (report.converged || level == levels) break;
      alpha *= options.smoothing.alpha_growth;
      ++report.escalations;
    }
  } catch (const NumericalBreakdown& e) {
    report.failure = e.what();
    report.converged = false;
  }

  report.iterations = iteration;
  report.alpha_used = alpha;
  report.final_objective = objective(f, alpha);
  try {
    const auto [a, b] = build(f, alpha);
    report.kkt_residual = (BlockDiagonal::from(b, q).solve(BlockDiagonal::from(a, q).apply(f)) - f).norm();
  } catch (const NumericalBreakdown&) {
    report.kkt_residual = std::numeric_limits<double>::infinity();
  }
  report.f = std::move(f);
  return report;
}

Eigen::VectorXcd keep_blocks(const Eigen::VectorXcd& f, int antennas, bool common) {
  Eigen::VectorXcd out = f;
  if (common) {
    out.tail(out.size() - antennas).setZero();
  } else {
    out.head(antennas).setZero();
  }
  return out;
}

}  // namespace

std::string_view scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::GpiRsNoum:
      return "gpi-rs-noum";
    case SchemeId::LdmRmNoum:
      return "ldm-rm-noum";
    case SchemeId::RmOum:
      return "rm-oum";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  if (name == "gpi-rs-noum" || name == "gpi") return SchemeId::GpiRsNoum;
  if (name == "ldm-rm-noum" || name == "ldm") return SchemeId::LdmRmNoum;
  if (name == "rm-oum" || name == "oum") return SchemeId::RmOum;
  return std::nullopt;
}

SolverReport solve_ldm(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                       SolverState init) {
  SolverOptions pinned = options;
  pinned.freeze_v = true;
  init.v = multicast_only_portions(q.users());
  return solve(q, demands, pinned, std::move(init));
}

double oum_unicast_objective(const Eigen::VectorXcd& f, const QuadFormSet& q, const DemandProfile& demands) {
  const Eigen::VectorXd gap = demands.unicast - 0.5 * private_rates(f, q);
  return gap.squaredNorm();
}

double oum_multicast_objective(const Eigen::VectorXcd& f, const QuadFormSet& q, const DemandProfile& demands,
                               double alpha) {
  const double gap = demands.multicast - 0.5 * smoothed_min_common(f, q, alpha);
  return gap * gap;
}

std::pair<QuadCombination, QuadCombination> oum_unicast_kkt(const Eigen::VectorXcd& f, const QuadFormSet& q,
                                                            const DemandProfile& demands) {
  const QuadValues quad = q.values(f);
  const Eigen::VectorXd rp = private_rates(quad);
  QuadCombination a = QuadCombination::zero(q.users());
  QuadCombination b = QuadCombination::zero(q.users());
  for (int j = 0; j < q.users(); ++j) {
    const double target = demands.unicast(j);
    a.add_ap(q, j, target / quad.ap(j));
    a.add_bp(q, j, 0.5 * rp(j) / quad.bp(j));
    b.add_bp(q, j, target / quad.bp(j));
    b.add_ap(q, j, 0.5 * rp(j) / quad.ap(j));
  }
  a.identity.array() += kKktFloor;
  b.identity.array() += kKktFloor;
  return {std::move(a), std::move(b)};
}

std::pair<QuadCombination, QuadCombination> oum_multicast_kkt(const Eigen::VectorXcd& f, const QuadFormSet& q,
                                                              const DemandProfile& demands, double alpha) {
  const QuadValues quad = q.values(f);
  const Eigen::VectorXd rc = common_rates(quad);
  const CommonRateLoads loads = build_LA_LB(quad, softmax_weights(rc, alpha), q);
  const double half_s = 0.5 * smoothed_min(rc, alpha);
  QuadCombination a = QuadCombination::zero(q.users());
  QuadCombination b = QuadCombination::zero(q.users());
  a.add_scaled(loads.la, demands.multicast).add_scaled(loads.lb, half_s);
  b.add_scaled(loads.lb, demands.multicast).add_scaled(loads.la, half_s);
  a.identity.array() += kKktFloor;
  b.identity.array() += kKktFloor;
  return {std::move(a), std::move(b)};
}

OumReport solve_oum(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                    const SolverState& init) {
  demands.validate();
  if (demands.users() != q.users()) throw std::invalid_argument("solve_oum: demand count differs from K");
  if (init.f.size() != q.stacked_dim()) throw std::invalid_argument("solve_oum: initial state has the wrong dimensions");
  const int n = q.antennas();

  Eigen::VectorXcd f_uc = keep_blocks(init.f, n, false);
  if (f_uc.norm() < 1e-12) f_uc = keep_blocks(initial_state(q).f, n, false);
  Eigen::VectorXcd f_mc = keep_blocks(init.f, n, true);
  if (f_mc.norm() < 1e-12) f_mc = keep_blocks(initial_state(q).f, n, true);

  OumReport out;
  out.unicast = run_phase(
      q, [&](const Eigen::VectorXcd& f, double) { return oum_unicast_kkt(f, q, demands); },
      [&](const Eigen::VectorXcd& f, double) { return oum_unicast_objective(f, q, demands); }, options,
      std::move(f_uc), false);
  out.unicast.offered_uc = 0.5 * private_rates(out.unicast.f, q);

  out.multicast = run_phase(
      q, [&](const Eigen::VectorXcd& f, double alpha) { return oum_multicast_kkt(f, q, demands, alpha); },
      [&](const Eigen::VectorXcd& f, double alpha) { return oum_multicast_objective(f, q, demands, alpha); },
      options, std::move(f_mc), true);
  out.multicast.offered_mc = 0.5 * smoothed_min_common(out.multicast.f, q, out.multicast.alpha_used);
  return out;
}

Design design_scheme(SchemeId scheme, const QuadFormSet& q, const DemandProfile& demands,
                     const SolverOptions& options, const SolverState& init) {
  Design d;
  d.scheme = scheme;
  if (scheme == SchemeId::RmOum) {
    OumReport r = solve_oum(q, demands, options, init);
    d.f = std::move(r.unicast.f);
    d.f_mc = std::move(r.multicast.f);
    d.iterations = r.unicast.iterations + r.multicast.iterations;
    d.converged = r.unicast.converged && r.multicast.converged;
    d.escalations = r.multicast.escalations;
    d.objective = r.unicast.final_objective + demands.eta_mc * r.multicast.final_objective;
    d.failure = !r.unicast.failure.empty() ? r.unicast.failure : r.multicast.failure;
    d.trace = std::move(r.unicast.trace);
    const int offset = d.trace.empty() ? 0 : d.trace.back().iteration;
    for (TraceEntry e : r.multicast.trace) {
      e.iteration += offset;
      d.trace.push_back(e);
    }
    return d;
  }
  SolverReport r = scheme == SchemeId::LdmRmNoum ? solve_ldm(q, demands, options, init)
                                                 : solve(q, demands, options, init);
  d.f = std::move(r.f);
  d.shares = std::move(r.shares);
  d.iterations = r.iterations;
  d.converged = r.converged;
  d.escalations = r.escalations;
  d.objective = r.final_objective;
  d.failure = std::move(r.failure);
  d.trace = std::move(r.trace);
  return d;
}

OfferedRates delivered_rates(const Design& d, const QuadFormSet& realized) {
  if (d.scheme != SchemeId::RmOum) return offered_rates(d.f, d.shares, realized);
  OfferedRates out;
  out.unicast = 0.5 * private_rates(d.f, realized);
  out.common_total = common_rates(d.f_mc, realized).minCoeff();
  out.multicast = 0.5 * out.common_total;
  return out;
}

}  // namespace rsnoum
