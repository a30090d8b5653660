#include "rsnoum/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "rsnoum/metrics.hpp"

namespace rsnoum {

std::string_view csit_name(CsitMode mode) {
  return mode == CsitMode::Perfect ? "perfect" : "statistical";
}

std::optional<CsitMode> parse_csit(std::string_view name) {
  if (name == "perfect") return CsitMode::Perfect;
  if (name == "statistical") return CsitMode::Statistical;
  return std::nullopt;
}

std::string_view sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None:
      return "none";
    case SweepAxis::RicianK:
      return "rician_k";
    case SweepAxis::McDemand:
      return "mc_demand";
  }
  throw std::invalid_argument("sweep_axis_name: unknown axis");
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
  if (name == "none") return SweepAxis::None;
  if (name == "rician_k") return SweepAxis::RicianK;
  if (name == "mc_demand") return SweepAxis::McDemand;
  return std::nullopt;
}

Rng stream_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

DemandProfile default_demands() {
  Eigen::VectorXd uc(8);
  uc << 0.5, 0.5, 1.0, 1.0, 1.5, 2.0, 2.5, 2.5;
  return DemandProfile::with_default_eta(std::move(uc), 1.0);
}

DemandProfile ExperimentPlan::resolved_demands() const {
  DemandProfile d = DemandProfile::with_default_eta(demands.unicast, demands.multicast);
  if (eta_override) d.eta_mc = *eta_override;
  return d;
}

void ExperimentPlan::validate() const {
  config.validate();
  resolved_demands().validate();
  solver.smoothing.validate();
  if (realizations < 1) throw std::invalid_argument("plan: realizations must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("plan: no schemes selected");
  if (csit.empty()) throw std::invalid_argument("plan: no CSIT mode selected");
  if (!fixed_users.empty() && static_cast<int>(fixed_users.size()) != users()) {
    throw std::invalid_argument("plan: fixed user count differs from the demand count");
  }
  for (double x : sweep_values) {
    if (!std::isfinite(x)) throw std::invalid_argument("plan: sweep values must be finite");
  }
  if (sweep != SweepAxis::None && sweep_values.empty()) {
    throw std::invalid_argument("plan: sweep axis set without sweep values");
  }
}

Realization draw_realization(const ExperimentPlan& plan, int index) {
  Realization r;
  r.seed = plan.base_seed + static_cast<std::uint64_t>(index);
  if (plan.fixed_users.empty()) {
    Rng placement = stream_rng(r.seed, Stream::Placement);
    r.users = place_users(plan.config, plan.users(), placement);
  } else {
    r.users = plan.fixed_users;
  }
  r.stats = channel_stats(r.users, plan.config);
  Rng fading = stream_rng(r.seed, Stream::Fading);
  r.samples.reserve(r.stats.size());
  for (const auto& s : r.stats) r.samples.push_back(sample_gain(s, fading));
  r.init_seed = stream_rng(r.seed, Stream::Init)();
  return r;
}

namespace {

std::vector<RunRecord> run_realization(const ExperimentPlan& plan, const DemandProfile& demands, int index) {
  const Realization real = draw_realization(plan, index);
  const QuadFormSet statistical = build_quadforms(real.stats, plan.config);
  const QuadFormSet realized = build_quadforms(realized_stats(real.stats, real.samples), plan.config);
  const int k_users = plan.users();

  SolverOptions options = plan.solver;
  options.record_trace = false;

  std::vector<RunRecord> out;
  for (CsitMode mode : plan.csit) {
    const QuadFormSet& design_q = mode == CsitMode::Perfect ? realized : statistical;
    const SolverState init =
        plan.init == InitMode::Random ? random_state(design_q, real.init_seed) : initial_state(design_q);
    for (SchemeId scheme : plan.schemes) {
      RunRecord rec;
      rec.realization = index;
      rec.seed = real.seed;
      rec.scheme = scheme;
      rec.csit = mode;
      rec.demand_uc = demands.unicast;
      rec.demand_mc = demands.multicast;
      try {
        const Design d = design_scheme(scheme, design_q, demands, options, init);
        const OfferedRates rates = delivered_rates(d, realized);
        rec.offered_uc = rates.unicast;
        rec.offered_mc = rates.multicast;
        rec.common_total = rates.common_total;
        rec.private_uc = scheme == SchemeId::RmOum ? rates.unicast : private_rates(d.f, realized);
        rec.iterations = d.iterations;
        rec.converged = d.converged;
        rec.failure = d.failure;
      } catch (const std::exception& e) {
        rec.offered_uc = Eigen::VectorXd::Zero(k_users);
        rec.private_uc = Eigen::VectorXd::Zero(k_users);
        rec.offered_mc = 0.0;
        rec.failure = e.what();
        rec.converged = false;
      }
      rec.mae = mae(rec.offered_uc, rec.offered_mc, demands);
      out.push_back(std::move(rec));
    }
  }
  return out;
}

auto record_key(const RunRecord& r) {
  return std::make_tuple(r.realization, static_cast<int>(r.scheme), static_cast<int>(r.csit));
}

}  // namespace

std::vector<GroupSummary> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<int, int>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.scheme), static_cast<int>(r.csit)}].push_back(&r);

  std::vector<GroupSummary> out;
  for (const auto& [key, members] : groups) {
    GroupSummary g;
    g.scheme = static_cast<SchemeId>(key.first);
    g.csit = static_cast<CsitMode>(key.second);
    g.count = static_cast<int>(members.size());
    std::vector<double> maes;
    g.mean_offered_uc = Eigen::VectorXd::Zero(members.front()->offered_uc.size());
    double iters = 0.0;
    for (const RunRecord* r : members) {
      maes.push_back(r->mae);
      if (!r->failure.empty()) ++g.failures;
      if (!r->converged) ++g.not_converged;
      g.mean_offered_uc += r->offered_uc;
      g.mean_offered_mc += r->offered_mc;
      iters += r->iterations;
    }
    const double n = static_cast<double>(g.count);
    g.mean_offered_uc /= n;
    g.mean_offered_mc /= n;
    g.mean_iterations = iters / n;
    g.amae = mean(maes);
    g.amae_stderr = standard_error(maes);
    g.p50 = percentile(maes, 50.0);
    g.p95 = percentile(maes, 95.0);
    g.cdf = empirical_cdf(std::move(maes));
    out.push_back(std::move(g));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, int threads) {
  plan.validate();
  const DemandProfile demands = plan.resolved_demands();
  std::vector<std::vector<RunRecord>> per_realization(static_cast<std::size_t>(plan.realizations));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i = next++; i < plan.realizations && !failed; i = next++) {
      try {
        per_realization[static_cast<std::size_t>(i)] = run_realization(plan, demands, i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, plan.realizations);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (auto& batch : per_realization) {
    for (auto& r : batch) result.records.push_back(std::move(r));
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  result.groups = summarize(result.records);
  return result;
}

ExperimentPlan plan_at(const ExperimentPlan& plan, double sweep_value) {
  ExperimentPlan p = plan;
  switch (plan.sweep) {
    case SweepAxis::None:
      break;
    case SweepAxis::RicianK:
      p.config.rician_k = db_to_linear(sweep_value);
      break;
    case SweepAxis::McDemand:
      p.demands.multicast = sweep_value;
      break;
  }
  p.sweep = SweepAxis::None;
  p.sweep_values.clear();
  return p;
}

std::vector<SweepPoint> run_sweep(const ExperimentPlan& plan, int threads) {
  plan.validate();
  std::vector<SweepPoint> out;
  if (plan.sweep == SweepAxis::None) {
    out.push_back({0.0, run_experiment(plan, threads)});
    return out;
  }
  for (double x : plan.sweep_values) out.push_back({x, run_experiment(plan_at(plan, x), threads)});
  return out;
}

}  // namespace rsnoum
