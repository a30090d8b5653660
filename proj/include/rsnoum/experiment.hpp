#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsnoum/baselines.hpp"

namespace rsnoum {

enum class CsitMode { Perfect, Statistical };

std::string_view csit_name(CsitMode mode);
std::optional<CsitMode> parse_csit(std::string_view name);

enum class InitMode { Deterministic, Random };

enum class SweepAxis { None, RicianK, McDemand };

std::string_view sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

/// Independent random streams of one realization.
enum class Stream : std::uint32_t { Placement = 0, Fading = 1, Init = 2 };

/// Generator for `stream` of the realization seeded with `seed`.
Rng stream_rng(std::uint64_t seed, Stream stream);

/// Unicast demands [0.5, 0.5, 1, 1, 1.5, 2, 2.5, 2.5] and multicast demand 1.
DemandProfile default_demands();

struct ExperimentPlan {
  SystemConfig config;
  DemandProfile demands = default_demands();
  /// Explicit eta_mc; when empty, eta_mc follows the demands (mean unicast
  /// demand over multicast demand) and is recomputed along a demand sweep.
  std::optional<double> eta_override;
  std::vector<SchemeId> schemes{SchemeId::GpiRsNoum, SchemeId::LdmRmNoum, SchemeId::RmOum};
  std::vector<CsitMode> csit{CsitMode::Perfect, CsitMode::Statistical};
  int realizations = 200;
  std::uint64_t base_seed = 1;
  SolverOptions solver;
  InitMode init = InitMode::Deterministic;
  /// When non-empty, every realization uses these users instead of a random
  /// drop; fading is still drawn per realization.
  std::vector<UserGeometry> fixed_users;
  SweepAxis sweep = SweepAxis::None;
  std::vector<double> sweep_values;  // kappa in dB, or multicast demand in bps/Hz

  int users() const { return demands.users(); }
  /// Demands with eta_mc resolved.
  DemandProfile resolved_demands() const;
  void validate() const;
};

/// One scheme under one CSIT mode on one realization.
struct RunRecord {
  int realization = 0;
  std::uint64_t seed = 0;
  SchemeId scheme = SchemeId::GpiRsNoum;
  CsitMode csit = CsitMode::Statistical;
  Eigen::VectorXd demand_uc;
  double demand_mc = 0.0;
  Eigen::VectorXd offered_uc;
  double offered_mc = 0.0;
  Eigen::VectorXd private_uc;  // private-stream part of offered_uc
  double common_total = 0.0;   // common rate before splitting
  double mae = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string failure;
};

struct GroupSummary {
  SchemeId scheme = SchemeId::GpiRsNoum;
  CsitMode csit = CsitMode::Statistical;
  int count = 0;
  int failures = 0;        // numerical breakdowns
  int not_converged = 0;
  double amae = 0.0;
  double amae_stderr = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::vector<double> cdf;  // sorted MAEs
  Eigen::VectorXd mean_offered_uc;
  double mean_offered_mc = 0.0;
  double mean_iterations = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // sorted by (realization, scheme, csit)
  std::vector<GroupSummary> groups;
};

/// Runs every realization of `plan`; records are independent of `threads`.
ExperimentResult run_experiment(const ExperimentPlan& plan, int threads = 1);

/// Plan with one sweep value applied.
ExperimentPlan plan_at(const ExperimentPlan& plan, double sweep_value);

struct SweepPoint {
  double value = 0.0;
  ExperimentResult result;
};

std::vector<SweepPoint> run_sweep(const ExperimentPlan& plan, int threads = 1);

std::vector<GroupSummary> summarize(const std::vector<RunRecord>& records);

/// Channel of one realization: statistics, fading draws and the solver
/// start. Shared by every scheme and CSIT mode of that realization.
struct Realization {
  std::uint64_t seed = 0;
  std::vector<UserGeometry> users;
  std::vector<ChannelStats> stats;
  std::vector<ChannelSample> samples;
  std::uint64_t init_seed = 0;
};

Realization draw_realization(const ExperimentPlan& plan, int index);

}  // namespace rsnoum
