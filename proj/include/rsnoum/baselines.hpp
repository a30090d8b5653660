#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsnoum/gpi_solver.hpp"

namespace rsnoum {

enum class SchemeId { GpiRsNoum, LdmRmNoum, RmOum };

inline constexpr SchemeId kAllSchemes[] = {SchemeId::GpiRsNoum, SchemeId::LdmRmNoum, SchemeId::RmOum};

std::string_view scheme_name(SchemeId id);
/// Accepts the names produced by scheme_name plus the short forms
/// "gpi", "ldm" and "oum".
std::optional<SchemeId> parse_scheme(std::string_view name);

/// Rate-splitting design with the portions pinned to multicast-only: the
/// common stream carries only the multicast message.
SolverReport solve_ldm(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                       SolverState init);

/// Orthogonal unicast/multicast: two half-resource designs, each at full
/// power.
struct OumReport {
  /// Private streams only (common block held at zero), matching 0.5 R_p,j
  /// to the unicast demands. `v` and `shares` are empty.
  SolverReport unicast;
  /// Common block only, matching 0.5 times the smoothed minimum of the
  /// per-user multicast rates to the multicast demand.
  SolverReport multicast;
};

OumReport solve_oum(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                    const SolverState& init);

/// Objective of the OUM unicast phase: sum_j (r_j - 0.5 R_p,j)^2.
double oum_unicast_objective(const Eigen::VectorXcd& f, const QuadFormSet& q, const DemandProfile& demands);
/// Objective of the OUM multicast phase: (r_mc - 0.5 S)^2.
double oum_multicast_objective(const Eigen::VectorXcd& f, const QuadFormSet& q, const DemandProfile& demands,
                               double alpha);

/// KKT pairs (A, B) of the two OUM phases: the negative conjugate gradient
/// of the phase objective is proportional to (A - B) f. Both carry kKktFloor.
std::pair<QuadCombination, QuadCombination> oum_unicast_kkt(const Eigen::VectorXcd& f, const QuadFormSet& q,
                                                            const DemandProfile& demands);
std::pair<QuadCombination, QuadCombination> oum_multicast_kkt(const Eigen::VectorXcd& f, const QuadFormSet& q,
                                                              const DemandProfile& demands, double alpha);

/// Output of one scheme on one design channel.
struct Design {
  SchemeId scheme = SchemeId::GpiRsNoum;
  Eigen::VectorXcd f;       // stacked precoder; OUM: unicast phase
  Eigen::VectorXd shares;   // portions; empty for OUM
  Eigen::VectorXcd f_mc;    // OUM multicast phase, empty otherwise
  int iterations = 0;       // OUM: both phases added
  bool converged = false;   // OUM: both phases
  int escalations = 0;
  double objective = 0.0;   // OUM: unicast plus eta_mc times multicast phase
  std::string failure;
  std::vector<TraceEntry> trace;  // OUM: unicast phase followed by multicast phase
};

Design design_scheme(SchemeId scheme, const QuadFormSet& q, const DemandProfile& demands,
                     const SolverOptions& options, const SolverState& init);

/// Rates a design delivers over the channel held in `realized`.
OfferedRates delivered_rates(const Design& d, const QuadFormSet& realized);

}  // namespace rsnoum
