#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsnoum/kkt.hpp"

namespace rsnoum {

/// Iterate of the power iteration. Both blocks are unit-norm after every
/// update.
struct SolverState {
  Eigen::VectorXcd f;  // stacked precoder [f_c; f_1; ...; f_K]
  Eigen::VectorXd v;   // portion vector, K+1
  int iteration = 0;
  double residual_f = 0.0;
  double residual_v = 0.0;
};

struct TraceEntry {
  int iteration = 0;
  double residual_f = 0.0;
  double residual_v = 0.0;
  double objective = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
};

struct StopRule {
  double epsilon = 1e-4;
  int t_max = 1000;
};

struct SolverOptions {
  SmoothingParams smoothing;
  StopRule stop;
  Prefactors prefactors = Prefactors::Dropped;
  bool freeze_v = false;     // LDM: portions pinned to the initial v
  bool record_trace = true;
  /// Records min eigenvalues of B and E at every iteration (costly).
  bool certify_pd = false;
};

struct SolverReport {
  bool converged = false;
  int iterations = 0;  // total over all smoothing levels
  int escalations = 0;
  double alpha_used = 0.0;
  double final_objective = 0.0;
  double kkt_residual = 0.0;
  Eigen::VectorXcd f;
  Eigen::VectorXd v;
  Eigen::VectorXd shares;       // portions of v
  Eigen::VectorXd offered_uc;   // design-model unicast rates (smoothed common)
  double offered_mc = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<double> min_eig_b;  // filled when certify_pd is set
  std::vector<double> min_eig_e;
  std::string failure;  // numerical breakdown message, empty otherwise
};

/// Deterministic start: f_c along the sum of responses, f_k along a_k, each
/// block unit-norm, then the whole stack normalized; v all-ones normalized.
SolverState initial_state(const QuadFormSet& q);

/// Random start (complex Gaussian f, |Gaussian| v), normalized.
SolverState random_state(const QuadFormSet& q, std::uint64_t seed);

/// v = [0, ..., 0, 1]: the whole common rate carries the multicast message.
Eigen::VectorXd multicast_only_portions(int users);

/// One Jacobi-style update of both blocks from the same previous state:
/// f <- normalize(B^{-1} A f), v <- normalize(E^{-1} D v).
SolverState gpi_step(const SolverState& state, const QuadFormSet& q, const DemandProfile& demands,
                     double alpha, Prefactors prefactors = Prefactors::Dropped, bool freeze_v = false);

/// Runs the iteration until both iterate differences drop below epsilon. On
/// a miss at t_max, alpha grows by alpha_growth and the run restarts from the
/// last iterate, up to max_escalations times. Never throws on
/// non-convergence; a numerical breakdown ends the run with converged=false.
SolverReport solve(const QuadFormSet& q, const DemandProfile& demands, const SolverOptions& options,
                   SolverState init);

}  // namespace rsnoum
