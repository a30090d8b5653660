#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rsnoum/experiment.hpp"

namespace rsnoum {

/// Per-message rows: realization,seed,scheme,csit,k,demand,offered,mae,iters,converged.
/// k runs 1..K for unicast messages and is "mc" for the multicast message;
/// mae, iters and converged repeat the realization-level values on every row.
void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// Split of each offered rate into its private and common parts:
/// realization,scheme,csit,k,private,common. The mc row has private = 0.
void write_breakdown_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// Per-iteration solver trace: iteration,residual_f,residual_v,objective,lambda.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

/// Same columns behind a leading realization column.
void write_traces_csv(std::ostream& out, const std::vector<std::pair<int, std::vector<TraceEntry>>>& traces);

/// One row per sweep value, scheme and CSIT mode:
/// axis,value,scheme,csit,amae,amae_stderr,p95,failures,not_converged.
void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepPoint>& points);

/// AMAE, percentiles, empirical CDF and mean offered rates per group.
std::string summary_json(const ExperimentPlan& plan, const ExperimentResult& result);

/// Doubles as text with 17 significant digits.
std::string format_double(double x);

}  // namespace rsnoum
