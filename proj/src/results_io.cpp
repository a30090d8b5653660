#include "rsnoum/results_io.hpp"

#include <cstdio>

#include <json.hpp>

namespace rsnoum {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "realization,seed,scheme,csit,k,demand,offered,mae,iters,converged\n";
  for (const auto& r : records) {
    const std::string tail = "," + format_double(r.mae) + "," + std::to_string(r.iterations) + "," +
                             (r.converged ? "1" : "0") + "\n";
    const std::string head = std::to_string(r.realization) + "," + std::to_string(r.seed) + "," +
                             std::string(scheme_name(r.scheme)) + "," + std::string(csit_name(r.csit)) + ",";
    for (Eigen::Index k = 0; k < r.offered_uc.size(); ++k) {
      out << head << (k + 1) << "," << format_double(r.demand_uc(k)) << "," << format_double(r.offered_uc(k)) << tail;
    }
    out << head << "mc," << format_double(r.demand_mc) << "," << format_double(r.offered_mc) << tail;
  }
}

void write_breakdown_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "realization,scheme,csit,k,private,common\n";
  for (const auto& r : records) {
    const std::string head = std::to_string(r.realization) + "," + std::string(scheme_name(r.scheme)) + "," +
                             std::string(csit_name(r.csit)) + ",";
    for (Eigen::Index k = 0; k < r.offered_uc.size(); ++k) {
      out << head << (k + 1) << "," << format_double(r.private_uc(k)) << ","
          << format_double(r.offered_uc(k) - r.private_uc(k)) << "\n";
    }
    out << head << "mc,0," << format_double(r.offered_mc) << "\n";
  }
}

namespace {

void trace_row(std::ostream& out, const TraceEntry& e) {
  out << e.iteration << "," << format_double(e.residual_f) << "," << format_double(e.residual_v) << ","
      << format_double(e.objective) << "," << format_double(e.lambda) << "\n";
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iteration,residual_f,residual_v,objective,lambda\n";
  for (const auto& e : trace) trace_row(out, e);
}

void write_traces_csv(std::ostream& out, const std::vector<std::pair<int, std::vector<TraceEntry>>>& traces) {
  out << "realization,iteration,residual_f,residual_v,objective,lambda\n";
  for (const auto& [realization, trace] : traces) {
    for (const auto& e : trace) {
      out << realization << ",";
      trace_row(out, e);
    }
  }
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepPoint>& points) {
  out << "axis,value,scheme,csit,amae,amae_stderr,p95,failures,not_converged\n";
  for (const auto& p : points) {
    for (const auto& g : p.result.groups) {
      out << sweep_axis_name(axis) << "," << format_double(p.value) << "," << scheme_name(g.scheme) << ","
          << csit_name(g.csit) << "," << format_double(g.amae) << "," << format_double(g.amae_stderr) << ","
          << format_double(g.p95) << "," << g.failures << "," << g.not_converged << "\n";
    }
  }
}

std::string summary_json(const ExperimentPlan& plan, const ExperimentResult& result) {
  using nlohmann::json;
  const DemandProfile demands = plan.resolved_demands();
  json doc;
  doc["realizations"] = plan.realizations;
  doc["base_seed"] = plan.base_seed;
  doc["users"] = plan.users();
  doc["demand_uc"] = std::vector<double>(demands.unicast.begin(), demands.unicast.end());
  doc["demand_mc"] = demands.multicast;
  doc["eta_mc"] = demands.eta_mc;
  doc["rician_k_db"] = linear_to_db(plan.config.rician_k);
  json groups = json::array();
  for (const auto& g : result.groups) {
    json j;
    j["scheme"] = scheme_name(g.scheme);
    j["csit"] = csit_name(g.csit);
    j["count"] = g.count;
    j["failures"] = g.failures;
    j["not_converged"] = g.not_converged;
    j["amae"] = g.amae;
    j["amae_stderr"] = g.amae_stderr;
    j["p50"] = g.p50;
    j["p95"] = g.p95;
    j["mean_iterations"] = g.mean_iterations;
    j["mean_offered_uc"] = std::vector<double>(g.mean_offered_uc.begin(), g.mean_offered_uc.end());
    j["mean_offered_mc"] = g.mean_offered_mc;
    j["cdf"] = g.cdf;
    groups.push_back(std::move(j));
  }
  doc["groups"] = std::move(groups);
  return doc.dump(2) + "\n";
}

}  // namespace rsnoum
