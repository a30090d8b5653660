// Command-line front end: run, sweep, convergence, validate.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsnoum/config_file.hpp"
#include "rsnoum/metrics.hpp"
#include "rsnoum/results_io.hpp"
#include "validate.hpp"

namespace fs = std::filesystem;
using namespace rsnoum;

namespace {

struct CommonFlags {
  std::string config;
  std::vector<std::string> schemes;
  std::vector<std::string> csit;
  int realizations = -1;
  long long seed = -1;
  std::string out = "out";
  int threads = 1;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "plan file (key = value lines)")->check(CLI::ExistingFile);
  app->add_option("--scheme", f.schemes, "gpi, ldm, oum (repeatable; default from plan)")->delimiter(',');
  app->add_option("--csit", f.csit, "perfect, statistical (repeatable; default from plan)")->delimiter(',');
  app->add_option("--realizations", f.realizations, "channel realizations (default 200)")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "base seed")->check(CLI::NonNegativeNumber);
  app->add_option("--out", f.out, "output directory")->capture_default_str();
  app->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

ExperimentPlan build_plan(const CommonFlags& f) {
  ExperimentPlan plan;
  if (!f.config.empty()) {
    plan = load_plan(f.config);
  } else {
    std::istringstream empty;
    plan = parse_plan(empty);
  }
  if (!f.schemes.empty()) {
    plan.schemes.clear();
    for (const auto& s : f.schemes) {
      const auto id = parse_scheme(s);
      if (!id) throw CLI::ValidationError("--scheme", "unknown scheme " + s);
      plan.schemes.push_back(*id);
    }
  }
  if (!f.csit.empty()) {
    plan.csit.clear();
    for (const auto& s : f.csit) {
      const auto m = parse_csit(s);
      if (!m) throw CLI::ValidationError("--csit", "unknown CSIT mode " + s);
      plan.csit.push_back(*m);
    }
  }
  if (f.realizations > 0) plan.realizations = f.realizations;
  if (f.seed >= 0) plan.base_seed = static_cast<std::uint64_t>(f.seed);
  plan.validate();
  return plan;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Trace of the first scheme and CSIT mode of the plan on realization 0.
std::vector<TraceEntry> first_trace(const ExperimentPlan& plan) {
  const Realization r = draw_realization(plan, 0);
  const QuadFormSet statistical = build_quadforms(r.stats, plan.config);
  const QuadFormSet realized = build_quadforms(realized_stats(r.stats, r.samples), plan.config);
  const QuadFormSet& q = plan.csit.front() == CsitMode::Perfect ? realized : statistical;
  const SolverState init = plan.init == InitMode::Random ? random_state(q, r.init_seed) : initial_state(q);
  return design_scheme(plan.schemes.front(), q, plan.resolved_demands(), plan.solver, init).trace;
}

void print_groups(const ExperimentResult& result) {
  for (const auto& g : result.groups) {
    std::printf("%-12s %-11s AMAE %.4f  p95 %.4f  not converged %d  failures %d\n",
                std::string(scheme_name(g.scheme)).c_str(), std::string(csit_name(g.csit)).c_str(), g.amae, g.p95,
                g.not_converged, g.failures);
  }
}

int cmd_run(const CommonFlags& f, bool trace) {
  const ExperimentPlan plan = build_plan(f);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  const ExperimentResult result = run_experiment(plan, f.threads);
  {
    auto out = open_out(dir / "results.csv");
    write_results_csv(out, result.records);
  }
  {
    auto out = open_out(dir / "breakdown.csv");
    write_breakdown_csv(out, result.records);
  }
  open_out(dir / "summary.json") << summary_json(plan, result);
  open_out(dir / "plan.cfg") << format_plan(plan);
  if (trace) {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, first_trace(plan));
  }
  print_groups(result);
  return 0;
}

int cmd_sweep(const CommonFlags& f, const std::string& axis, const std::vector<double>& values) {
  ExperimentPlan plan = build_plan(f);
  if (!axis.empty()) {
    const auto a = parse_sweep_axis(axis);
    if (!a) throw CLI::ValidationError("--axis", "unknown axis " + axis);
    plan.sweep = *a;
  }
  if (!values.empty()) plan.sweep_values = values;
  if (plan.sweep == SweepAxis::None) throw CLI::ValidationError("--axis", "sweep needs rician_k or mc_demand");
  plan.validate();

  const fs::path dir(f.out);
  fs::create_directories(dir);
  const std::vector<SweepPoint> points = run_sweep(plan, f.threads);
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, plan.sweep, points);
  }
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json point = nlohmann::json::parse(summary_json(plan_at(plan, p.value), p.result));
    point["sweep_axis"] = sweep_axis_name(plan.sweep);
    point["sweep_value"] = p.value;
    doc.push_back(std::move(point));
  }
  open_out(dir / "sweep.json") << doc.dump(2) << "\n";
  open_out(dir / "plan.cfg") << format_plan(plan);
  for (const auto& p : points) {
    std::printf("%s = %g\n", std::string(sweep_axis_name(plan.sweep)).c_str(), p.value);
    print_groups(p.result);
  }
  return 0;
}

int cmd_convergence(const CommonFlags& f) {
  CommonFlags flags = f;
  if (flags.realizations <= 0) flags.realizations = 20;
  ExperimentPlan plan = build_plan(flags);
  const fs::path dir(f.out);
  fs::create_directories(dir);

  const DemandProfile demands = plan.resolved_demands();
  std::vector<std::pair<int, std::vector<TraceEntry>>> traces;
  std::vector<double> crossings;
  int converged = 0;
  for (int i = 0; i < plan.realizations; ++i) {
    const Realization r = draw_realization(plan, i);
    const QuadFormSet statistical = build_quadforms(r.stats, plan.config);
    const QuadFormSet realized = build_quadforms(realized_stats(r.stats, r.samples), plan.config);
    const QuadFormSet& q = plan.csit.front() == CsitMode::Perfect ? realized : statistical;
    const SolverState init = plan.init == InitMode::Random ? random_state(q, r.init_seed) : initial_state(q);
    const Design d = design_scheme(plan.schemes.front(), q, demands, plan.solver, init);
    converged += d.converged ? 1 : 0;
    const auto hit = std::find_if(d.trace.begin(), d.trace.end(),
                                  [&](const TraceEntry& e) { return e.residual_f < plan.solver.stop.epsilon; });
    crossings.push_back(hit == d.trace.end() ? static_cast<double>(plan.solver.stop.t_max) : hit->iteration);
    traces.emplace_back(i, d.trace);
  }
  {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, traces.front().second);
  }
  {
    auto out = open_out(dir / "traces.csv");
    write_traces_csv(out, traces);
  }
  nlohmann::json doc;
  doc["scheme"] = scheme_name(plan.schemes.front());
  doc["csit"] = csit_name(plan.csit.front());
  doc["realizations"] = plan.realizations;
  doc["converged"] = converged;
  doc["epsilon"] = plan.solver.stop.epsilon;
  doc["residual_f_crossing"] = crossings;
  doc["median_crossing"] = percentile(crossings, 50.0);
  open_out(dir / "convergence.json") << doc.dump(2) << "\n";
  std::printf("converged %d / %d, median iteration where residual_f < %g: %g\n", converged, plan.realizations,
              plan.solver.stop.epsilon, percentile(crossings, 50.0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-splitting unicast/multicast precoding simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  bool trace = false;
  auto* run = app.add_subcommand("run", "one Monte Carlo experiment");
  add_common(run, run_flags);
  run->add_flag("--trace", trace, "also write trace.csv for realization 0");

  CommonFlags sweep_flags;
  std::string axis;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "experiment repeated along rician_k or mc_demand");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "rician_k | mc_demand (default from plan)");
  sweep->add_option("--values", values, "sweep values (dB or bps/Hz)")->delimiter(',');

  CommonFlags conv_flags;
  auto* conv = app.add_subcommand("convergence", "solver residual traces (default 20 realizations)");
  add_common(conv, conv_flags);

  long long validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "invariant checks on random instances");
  validate->add_option("--seed", validate_seed, "random seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_flags, trace);
    if (*sweep) return cmd_sweep(sweep_flags, axis, values);
    if (*conv) return cmd_convergence(conv_flags);
    if (*validate) return run_validation(static_cast<std::uint64_t>(validate_seed), std::cout) ? 0 : 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
