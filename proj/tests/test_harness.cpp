#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "rsnoum/config_file.hpp"
#include "rsnoum/metrics.hpp"
#include "rsnoum/results_io.hpp"

using namespace rsnoum;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.config.nt_x = 2;
  plan.config.nt_y = 2;
  plan.demands.unicast = vec({0.5, 1.0, 1.5});
  plan.demands.multicast = 0.5;
  plan.realizations = 4;
  plan.base_seed = 77;
  return plan;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_results_csv(out, r.records);
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("mean absolute error") {
  DemandProfile d = DemandProfile::with_default_eta(vec({1.0, 1.0}), 1.0);
  CHECK(mae(vec({0.5, 1.5}), 1.0, d) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mae(vec({1.0, 1.0}), 1.0, d) == 0.0);
  d = DemandProfile::with_default_eta(vec({0.5, 0.5, 1, 1, 1.5, 2, 2.5, 2.5}), 1.0);
  CHECK(mae(Eigen::VectorXd::Zero(8), 0.0, d) == doctest::Approx(12.5 / 9.0).epsilon(1e-15));
  CHECK_THROWS_AS(mae(Eigen::VectorXd::Zero(3), 0.0, d), std::invalid_argument);
}

TEST_CASE("percentile") {
  CHECK(percentile({1, 2, 3, 4}, 50) == 2.5);
  CHECK(percentile({3, 1, 4, 2}, 0) == 1.0);
  CHECK(percentile({3, 1, 4, 2}, 100) == 4.0);
  CHECK(percentile({7}, 95) == 7.0);
  CHECK_THROWS_AS(percentile({}, 50), std::invalid_argument);
  CHECK_THROWS_AS(percentile({1.0}, 101), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(1000);
  for (auto& v : x) v = u(rng);
  CHECK(std::abs(percentile(x, 95) - 0.95) <= 0.03);
}

TEST_CASE("mean, standard error and empirical CDF") {
  CHECK(mean({1, 2, 3}) == 2.0);
  CHECK(standard_error({1, 2, 3}) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(standard_error({4}) == 0.0);
  CHECK(empirical_cdf({3, 1, 2}) == std::vector<double>{1, 2, 3});
}

TEST_CASE("random streams are reproducible and distinct") {
  Rng a = stream_rng(9, Stream::Fading), b = stream_rng(9, Stream::Fading);
  CHECK(a() == b());
  CHECK(stream_rng(9, Stream::Fading)() != stream_rng(9, Stream::Placement)());
  CHECK(stream_rng(9, Stream::Fading)() != stream_rng(10, Stream::Fading)());
}

TEST_CASE("one realization gives paired records over a shared channel") {
  ExperimentPlan plan = small_plan();
  plan.realizations = 1;
  const ExperimentResult r = run_experiment(plan);
  REQUIRE(r.records.size() == 6);
  for (const auto& rec : r.records) {
    CHECK(rec.realization == 0);
    CHECK(rec.seed == 77);
    CHECK(rec.offered_uc.size() == 3);
    CHECK(rec.mae >= 0.0);
  }
  const Realization a = draw_realization(plan, 0), b = draw_realization(plan, 0);
  for (int k = 0; k < 3; ++k) CHECK(a.samples[k].gain == b.samples[k].gain);
  CHECK(r.groups.size() == 6);
}

TEST_CASE("records are sorted and independent of the thread count") {
  const ExperimentPlan plan = small_plan();
  const ExperimentResult one = run_experiment(plan, 1);
  const ExperimentResult three = run_experiment(plan, 3);
  const ExperimentResult again = run_experiment(plan, 1);
  CHECK(csv_of(one) == csv_of(three));
  CHECK(csv_of(one) == csv_of(again));
  CHECK(summary_json(plan, one) == summary_json(plan, three));
  for (std::size_t i = 1; i < one.records.size(); ++i) {
    const auto& p = one.records[i - 1];
    const auto& c = one.records[i];
    CHECK(std::tuple(p.realization, static_cast<int>(p.scheme), static_cast<int>(p.csit)) <
          std::tuple(c.realization, static_cast<int>(c.scheme), static_cast<int>(c.csit)));
  }
}

TEST_CASE("results CSV layout") {
  const ExperimentPlan plan = small_plan();
  const ExperimentResult r = run_experiment(plan);
  const auto rows = parse_csv(csv_of(r));
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"realization", "seed", "scheme", "csit", "k", "demand", "offered", "mae",
                                            "iters", "converged"});
  CHECK(rows.size() == 1 + 4 * 3 * 2 * 4);
  CHECK(rows[1][4] == "1");
  CHECK(rows[4][4] == "mc");
  CHECK(rows[1][2] == "gpi-rs-noum");
  CHECK(rows[1][3] == "perfect");
}

TEST_CASE("summary statistics can be recomputed from the CSV") {
  const ExperimentPlan plan = small_plan();
  const ExperimentResult r = run_experiment(plan);
  const auto rows = parse_csv(csv_of(r));
  std::map<std::pair<std::string, std::string>, std::vector<double>> maes;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][4] == "mc") maes[{rows[i][2], rows[i][3]}].push_back(std::stod(rows[i][7]));
  }
  for (const auto& g : r.groups) {
    const auto& m = maes.at({std::string(scheme_name(g.scheme)), std::string(csit_name(g.csit))});
    double s = 0.0;
    for (double x : m) s += x;
    CHECK(std::abs(s / static_cast<double>(m.size()) - g.amae) <= 1e-9);
    std::vector<double> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    const double h = 0.95 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double p95 = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[std::min(lo + 1, sorted.size() - 1)] - sorted[lo]);
    CHECK(std::abs(p95 - g.p95) <= 1e-9);
  }
}

TEST_CASE("rate-splitting MAE beats LDM in most paired realizations") {
  ExperimentPlan plan;
  plan.realizations = 20;
  plan.schemes = {SchemeId::GpiRsNoum, SchemeId::LdmRmNoum};
  plan.csit = {CsitMode::Perfect};
  const ExperimentResult r = run_experiment(plan);
  int wins = 0;
  for (std::size_t i = 0; i + 1 < r.records.size(); i += 2) {
    REQUIRE(r.records[i].scheme == SchemeId::GpiRsNoum);
    REQUIRE(r.records[i + 1].scheme == SchemeId::LdmRmNoum);
    wins += r.records[i].mae <= r.records[i + 1].mae ? 1 : 0;
  }
  CHECK(wins >= 18);
}

TEST_CASE("config parsing") {
  std::istringstream in(R"(# comment
nt_x = 4
nt_y = 4   # trailing comment
altitude_km = 550
rician_k_db = 6
demand_uc = 1, 2
demand_mc = 0.5
schemes = gpi, oum
csit = statistical
realizations = 12
seed = 5
angle_unit = deg
user_azimuth = 0, 90
user_off_nadir = 0, 10
sweep = mc_demand
sweep_values = 0.5, 1.0
)");
  const ExperimentPlan p = parse_plan(in);
  CHECK(p.config.antennas() == 16);
  CHECK(p.config.altitude == 550e3);
  CHECK(p.config.rician_k == doctest::Approx(db_to_linear(6.0)));
  CHECK(p.demands.unicast == vec({1.0, 2.0}));
  CHECK(p.resolved_demands().eta_mc == doctest::Approx(3.0));
  CHECK(p.schemes == std::vector<SchemeId>{SchemeId::GpiRsNoum, SchemeId::RmOum});
  CHECK(p.csit == std::vector<CsitMode>{CsitMode::Statistical});
  CHECK(p.realizations == 12);
  CHECK(p.base_seed == 5);
  REQUIRE(p.fixed_users.size() == 2);
  CHECK(p.fixed_users[1].azimuth == doctest::Approx(kPi / 2.0));
  CHECK(p.fixed_users[1].off_nadir == doctest::Approx(10.0 * kPi / 180.0));
  CHECK(p.fixed_users[0].distance == doctest::Approx(550e3));
  CHECK(p.sweep == SweepAxis::McDemand);

  std::istringstream round(format_plan(p));
  const ExperimentPlan q = parse_plan(round);
  CHECK(format_plan(q) == format_plan(p));
}

TEST_CASE("config errors name the line") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_plan(in);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  CHECK(fails_with("nt_x = 2\nbogus = 1\n", "line 2"));
  CHECK(fails_with("nt_x = 2\nnt_x = 3\n", "duplicate"));
  CHECK(fails_with("nt_x = two\n", "line 1"));
  CHECK(fails_with("schemes = wmmse\n", "unknown scheme"));
  CHECK(fails_with("demand_uc = 1, 2\nuser_azimuth = 0\nuser_off_nadir = 0\n", "fixed user count"));
  CHECK(fails_with("realizations = 0\n", "realizations"));
  CHECK(fails_with("just words\n", "key = value"));
}

TEST_CASE("eta follows the multicast demand along a sweep unless fixed") {
  ExperimentPlan plan = small_plan();
  plan.sweep = SweepAxis::McDemand;
  plan.sweep_values = {0.5, 2.0};
  CHECK(plan_at(plan, 2.0).resolved_demands().eta_mc == doctest::Approx(0.5));
  plan.eta_override = 3.0;
  CHECK(plan_at(plan, 2.0).resolved_demands().eta_mc == 3.0);

  plan.sweep = SweepAxis::RicianK;
  CHECK(plan_at(plan, 18.0).config.rician_k == doctest::Approx(db_to_linear(18.0)));
}

TEST_CASE("sweep produces one result per value") {
  ExperimentPlan plan = small_plan();
  plan.realizations = 2;
  plan.schemes = {SchemeId::GpiRsNoum};
  plan.sweep = SweepAxis::RicianK;
  plan.sweep_values = {0.0, 12.0};
  const auto points = run_sweep(plan);
  REQUIRE(points.size() == 2);
  CHECK(points[1].value == 12.0);
  std::ostringstream out;
  write_sweep_csv(out, plan.sweep, points);
  const auto rows = parse_csv(out.str());
  CHECK(rows.size() == 1 + 2 * 2);
  CHECK(rows[1][0] == "rician_k");
}

TEST_CASE("trace CSV") {
  std::ostringstream out;
  write_trace_csv(out, {{1, 0.5, 0.25, 2.0, std::exp(-2.0), 0.01}});
  CHECK(out.str().rfind("iteration,residual_f,residual_v,objective,lambda\n1,0.5,0.25,2,", 0) == 0);
}
