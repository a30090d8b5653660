#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rsnoum/gpi_solver.hpp"

using namespace rsnoum;

namespace {

struct Instance {
  QuadFormSet q;
  DemandProfile d;
};

Instance random_instance(int nt_x, int nt_y, int users, Rng& rng) {
  SystemConfig cfg;
  cfg.nt_x = nt_x;
  cfg.nt_y = nt_y;
  auto stats = channel_stats(place_users(cfg, users, rng), cfg);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  Eigen::VectorXd uc(users);
  for (auto& x : uc) x = u(rng);
  return {build_quadforms(stats, cfg), DemandProfile::with_default_eta(uc, u(rng))};
}

oracle::Problem as_problem(const Instance& in, double alpha) {
  return {in.q.responses(), in.q.gains(), in.q.noise_scale(), in.d.unicast, in.d.multicast, in.d.eta_mc, alpha};
}

double rel(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).norm() / b.norm(); }
double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("KKT gradients match central differences") {
  const int sizes[][3] = {{1, 2, 2}, {2, 2, 3}, {3, 3, 4}};
  const double alpha = 0.05;
  for (const auto& sz : sizes) {
    Rng rng(100 + sz[2]);
    const Instance in = random_instance(sz[0], sz[1], sz[2], rng);
    const oracle::Problem p = as_problem(in, alpha);
    for (int t = 0; t < 5; ++t) {
      const SolverState s = random_state(in.q, rng());
      const Evaluation e = evaluate(s.f, s.v, in.q, in.d, alpha);

      const Eigen::VectorXcd gf = kkt_gradient_f(build_kkt_f(e, in.d, in.q), s.f, in.q);
      const Eigen::VectorXcd fd_f = oracle::fd_gradient(
          [&](const Eigen::VectorXcd& f) { return oracle::objective(p, f, s.v); }, s.f, 1e-5);
      CHECK(rel(gf, fd_f) <= 1e-4);

      const Eigen::VectorXd gv = kkt_gradient_v(build_kkt_v(e, s.v, in.d), s.v, e.smoothed);
      const Eigen::VectorXd fd_v = oracle::fd_gradient(
          [&](const Eigen::VectorXd& v) { return oracle::objective(p, s.f, v); }, s.v, 1e-5);
      CHECK(rel(gv, fd_v) <= 1e-4);
    }
  }
}

TEST_CASE("prefactor form of the gradient identity") {
  Rng rng(7);
  const Instance in = random_instance(2, 2, 3, rng);
  const SolverState s = random_state(in.q, 8);
  const Evaluation e = evaluate(s.f, s.v, in.q, in.d, 0.01);
  const KktF k = build_kkt_f(e, in.d, in.q, Prefactors::Included);
  const double lambda = std::exp(-e.objective);
  const Eigen::VectorXcd lhs =
      (2.0 / std::log(2.0)) * (k.a_matrix(in.q).apply(s.f) - lambda * k.b_matrix(in.q).apply(s.f)) / k.lambda_num;
  // -d f / d conj(f) is half the real-coordinate gradient with opposite sign.
  const Eigen::VectorXcd want = -0.5 * kkt_gradient_f(k, s.f, in.q);
  CHECK(rel(lhs, want) < 1e-12);
  CHECK(k.lambda_num / k.lambda_den == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("common-rate loads are normalized") {
  Rng rng(9);
  const Instance in = random_instance(2, 2, 3, rng);
  for (int t = 0; t < 20; ++t) {
    const SolverState s = random_state(in.q, rng());
    const CommonRateLoads loads = build_LA_LB(s.f, in.q, 0.01);
    const auto la = BlockDiagonal::from(loads.la, in.q).dense();
    const auto lb = BlockDiagonal::from(loads.lb, in.q).dense();
    CHECK(oracle::form(la, s.f) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::form(lb, s.f) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("single-user loads reduce to the normalized matrices") {
  Rng rng(10);
  const Instance in = random_instance(2, 2, 1, rng);
  const SolverState s = random_state(in.q, 11);
  const CommonRateLoads loads = build_LA_LB(s.f, in.q, 0.01);
  const Eigen::MatrixXcd ac = in.q.dense_ac(0);
  const Eigen::MatrixXcd want = ac / oracle::form(ac, s.f);
  CHECK((BlockDiagonal::from(loads.la, in.q).dense() - want).norm() < 1e-12 * want.norm());
}

TEST_CASE("loads give the derivative of the smoothed common rate") {
  Rng rng(12);
  const Instance in = random_instance(2, 2, 3, rng);
  const double alpha = 0.05;
  const SolverState s = random_state(in.q, 13);
  const CommonRateLoads loads = build_LA_LB(s.f, in.q, alpha);
  const Eigen::VectorXcd diff =
      BlockDiagonal::from(loads.la, in.q).apply(s.f) - BlockDiagonal::from(loads.lb, in.q).apply(s.f);
  const Eigen::VectorXcd analytic = (2.0 / std::log(2.0)) * diff;
  const Eigen::VectorXcd fd = oracle::fd_gradient(
      [&](const Eigen::VectorXcd& f) {
        return oracle::smoothed_min(oracle::rates(f, in.q.responses(), in.q.gains(), in.q.noise_scale()).common,
                                    alpha);
      },
      s.f, 1e-5);
  CHECK(rel(analytic, fd) <= 1e-4);
}

TEST_CASE("stationarity at a perfect match") {
  Rng rng(14);
  Instance in = random_instance(2, 2, 3, rng);
  const SolverState s = random_state(in.q, 15);
  const double alpha = 0.01;
  const Evaluation e0 = evaluate(s.f, s.v, in.q, in.d, alpha);
  in.d.unicast = e0.priv + e0.shares.head(3) * e0.smoothed;
  in.d.multicast = e0.shares(3) * e0.smoothed;
  const Evaluation e = evaluate(s.f, s.v, in.q, in.d, alpha);
  CHECK(e.objective < 1e-20);
  const KktF k = build_kkt_f(e, in.d, in.q, Prefactors::Included);
  const Eigen::VectorXcd af = k.a_matrix(in.q).apply(s.f);
  CHECK(rel(af, k.b_matrix(in.q).apply(s.f)) < 1e-12);
  const KktV kv = build_kkt_v(e, s.v, in.d, Prefactors::Included);
  CHECK(rel(Eigen::VectorXd(kv.d_diagonal().cwiseProduct(s.v)), Eigen::VectorXd(kv.e_diagonal().cwiseProduct(s.v))) < 1e-12);
}

TEST_CASE("B and E are positive definite on random states") {
  Rng rng(16);
  const Instance in = random_instance(2, 3, 4, rng);
  for (int t = 0; t < 100; ++t) {
    const SolverState s = random_state(in.q, rng());
    const Evaluation e = evaluate(s.f, s.v, in.q, in.d, 0.01);
    const KktF kf = build_kkt_f(e, in.d, in.q);
    CHECK(kf.b_matrix(in.q).min_eigenvalue() > 0.0);
    CHECK(kf.a_matrix(in.q).min_eigenvalue() > 0.0);
    const KktV kv = build_kkt_v(e, s.v, in.d);
    CHECK(kv.e.minCoeff() > 0.0);
    CHECK(kv.d.minCoeff() > 0.0);
  }
}

TEST_CASE("multicast-only portions with zero multicast weight") {
  Rng rng(17);
  Instance in = random_instance(2, 2, 3, rng);
  in.d.eta_mc = 0.0;
  SolverState s = random_state(in.q, 18);
  s.v = multicast_only_portions(3);
  const Evaluation e = evaluate(s.f, s.v, in.q, in.d, 0.01);
  const KktV kv = build_kkt_v(e, s.v, in.d);
  CHECK(kv.d.allFinite());
  CHECK(kv.e.allFinite());
  CHECK(kv.d.minCoeff() > 0.0);
  CHECK(kv.e.minCoeff() > 0.0);
  // Every multicast term vanishes; only the floor is left on that entry.
  CHECK(kv.d(3) == kKktFloor);
  CHECK(kv.e(3) == kKktFloor);
  for (int j = 0; j < 3; ++j) {
    CHECK(kv.d(j) == doctest::Approx(in.d.unicast(j) + kKktFloor).epsilon(1e-14));
    CHECK(kv.e(j) == doctest::Approx(e.priv(j) + kKktFloor).epsilon(1e-14));
  }
  const SolverState next = gpi_step(s, in.q, in.d, 0.01);
  CHECK(next.v.allFinite());
  CHECK(std::abs(next.v.norm() - 1.0) < 1e-12);
}

TEST_CASE("block solve agrees with a dense solve") {
  Rng rng(19);
  const Instance in = random_instance(2, 2, 3, rng);
  const SolverState s = random_state(in.q, 20);
  const KktF k = build_kkt_f(s.f, s.v, in.q, in.d, 0.01);
  const BlockDiagonal b = k.b_matrix(in.q);
  const Eigen::VectorXcd x = b.solve(s.f);
  CHECK(rel(x, b.dense().lu().solve(s.f)) < 1e-10);
}

TEST_CASE("non-positive-definite block raises a numerical breakdown") {
  std::vector<Eigen::MatrixXcd> blocks{-Eigen::MatrixXcd::Identity(2, 2)};
  const BlockDiagonal b(std::move(blocks));
  CHECK_THROWS_AS(b.solve(Eigen::VectorXcd::Ones(2)), NumericalBreakdown);
}
