#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rsnoum/objective.hpp"

using namespace rsnoum;

namespace {

QuadFormSet random_quadforms(int nt_x, int nt_y, int users, std::uint64_t seed) {
  SystemConfig cfg;
  cfg.nt_x = nt_x;
  cfg.nt_y = nt_y;
  Rng rng(seed);
  return build_quadforms(channel_stats(place_users(cfg, users, rng), cfg), cfg);
}

Eigen::VectorXcd random_unit(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd f(n);
  for (Eigen::Index i = 0; i < n; ++i) f(i) = {normal(rng), normal(rng)};
  return f.normalized();
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("smoothed minimum of equal rates") {
  CHECK(smoothed_min(Eigen::VectorXd::Constant(5, 1.7), 0.01) == doctest::Approx(1.7).epsilon(1e-15));
}

TEST_CASE("smoothed minimum of {1, 2}") {
  CHECK(std::abs(smoothed_min(vec({1.0, 2.0}), 0.01) - 1.0069314718055995) < 1e-15);
}

TEST_CASE("smoothed minimum of widely separated rates stays finite") {
  const double s = smoothed_min(vec({3.0, 8.0}), 0.01);
  CHECK(std::isfinite(s));
  CHECK(std::abs(s - 3.0069314718055995) < 1e-15);
}

TEST_CASE("softmax weights") {
  const Eigen::VectorXd w = softmax_weights(vec({1.0, 2.0}), 0.01);
  CHECK(w(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w(1) < 1e-40);
  CHECK(w(1) >= 0.0);

  CHECK((softmax_weights(Eigen::VectorXd::Constant(4, 0.3), 0.01).array() - 0.25).abs().maxCoeff() < 1e-15);

  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd r(6);
    for (auto& x : r) x = u(rng);
    const Eigen::VectorXd ww = softmax_weights(r, 0.05);
    CHECK(std::abs(ww.sum() - 1.0) < 1e-14);
    CHECK(ww.minCoeff() >= 0.0);
  }
}

TEST_CASE("smoothing rejects bad input") {
  CHECK_THROWS_AS(smoothed_min(vec({1.0}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_min(Eigen::VectorXd(0), 0.1), std::invalid_argument);
  SmoothingParams p;
  p.alpha_growth = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("smoothed minimum agrees with an extended-precision evaluation") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd r(8);
    for (auto& x : r) x = u(rng);
    for (double alpha : {1e-3, 1e-2, 1e-1, 1.0}) {
      CHECK(smoothed_min(r, alpha) == doctest::Approx(oracle::smoothed_min(r, alpha)).epsilon(1e-13));
    }
  }
}

TEST_CASE("smoothed minimum is non-decreasing in each rate") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd r(5);
    for (auto& x : r) x = u(rng);
    const double base = smoothed_min(r, 0.05);
    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXd up = r;
      up(i) += 1e-3;
      CHECK(smoothed_min(up, 0.05) >= base);
    }
  }
}

TEST_CASE("smoothed common rate sandwich on random precoders") {
  const QuadFormSet q = random_quadforms(6, 6, 8, 4);
  Rng rng(5);
  const double alpha = 1e-2;
  double worst = 1e300;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXcd f = random_unit(q.stacked_dim(), rng);
    const Eigen::VectorXd c = common_rates(f, q);
    const double s = smoothed_min_common(f, q, alpha);
    worst = std::min({worst, s - c.minCoeff(), c.minCoeff() + alpha * std::log(8.0) - s});
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("portions") {
  const Eigen::VectorXd p = portions(Eigen::VectorXd::Ones(9));
  CHECK((p.array() - 1.0 / 9.0).abs().maxCoeff() < 1e-15);

  Eigen::VectorXd ldm = Eigen::VectorXd::Zero(9);
  ldm(8) = 1.0;
  CHECK(portions(ldm) == ldm);

  Rng rng(6);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(9);
  for (auto& x : v) x = normal(rng);
  const Eigen::VectorXd a = portions(v), b = portions(5.0 * v);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(a.sum() - 1.0) < 1e-12);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(a.maxCoeff() <= 1.0);

  CHECK_THROWS_AS(portions(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("objective matches the reference evaluation") {
  for (auto [nx, ny, users] : {std::tuple{1, 2, 2}, std::tuple{2, 2, 3}, std::tuple{3, 3, 4}}) {
    const QuadFormSet q = random_quadforms(nx, ny, users, 7 + users);
    Rng rng(8);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd uc(users);
      for (auto& x : uc) x = u(rng);
      const DemandProfile d = DemandProfile::with_default_eta(uc, u(rng));
      const Eigen::VectorXcd f = random_unit(q.stacked_dim(), rng);
      Eigen::VectorXd v(users + 1);
      for (auto& x : v) x = u(rng) - 1.5;
      const oracle::Problem p{q.responses(), q.gains(), q.noise_scale(), d.unicast, d.multicast, d.eta_mc, 0.02};
      CHECK(objective_value(f, v, q, d, 0.02) == doctest::Approx(oracle::objective(p, f, v)).epsilon(1e-11));
    }
  }
}

TEST_CASE("objective on the single-antenna single-user toy") {
  const QuadFormSet q(Eigen::MatrixXcd::Ones(1, 1), Eigen::VectorXd::Ones(1), 1.0);
  const DemandProfile d = DemandProfile::with_default_eta(vec({1.0}), 0.5);
  CHECK(d.eta_mc == 2.0);
  for (double rho : {0.0, 0.3, 0.8}) {
    for (double p : {0.0, 0.5, 1.0}) {
      Eigen::VectorXcd f(2);
      f << std::sqrt(rho), std::sqrt(1.0 - rho);
      const Eigen::VectorXd v = vec({std::sqrt(p), std::sqrt(1.0 - p)});
      const double rc = std::log2(2.0 / (2.0 - rho));
      const double rp = std::log2(2.0 - rho);
      const double want = std::pow(1.0 - rp - p * rc, 2) + 2.0 * std::pow(0.5 - (1.0 - p) * rc, 2);
      CHECK(objective_value(f, v, q, d, 0.01) == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("objective is zero exactly at a perfect match") {
  const QuadFormSet q = random_quadforms(2, 2, 3, 9);
  Rng rng(10);
  const Eigen::VectorXcd f = random_unit(q.stacked_dim(), rng);
  const Eigen::VectorXd v = vec({0.5, -0.2, 0.7, 0.4});
  const double alpha = 0.01;
  const Eigen::VectorXd p = portions(v);
  const double s = smoothed_min_common(f, q, alpha);
  DemandProfile d;
  d.unicast = private_rates(f, q) + p.head(3) * s;
  d.multicast = p(3) * s;
  d.eta_mc = 1.3;
  const Evaluation e = evaluate(f, v, q, d, alpha);
  CHECK(e.objective == 0.0);
  CHECK(eigenvalue_lambda(f, v, q, d, alpha) == 1.0);

  d.unicast(1) += std::sqrt(std::log(2.0));
  CHECK(objective_value(f, v, q, d, alpha) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(eigenvalue_lambda(f, v, q, d, alpha) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero demands with no private power and no unicast portions") {
  const QuadFormSet q = random_quadforms(2, 2, 2, 11);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(q.stacked_dim());
  stream_block(f, q.antennas(), 0) = q.responses().col(0).normalized();
  const Eigen::VectorXd v = vec({0.0, 0.0, 1.0});
  DemandProfile d = DemandProfile::with_default_eta(Eigen::VectorXd::Zero(2), 0.0);
  const Evaluation e = evaluate(f, v, q, d, 0.01);
  CHECK(e.unicast_error == 0.0);
  CHECK(e.objective >= 0.0);
}

TEST_CASE("lambda identity and non-negativity on random states") {
  const QuadFormSet q = random_quadforms(3, 3, 4, 12);
  Rng rng(13);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd uc(4);
    for (auto& x : uc) x = u(rng);
    const DemandProfile d = DemandProfile::with_default_eta(uc, u(rng));
    const Eigen::VectorXcd f = random_unit(q.stacked_dim(), rng);
    Eigen::VectorXd v(5);
    for (auto& x : v) x = u(rng);
    const double obj = objective_value(f, v, q, d, 0.01);
    CHECK(obj >= 0.0);
    CHECK(std::abs(std::log(eigenvalue_lambda(f, v, q, d, 0.01)) + obj) <= 1e-12);
  }
}
