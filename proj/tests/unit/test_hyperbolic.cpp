#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hyperncs/hyperbolic.hpp"

using namespace hyperncs::hyperbolic;

namespace {

// Scalar brute-force evaluation of the Mobius formula, kept independent of
// the library implementation on purpose.
std::vector<double> oracle_mobius(const std::vector<double>& x,
                                  const std::vector<double>& y, double c) {
  double dot = 0.0, x2 = 0.0, y2 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    dot += x[k] * y[k];
    x2 += x[k] * x[k];
    y2 += y[k] * y[k];
  }
  const double den = 1.0 + 2.0 * c * dot + c * c * x2 * y2;
  std::vector<double> out(x.size());
  for (size_t k = 0; k < x.size(); ++k) {
    out[k] = ((1.0 + 2.0 * c * dot + c * y2) * x[k] + (1.0 - c * x2) * y[k]) / den;
  }
  return out;
}

BallPoint point(std::initializer_list<double> v, double c) {
  Eigen::VectorXd coords(v.size());
  int i = 0;
  for (double x : v) coords[i++] = x;
  return BallPoint{coords, c};
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Eigen::VectorXd random_vector(int dim, double max_norm, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, max_norm);
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return gauss(rng); });
  const double n = v.norm();
  return n > 0 ? Eigen::VectorXd(v * (radius(rng) / n)) : v;
}

}  // namespace

TEST_CASE("mobius_add identity and Euclidean degeneration") {
  const auto y = point({0.1, -0.2, 0.3}, 1.0);
  const auto zero = point({0.0, 0.0, 0.0}, 1.0);
  const auto sum = mobius_add(zero, y);
  for (int k = 0; k < 3; ++k) CHECK(sum.coords[k] == y.coords[k]);

  const auto a = point({0.5, -1.5}, 0.0);
  const auto b = point({2.0, 0.25}, 0.0);
  const auto e = mobius_add(a, b);
  CHECK(e.coords[0] == 2.5);
  CHECK(e.coords[1] == -1.25);
}

TEST_CASE("mobius_add matches the frozen brute-force value") {
  const auto r = mobius_add(point({0.3, 0.0}, 1.0), point({0.0, 0.4}, 1.0));
  // frozen from a high-precision evaluation of the standard formula
  CHECK(r.coords[0] == doctest::Approx(0.34305993690851735).epsilon(1e-14));
  CHECK(r.coords[1] == doctest::Approx(0.35883280757097792).epsilon(1e-14));
}

TEST_CASE("mobius_add agrees with the scalar oracle on random points") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = trial % 2 == 0 ? 1.0 : 0.5;
    const Eigen::VectorXd xv = random_vector(4, 0.6 / std::sqrt(c), rng);
    const Eigen::VectorXd yv = random_vector(4, 0.6 / std::sqrt(c), rng);
    const auto got = mobius_add({xv, c}, {yv, c});
    const auto want = oracle_mobius(
        std::vector<double>(xv.data(), xv.data() + 4),
        std::vector<double>(yv.data(), yv.data() + 4), c);
    for (int k = 0; k < 4; ++k) {
      CHECK(got.coords[k] == doctest::Approx(want[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("mobius_add contract violations") {
  CHECK_THROWS_AS(mobius_add(point({0.1, 0.2}, 1.0), point({0.1}, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(mobius_add(point({0.1, 0.2}, 1.0), point({0.1, 0.2}, 2.0)),
                  std::invalid_argument);
}

TEST_CASE("exp_map_zero examples") {
  const auto origin = exp_map_zero(vec({0.0, 0.0}), 1.0);
  CHECK(origin.coords.norm() == 0.0);

  const auto euclid = exp_map_zero(vec({1.5, -2.0}), 0.0);
  CHECK(euclid.coords[0] == 1.5);
  CHECK(euclid.coords[1] == -2.0);

  const auto far = exp_map_zero(vec({10.0, 0.0}), 1.0);
  CHECK(far.coords[0] == doctest::Approx(0.99999999587769276).epsilon(1e-12));
  CHECK(far.coords[1] == 0.0);
  CHECK(far.coords.squaredNorm() < 1.0);

  CHECK_THROWS_AS(
      exp_map_zero(vec({std::numeric_limits<double>::quiet_NaN(), 0.0}), 1.0),
      std::invalid_argument);
}

TEST_CASE("log_map_zero examples") {
  const auto r = log_map_zero(point({0.5, 0.0}, 1.0));
  CHECK(r[0] == doctest::Approx(0.54930614433405485).epsilon(1e-14));
  CHECK(r[1] == 0.0);

  CHECK(log_map_zero(point({0.0, 0.0}, 1.0)).norm() == 0.0);
  CHECK_THROWS_AS(log_map_zero(point({1.2, 0.0}, 1.0)), std::invalid_argument);
}

TEST_CASE("base-point maps match frozen brute-force values") {
  const auto x = point({0.2, 0.0}, 1.0);
  const auto moved = exp_map(x, vec({0.1, 0.0}));
  CHECK(moved.coords[0] == doctest::Approx(0.29761358049281431).epsilon(1e-13));
  CHECK(moved.coords[1] == 0.0);

  const auto v = log_map(x, point({0.5, 0.0}, 1.0));
  CHECK(v[0] == doctest::Approx(0.33271064666877375).epsilon(1e-13));
  CHECK(v[1] == 0.0);

  const auto fixed = exp_map(x, vec({0.0, 0.0}));
  CHECK(fixed.coords[0] == x.coords[0]);
  CHECK(log_map(x, x).norm() == 0.0);
}

TEST_CASE("exp_map at origin reduces to exp_map_zero") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd v = random_vector(6, 3.0, rng);
    const auto a = exp_map(BallPoint{Eigen::VectorXd::Zero(6), 1.0}, v);
    const auto b = exp_map_zero(v, 1.0);
    CHECK((a.coords - b.coords).norm() < 1e-12);
  }
}

TEST_CASE("origin round trips") {
  std::mt19937_64 rng(7);
  for (int m : {2, 16, 64}) {
    for (double c : {0.5, 1.0, 2.0}) {
      for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd v = random_vector(m, 5.0, rng);
        const Eigen::VectorXd back = log_map_zero(exp_map_zero(v, c));
        const double rel = (back - v).norm() / std::max(v.norm(), 1.0);
        CHECK(rel < 1e-6);
      }
    }
  }
}

TEST_CASE("base-point round trips") {
  std::mt19937_64 rng(9);
  for (int m : {2, 16}) {
    for (double c : {0.5, 1.0, 2.0}) {
      for (int trial = 0; trial < 200; ++trial) {
        const BallPoint x = exp_map_zero(random_vector(m, 0.5, rng), c);
        const Eigen::VectorXd v = random_vector(m, 2.0, rng);
        const Eigen::VectorXd back = log_map(x, exp_map(x, v));
        const double rel = (back - v).norm() / std::max(v.norm(), 1.0);
        CHECK(rel < 1e-6);
      }
    }
  }
}

TEST_CASE("Euclidean limit of mobius_add") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd xv = random_vector(8, 0.5, rng);
    const Eigen::VectorXd yv = random_vector(8, 0.5, rng);
    const auto sum = mobius_add({xv, 1e-8}, {yv, 1e-8});
    CHECK((sum.coords - (xv + yv)).norm() < 1e-5);
  }
}

TEST_CASE("ball closure and dimension preservation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = 2.0;
    const Eigen::VectorXd v = random_vector(5, 30.0, rng);
    const auto p = exp_map_zero(v, c);
    CHECK(p.coords.size() == 5);
    CHECK(c * p.coords.squaredNorm() < 1.0);
    const auto q = mobius_add(p, exp_map_zero(random_vector(5, 30.0, rng), c));
    CHECK(c * q.coords.squaredNorm() < 1.0);
  }
}

TEST_CASE("project_to_ball") {
  const auto inside = project_to_ball(vec({0.3, 0.4}), 1.0);
  CHECK(inside.coords[0] == 0.3);
  CHECK(inside.coords[1] == 0.4);

  const auto clipped = project_to_ball(vec({2.0, 0.0}), 1.0);
  CHECK(clipped.coords[0] == doctest::Approx(1.0 - 1e-5).epsilon(1e-14));
  CHECK(clipped.coords[1] == 0.0);

  const auto euclid = project_to_ball(vec({42.0, -7.0}), 0.0);
  CHECK(euclid.coords[0] == 42.0);
  CHECK(euclid.coords[1] == -7.0);
}
