#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hyperncs/rank_stats.hpp"

using hyperncs::stats::average_ranks;
using hyperncs::stats::kendall_tau;
using hyperncs::stats::spearman_rho;

namespace {

// quadratic-time rank oracle, independent of average_ranks
std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    size_t below = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++below;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = below + 0.5 * (equal - 1) + 1.0;
  }
  return ranks;
}

}  // namespace

TEST_CASE("average ranks with ties") {
  CHECK(average_ranks({1, 2, 2, 3}) == std::vector<double>{1, 2.5, 2.5, 4});
  CHECK(average_ranks({5, 5, 5}) == std::vector<double>{2, 2, 2});

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coarse(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(17);
    for (auto& x : v) x = coarse(rng);
    CHECK(average_ranks(v) == oracle_ranks(v));
  }
}

TEST_CASE("spearman basic cases") {
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == 1.0);
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  // frozen from the brute-force rank computation oracle
  CHECK(spearman_rho({1, 2, 3, 4}, {1, 3, 2, 4}) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("spearman errors") {
  CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_rho({1}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_rho({3, 3, 3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("kendall basic cases") {
  CHECK(kendall_tau({1, 2, 3, 4}, {2, 4, 6, 8}) == 1.0);
  CHECK(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}) == -1.0);
  // 5 concordant, 1 discordant out of 6 pairs
  CHECK(kendall_tau({1, 2, 3, 4}, {1, 3, 2, 4}) ==
        doctest::Approx(4.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("kendall tau-b handles ties") {
  // pairs: (1,2) tied in a; (1,3),(2,3) concordant in both
  // C=2, D=0, ties_a=1, ties_b=0 -> tau = 2/sqrt(3*2)
  CHECK(kendall_tau({1, 1, 2}, {1, 2, 3}) ==
        doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK_THROWS_AS(kendall_tau({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("bounds hold for random inputs") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(12), b(12);
    for (auto& x : a) x = coarse(rng);
    for (auto& x : b) x = coarse(rng);
    const bool a_const = std::all_of(a.begin(), a.end(),
                                     [&](double v) { return v == a[0]; });
    const bool b_const = std::all_of(b.begin(), b.end(),
                                     [&](double v) { return v == b[0]; });
    if (a_const || b_const) continue;
    const double rho = spearman_rho(a, b);
    const double tau = kendall_tau(a, b);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
    CHECK(tau >= -1.0);
    CHECK(tau <= 1.0);
  }
}

TEST_CASE("agreement with rank-then-pearson on tie-free data") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(15), b(15);
    for (auto& x : a) x = gauss(rng);
    for (auto& x : b) x = gauss(rng);
    // tie-free shortcut: rho = 1 - 6*sum(d^2)/(n(n^2-1))
    const auto ra = oracle_ranks(a);
    const auto rb = oracle_ranks(b);
    double d2 = 0.0;
    for (size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double expected = 1.0 - 6.0 * d2 / (15.0 * (15.0 * 15.0 - 1.0));
    CHECK(spearman_rho(a, b) == doctest::Approx(expected).epsilon(1e-12));
  }
}
