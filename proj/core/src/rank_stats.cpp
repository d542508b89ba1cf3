#include "hyperncs/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hyperncs::stats {

namespace {

void check_inputs(const std::vector<double>& a, const std::vector<double>& b,
                  const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  }
  if (a.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": need at least 2 values");
  }
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b)) {
    throw std::invalid_argument(std::string(what) +
                                ": correlation undefined for constant input");
  }
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& a,
                    const std::vector<double>& b) {
  check_inputs(a, b, "spearman_rho");
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  if (ra == rb) return 1.0;
  const size_t n = ra.size();
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  return cov / std::sqrt(var_a * var_b);
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  check_inputs(a, b, "kendall_tau");
  const size_t n = a.size();
  long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 && db == 0.0) continue;  // tied in both: dropped by tau-b
      if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if (da * db > 0.0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0a = static_cast<double>(concordant + discordant + ties_a);
  const double n0b = static_cast<double>(concordant + discordant + ties_b);
  if (n0a == 0.0 || n0b == 0.0) {
    throw std::invalid_argument("kendall_tau: correlation undefined (all ties)");
  }
  return static_cast<double>(concordant - discordant) / std::sqrt(n0a * n0b);
}

}  // namespace hyperncs::stats
