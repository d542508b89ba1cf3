#pragma once

#include <vector>

namespace hyperncs::stats {

/// Fractional (average) ranks, 1-based; ties share the mean of their span.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Spearman's rho: Pearson correlation of average ranks. Throws on size
/// mismatch, fewer than two observations, or a constant input (undefined).
/// Identical rank vectors short-circuit to exactly 1.0.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

/// Kendall's tau-b (tie adjusted), by pairwise comparison. Same error
/// conditions as spearman_rho.
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hyperncs::stats
