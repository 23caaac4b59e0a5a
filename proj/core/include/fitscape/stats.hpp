#pragma once

// Rank-based statistics for comparing algorithms and correlating success
// rates with landscape measures.

#include <optional>
#include <span>
#include <vector>

namespace fitscape::stats {

// Ranks starting at 1; tied values share the mean of their ranks.
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> values);

// Mann-Whitney U statistic of `a` (count of a > b plus half the ties).
[[nodiscard]] double mann_whitney_statistic(std::span<const double> a, std::span<const double> b);

// Two-sided p-value of the Mann-Whitney-Wilcoxon U test using the normal
// approximation with tie and continuity corrections. Returns 1.0 when every
// value in both samples is identical. Throws InvalidParameter on an empty or
// non-finite sample.
[[nodiscard]] double mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Two-sided exact permutation p-value: the share of label assignments whose
// U is at least as far from its mean as the observed one. Enumerates all
// C(|a|+|b|, |a|) splits, so only meant for small samples (|a|+|b| <= 24).
[[nodiscard]] double mann_whitney_u_exact(std::span<const double> a, std::span<const double> b);

// Vargha-Delaney A12: probability that a value drawn from `a` exceeds one
// drawn from `b`, ties counting one half.
[[nodiscard]] double vargha_delaney_a12(std::span<const double> a, std::span<const double> b);

// Spearman rank correlation with mean ranks for ties. Empty when either
// variable has zero rank variance. Throws InvalidParameter unless both
// samples have the same length of at least 3.
[[nodiscard]] std::optional<double> spearman_rho(std::span<const double> x,
                                                 std::span<const double> y);

}  // namespace fitscape::stats
