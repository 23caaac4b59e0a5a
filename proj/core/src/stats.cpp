#include "fitscape/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fitscape/error.hpp"

namespace fitscape::stats {

namespace {

void require_sample(std::span<const double> s, const char* name) {
  if (s.empty()) throw InvalidParameter(std::string("sample ") + name + " is empty");
  if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidParameter(std::string("sample ") + name + " holds non-finite values");
  }
}

std::vector<double> pooled(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return all;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double mean_rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double mann_whitney_statistic(std::span<const double> a, std::span<const double> b) {
  const auto ranks = average_ranks(pooled(a, b));
  const double n1 = static_cast<double>(a.size());
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  return rank_sum - n1 * (n1 + 1.0) / 2.0;
}

double mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  require_sample(a, "a");
  require_sample(b, "b");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  auto all = pooled(a, b);
  const double u = mann_whitney_statistic(a, b);

  std::sort(all.begin(), all.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) return 1.0;

  const double mean = n1 * n2 / 2.0;
  const double diff = std::max(0.0, std::abs(u - mean) - 0.5);
  const double z = diff / std::sqrt(variance);
  return std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
}

double mann_whitney_u_exact(std::span<const double> a, std::span<const double> b) {
  require_sample(a, "a");
  require_sample(b, "b");
  const std::size_t n1 = a.size();
  const std::size_t n = n1 + b.size();
  if (n > 24) throw InvalidParameter("exact U test limited to 24 pooled values");

  const auto all = pooled(a, b);
  const auto ranks = average_ranks(all);
  const double mean_rank_sum = static_cast<double>(n1) * static_cast<double>(n + 1) / 2.0;
  const double observed =
      std::abs(std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0) -
               mean_rank_sum);

  // Walk every n1-subset of positions via a selection mask.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n1), true);
  std::size_t total = 0;
  std::size_t extreme = 0;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) s += ranks[i];
    }
    ++total;
    if (std::abs(s - mean_rank_sum) >= observed - 1e-9) ++extreme;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double vargha_delaney_a12(std::span<const double> a, std::span<const double> b) {
  require_sample(a, "a");
  require_sample(b, "b");
  // Counting form; exact in integer halves.
  double wins = 0.0;
  for (const double x : a) {
    for (const double y : b) {
      if (x > y) {
        wins += 1.0;
      } else if (x == y) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidParameter("spearman samples differ in length");
  if (x.size() < 3) throw InvalidParameter("spearman needs at least 3 pairs");
  require_sample(x, "x");
  require_sample(y, "y");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace fitscape::stats
