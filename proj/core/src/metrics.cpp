#include "fitscape/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fitscape/error.hpp"

namespace fitscape::metrics {

namespace {

constexpr std::size_t symbol_index(Symbol s) noexcept {
  return static_cast<std::size_t>(static_cast<int>(s) + 1);
}

// pair_counts[p][q] = number of consecutive blocks "pq".
using PairCounts = std::array<std::array<std::size_t, 3>, 3>;

PairCounts count_pairs(std::span<const Symbol> symbols) {
  PairCounts counts{};
  for (std::size_t i = 1; i < symbols.size(); ++i) {
    ++counts[symbol_index(symbols[i - 1])][symbol_index(symbols[i])];
  }
  return counts;
}

// -sum P log_base P over the selected cells; 0 log 0 is taken as 0.
template <typename Select>
double block_entropy(std::span<const Symbol> symbols, double base, Select select) {
  const auto counts = count_pairs(symbols);
  const auto blocks = static_cast<double>(symbols.size() - 1);
  double h = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = 0; q < 3; ++q) {
      if (!select(p, q) || counts[p][q] == 0) continue;
      const double prob = static_cast<double>(counts[p][q]) / blocks;
      h -= prob * std::log(prob);
    }
  }
  // -0.0 when every selected cell is empty or has P = 1.
  return h == 0.0 ? 0.0 : h / std::log(base);
}

void require_pairs(std::span<const Symbol> symbols, const char* what) {
  if (symbols.size() < 2) {
    throw InvalidParameter(std::string(what) + " needs at least two symbols, got " +
                           std::to_string(symbols.size()));
  }
}

// Calls fn(run_length) for every maximal run of equal values.
template <typename Fn>
void for_each_run(std::span<const double> values, Fn fn) {
  std::size_t run = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] == values[i - 1]) {
      ++run;
    } else {
      fn(run);
      run = 1;
    }
  }
  fn(run);
}

}  // namespace

FitnessWalk::FitnessWalk(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidWalk("fitness walk is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidWalk("fitness value at step " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

std::vector<double> delta_series(const FitnessWalk& walk) {
  if (walk.size() < 2) throw InvalidWalk("delta series needs a walk of length >= 2");
  const auto v = walk.values();
  std::vector<double> deltas(v.size() - 1);
  for (std::size_t t = 1; t < v.size(); ++t) deltas[t - 1] = v[t] - v[t - 1];
  return deltas;
}

SymbolSequence symbolize(std::span<const double> deltas, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameter("epsilon must be a finite non-negative number");
  }
  SymbolSequence out;
  out.epsilon = epsilon;
  out.symbols.reserve(deltas.size());
  for (const double x : deltas) {
    if (x < -epsilon) {
      out.symbols.push_back(Symbol::Neg);
    } else if (x > epsilon) {
      out.symbols.push_back(Symbol::Pos);
    } else {
      out.symbols.push_back(Symbol::Zero);
    }
  }
  return out;
}

double autocorrelation(const FitnessWalk& walk, std::size_t step) {
  const auto v = walk.values();
  const std::size_t k = v.size();
  if (step < 1 || step >= k) {
    throw InvalidParameter("autocorrelation step must lie in [1, k-1]; got " +
                           std::to_string(step) + " for k=" + std::to_string(k));
  }
  if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end()) return 1.0;

  double mean = 0.0;
  for (const double f : v) mean += f;
  mean /= static_cast<double>(k);

  std::vector<double> dev(k);
  double variance = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    dev[i] = v[i] - mean;
    variance += dev[i] * dev[i];
  }
  double covariance = 0.0;
  for (std::size_t i = 0; i + step < k; ++i) covariance += dev[i] * dev[i + step];
  return std::clamp(covariance / variance, -1.0, 1.0);
}

double neutrality_distance(const FitnessWalk& walk) {
  std::size_t longest = 0;
  for_each_run(walk.values(), [&](std::size_t run) { longest = std::max(longest, run); });
  return static_cast<double>(longest) / static_cast<double>(walk.size());
}

double neutrality_volume(const FitnessWalk& walk) {
  std::size_t regions = 0;
  for_each_run(walk.values(), [&](std::size_t) { ++regions; });
  return static_cast<double>(regions) / static_cast<double>(walk.size());
}

double information_content(std::span<const Symbol> symbols) {
  require_pairs(symbols, "information content");
  return block_entropy(symbols, 6.0, [](std::size_t p, std::size_t q) { return p != q; });
}

double partial_information_content(std::span<const Symbol> symbols) {
  if (symbols.empty()) throw InvalidParameter("partial information content of an empty sequence");
  std::size_t kept = 0;
  Symbol last = Symbol::Zero;
  for (const Symbol s : symbols) {
    if (s == Symbol::Zero || s == last) continue;
    last = s;
    ++kept;
  }
  return static_cast<double>(kept) / static_cast<double>(symbols.size());
}

double density_basin_information(std::span<const Symbol> symbols) {
  require_pairs(symbols, "density-basin information");
  return block_entropy(symbols, 3.0, [](std::size_t p, std::size_t q) { return p == q; });
}

MetricReport compute_all(const FitnessWalk& walk, double epsilon, std::size_t ac_step) {
  const auto deltas = delta_series(walk);
  const auto seq = symbolize(deltas, epsilon);
  MetricReport r;
  r.ac = autocorrelation(walk, ac_step);
  r.nd = neutrality_distance(walk);
  r.nv = neutrality_volume(walk);
  // A two-step walk has a single symbol and no consecutive block.
  if (seq.symbols.size() >= 2) {
    r.ic = information_content(seq.symbols);
    r.dbi = density_basin_information(seq.symbols);
  }
  r.pic = partial_information_content(seq.symbols);
  return r;
}

}  // namespace fitscape::metrics
