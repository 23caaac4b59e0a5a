#pragma once

// Fitness-landscape measures computed over a recorded fitness walk.
//
// A walk is the sequence of fitness values one target received at each step
// of a random walk. Ruggedness is probed by autocorrelation (AC), information
// content (IC), partial information content (PIC) and density-basin
// information (DBI); neutrality by neutrality distance (ND) and neutrality
// volume (NV). The entropy-based measures operate on a three-letter symbol
// string derived from consecutive fitness changes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fitscape::metrics {

// Ordered fitness values in [0, 1], one per step. Never empty.
class FitnessWalk {
 public:
  // Throws InvalidWalk if `values` is empty or holds a value outside [0, 1].
  explicit FitnessWalk(std::vector<double> values);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const FitnessWalk&, const FitnessWalk&) = default;

 private:
  std::vector<double> values_;
};

enum class Symbol : std::int8_t { Neg = -1, Zero = 0, Pos = 1 };

struct SymbolSequence {
  std::vector<Symbol> symbols;
  double epsilon = 0.0;
};

struct MetricReport {
  double ac = 0.0;
  double nd = 0.0;
  double nv = 0.0;
  double ic = 0.0;
  double pic = 0.0;
  double dbi = 0.0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// f[t] - f[t-1] for t = 1..k-1. Throws InvalidWalk when k < 2.
[[nodiscard]] std::vector<double> delta_series(const FitnessWalk& walk);

// Maps each change to Neg (x < -eps), Zero (|x| <= eps) or Pos (x > eps).
// Throws InvalidParameter for a negative or non-finite epsilon.
[[nodiscard]] SymbolSequence symbolize(std::span<const double> deltas, double epsilon);

// Lag-`step` autocorrelation normalised by the total variance of the walk.
// A constant walk has zero variance and is defined to correlate perfectly
// (returns 1.0). Throws InvalidParameter unless 1 <= step <= k-1.
[[nodiscard]] double autocorrelation(const FitnessWalk& walk, std::size_t step = 1);

// Longest run of consecutive equal values divided by k. Exact equality.
[[nodiscard]] double neutrality_distance(const FitnessWalk& walk);

// Number of maximal runs of equal values divided by k.
[[nodiscard]] double neutrality_volume(const FitnessWalk& walk);

// Entropy (base 6) of the six unequal consecutive symbol pairs.
// Throws InvalidParameter for fewer than two symbols.
[[nodiscard]] double information_content(std::span<const Symbol> symbols);

// Length of the string left after dropping every Zero and then collapsing
// adjacent repeats, divided by the original length.
// Throws InvalidParameter for an empty sequence.
[[nodiscard]] double partial_information_content(std::span<const Symbol> symbols);

// Entropy (base 3) of the three equal consecutive symbol pairs.
// Throws InvalidParameter for fewer than two symbols.
[[nodiscard]] double density_basin_information(std::span<const Symbol> symbols);

// All six measures on one walk. Epsilon only affects IC, PIC and DBI.
// Requires k >= 2.
[[nodiscard]] MetricReport compute_all(const FitnessWalk& walk, double epsilon = 0.0,
                                       std::size_t ac_step = 1);

}  // namespace fitscape::metrics
