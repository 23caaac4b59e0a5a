#pragma once

// Genotype sampling and mutation, per-target populations, and the two search
// algorithms: a random walk that mutates one individual forever, and MIO.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "fitscape/genotype.hpp"
#include "fitscape/sut.hpp"

namespace fitscape::search {

using Rng = std::mt19937_64;

struct MutationConfig {
  double structural_probability = 0.1;  // add/remove an action vs. change a gene
  double null_probability = 0.1;        // sampled references that are null
  double integer_delta_p = 0.1;         // integer step is 1 + Geometric(p)
};

struct SearchConfig {
  std::size_t budget = 1000;             // fitness evaluations
  std::size_t population = 10;           // per-target bound n
  double random_probability = 0.5;       // P_r
  double focused_start = 0.5;            // F, fraction of the budget
  // Decay P_r to 0 and n to 1 linearly until F. When false both stay fixed.
  bool update_parameters = true;
  std::uint64_t seed = 0;
  MutationConfig mutation;

  // Throws InvalidParameter when a field is out of its declared range.
  void validate() const;
};

[[nodiscard]] GeneValue sample_gene(const GeneSpec& spec, Rng& rng, const MutationConfig& cfg = {});
[[nodiscard]] Action sample_action(const std::vector<ActionSchema>& schemas, Rng& rng,
                                   const MutationConfig& cfg = {});

// Uniform action count in [1, 10]; every gene uniform over its domain.
[[nodiscard]] TestCase sample_random(const sut::Program& program, Rng& rng,
                                     const MutationConfig& cfg = {});

// Returns a test differing from `test` in exactly one structural change or one
// gene. Respects the 1..10 action bound and every gene domain.
[[nodiscard]] TestCase mutate(const sut::Program& program, const TestCase& test, Rng& rng,
                              const MutationConfig& cfg = {});

// Best known individuals for one target.
struct Individual {
  TestCase test;
  double heuristic = 0.0;
  std::size_t birth = 0;  // insertion order, used to break ties
};

struct Target {
  std::size_t id = 0;
  bool covered = false;
  std::vector<Individual> population;
};

// Map target id -> covering test.
using Archive = std::map<std::size_t, TestCase>;

// Shared per-target bookkeeping of both algorithms.
class TargetPopulations {
 public:
  explicit TargetPopulations(std::size_t target_count);

  // Adds `test` to the population of every reached target; archives it for
  // newly covered targets and collapses their population; otherwise trims
  // the population to `bound` by dropping the worst (oldest on ties).
  // Returns the number of newly covered targets.
  std::size_t update(const TestCase& test, const sut::EvaluationResult& result,
                     std::size_t bound, Archive& archive);

  // Drops worst individuals of uncovered targets until all fit `bound`.
  void shrink(std::size_t bound);

  // Uncovered targets with a non-empty population, ascending by id.
  [[nodiscard]] std::vector<std::size_t> sampleable() const;

  [[nodiscard]] const Target& target(std::size_t id) const { return targets_.at(id); }
  [[nodiscard]] std::size_t size() const noexcept { return targets_.size(); }

 private:
  static void remove_worst(Target& t);

  std::vector<Target> targets_;
  std::size_t births_ = 0;
};

enum class Origin : std::uint8_t { Random, Mutation };

struct StepEvent {
  std::size_t step = 0;
  const TestCase* test = nullptr;
  const sut::EvaluationResult* result = nullptr;
  Origin origin = Origin::Random;
  // Step whose individual was mutated (RW), if any.
  std::optional<std::size_t> parent_step;
  // Target whose population supplied the parent (MIO), if any.
  std::optional<std::size_t> sampled_target;
  // Population bound in force after this step.
  std::size_t population_bound = 0;
  // Largest population among uncovered targets after this step.
  std::size_t largest_population = 0;
};

using StepObserver = std::function<void(const StepEvent&)>;

struct SearchOutcome {
  Archive archive;
  std::size_t evaluations = 0;
  std::size_t actions_executed = 0;
};

// One random start, then budget-1 mutations of the current individual.
[[nodiscard]] SearchOutcome random_walk(const sut::Program& program, const SearchConfig& config,
                                        const StepObserver& observer = {});

// Many Independent Objective search.
[[nodiscard]] SearchOutcome mio(const sut::Program& program, const SearchConfig& config,
                                const StepObserver& observer = {});

}  // namespace fitscape::search
