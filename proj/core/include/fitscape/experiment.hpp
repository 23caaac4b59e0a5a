#pragma once

// Experiment protocol: repeated seeded runs of both algorithms on every
// program, per-branch walk extraction, filtering, difficulty grouping and
// aggregation of landscape measures over the random-walk runs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fitscape/metrics.hpp"
#include "fitscape/search.hpp"
#include "fitscape/sut.hpp"

namespace fitscape::experiment {

enum class Algorithm : std::uint8_t { RandomWalk, Mio };

[[nodiscard]] std::string_view to_string(Algorithm a) noexcept;  // "RW" / "MIO"
// Accepts "rw"/"mio" in any case. Throws InvalidParameter otherwise.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct RunRecord {
  std::string program;
  Algorithm algorithm = Algorithm::RandomWalk;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t targets = 0;
  std::vector<double> heuristics;  // steps x targets, row-major
  std::vector<bool> covered;       // per target, covered at some step
  std::vector<bool> reached;       // per branch, reached at some step
  std::size_t evaluations = 0;
  std::size_t actions_executed = 0;

  [[nodiscard]] double at(std::size_t step, std::size_t target) const {
    return heuristics[step * targets + target];
  }
  [[nodiscard]] std::size_t covered_count() const;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ExperimentConfig {
  std::size_t runs = 30;
  std::size_t budget = 1000;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
  // Population bound, sampling probability, focus start and mutation
  // parameters; budget and seed are overridden per run.
  search::SearchConfig search;
  // When set, every record is written to <dir>/<program>/<algo>_<run>.csv.gz.
  std::optional<std::filesystem::path> records_dir;

  void validate() const;
};

// Deterministic per-run seed from (base seed, program, algorithm, run index).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view program,
                                        Algorithm algorithm, std::size_t run);

[[nodiscard]] RunRecord run_once(const sut::Program& program, Algorithm algorithm,
                                 std::size_t run, const ExperimentConfig& config);

// runs x |algorithms| x |programs| independent runs, ordered by program,
// then algorithm, then run index regardless of `jobs`. Throws IoError when a
// record cannot be persisted, after writing <records_dir>/partial_manifest.json
// listing the records that were written.
[[nodiscard]] std::vector<RunRecord> run_experiment(const std::vector<sut::Program>& programs,
                                                    const std::vector<Algorithm>& algorithms,
                                                    const ExperimentConfig& config);

// Columnar text: header `step,target_id,heuristic`, one row per cell.
[[nodiscard]] std::filesystem::path record_path(const std::filesystem::path& dir,
                                                const RunRecord& record);
void write_run_record(const RunRecord& record, const std::filesystem::path& file);
// Restores the matrix; coverage and reach are derived from it. Metadata
// fields that the file does not carry (program, algorithm, run, seed) are
// taken from the arguments.
[[nodiscard]] RunRecord read_run_record(const std::filesystem::path& file, const sut::Program& program,
                                        Algorithm algorithm, std::size_t run, std::uint64_t seed);

// Fraction of runs in which `target` was covered. Throws InvalidParameter
// on an empty record set.
[[nodiscard]] double success_rate(std::span<const RunRecord* const> records, std::size_t target);

enum class Group : std::uint8_t { Easy, Hard, Search, RW, Excluded, Ungrouped };
enum class Exclusion : std::uint8_t { None, NeverReached, NeverCovered };

[[nodiscard]] std::string_view to_string(Group g) noexcept;
[[nodiscard]] std::string_view to_string(Exclusion e) noexcept;

// A rate of exactly 0.5 counts as success.
[[nodiscard]] Group classify_group(double sr_rw, double sr_mio);

struct AggregateMetrics {
  metrics::MetricReport mean;
  double distinct_mean = 0.0;
  std::size_t runs = 0;
};

struct BranchStats {
  std::string program;
  std::size_t branch = 0;
  std::string label;
  sut::PredicateKind kind = sut::PredicateKind::IntInt;
  sut::BranchClass classification = sut::BranchClass::IntegerInteger;
  std::size_t designated_target = 0;  // lower pooled success rate; then-target on ties
  std::size_t reached_runs = 0;       // over all runs of both algorithms
  std::size_t covered_runs = 0;       // designated target, all runs
  std::size_t total_runs = 0;
  std::optional<double> sr_rw;        // designated target
  std::optional<double> sr_mio;
  Group group = Group::Excluded;
  Exclusion exclusion = Exclusion::None;
  std::optional<AggregateMetrics> landscape;  // RW walks of included branches

  [[nodiscard]] bool designated_then() const noexcept {
    return designated_target == sut::then_target_of(branch);
  }
  [[nodiscard]] bool included() const noexcept { return exclusion == Exclusion::None; }
};

struct TargetStats {
  std::string program;
  std::size_t target = 0;
  std::size_t branch = 0;
  bool then_outcome = true;
  std::size_t reached_runs = 0;
  std::size_t covered_runs = 0;
  std::size_t total_runs = 0;
  std::optional<double> sr_rw;
  std::optional<double> sr_mio;
  Exclusion exclusion = Exclusion::None;
};

struct ProgramAnalysis {
  std::string program;
  std::vector<BranchStats> branches;
  std::vector<TargetStats> targets;
  std::vector<double> coverage_rw;   // covered targets per RW run
  std::vector<double> coverage_mio;  // covered targets per MIO run
  std::vector<double> actions_rw;
  std::vector<double> actions_mio;
};

struct AnalysisConfig {
  double epsilon = 0.0;
  std::size_t ac_lag = 1;
};

// Excludes branches never reached in any run, then branches whose designated
// target was never covered; returns the indices of the remaining branches.
std::vector<std::size_t> filter_branches(std::vector<BranchStats>& stats);

// Per-step heuristic series of each listed branch's target, one walk per
// entry of `targets`.
[[nodiscard]] std::vector<metrics::FitnessWalk> branch_walks(const RunRecord& record,
                                                             std::span<const std::size_t> targets);

[[nodiscard]] std::size_t distinct_fitness_count(const metrics::FitnessWalk& walk);

// Mean of each measure over the walks (one per RW run), plus the mean
// number of distinct values. Throws InvalidParameter on an empty span.
[[nodiscard]] AggregateMetrics aggregate(std::span<const metrics::FitnessWalk> walks,
                                         const AnalysisConfig& config);

// Full per-program analysis. Records are matched to programs by name; MIO
// runs only feed success rates and grouping.
[[nodiscard]] std::vector<ProgramAnalysis> analyze(const std::vector<sut::Program>& programs,
                                                   const std::vector<RunRecord>& records,
                                                   const AnalysisConfig& config);

}  // namespace fitscape::experiment
