#pragma once

// Report rendering for a finished experiment. Every file is produced as a
// string first, so output is a pure function of its inputs.
//
// Files (paths relative to the output directory):
//   branches.csv       one row per branch, with designated target and metric means
//   targets.csv        one row per target
//   groups.csv         metric means per difficulty group
//   programs.csv       per-program reach/exclusion counts and metric means
//   branch_types.csv   success rates per branch classification, with U p-value and A12
//   comparison.csv     per-program target coverage of MIO against RW
//   correlations.csv   Spearman rho of success rate against each measure
//   heatmaps/<program>_rw_<run>.txt   branches x steps matrix of one RW run
//   manifest.json      protocol parameters, seeds, exclusions, file list

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fitscape/experiment.hpp"

namespace fitscape::report {

struct ReportInput {
  const std::vector<sut::Program>* programs = nullptr;
  std::vector<experiment::Algorithm> algorithms;
  experiment::ExperimentConfig experiment;
  experiment::AnalysisConfig analysis;
  const std::vector<experiment::RunRecord>* records = nullptr;
  const std::vector<experiment::ProgramAnalysis>* results = nullptr;
};

// Shortest representation that reads back to the same double.
[[nodiscard]] std::string format_real(double v);

// Relative path -> file content.
using ReportFiles = std::map<std::string, std::string>;

[[nodiscard]] ReportFiles render_reports(const ReportInput& input);

// Writes every rendered file below `dir`, creating directories as needed.
// Throws IoError on failure.
void write_reports(const std::filesystem::path& dir, const ReportFiles& files);

}  // namespace fitscape::report
