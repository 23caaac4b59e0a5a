#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fitscape/corpus.hpp"
#include "fitscape/error.hpp"
#include "fitscape/experiment.hpp"
#include "fitscape/metrics.hpp"
#include "fitscape/program_format.hpp"
#include "fitscape/report.hpp"

namespace fitscape::cli {

namespace {

struct RunOptions {
  std::vector<std::string> suts{"all"};
  std::vector<std::string> program_files;
  std::vector<std::string> algorithms{"rw", "mio"};
  std::size_t runs = 30;
  std::size_t steps = 1000;
  double epsilon = 0.0;
  std::size_t lag = 1;
  std::uint64_t seed = 0;
  std::string out = "fitscape-out";
  std::size_t jobs = 1;
};

struct MetricsOptions {
  std::string file;
  double epsilon = 0.0;
  std::size_t lag = 1;
};

std::vector<sut::Program> select_programs(const RunOptions& o, bool suts_given) {
  std::vector<sut::Program> programs;
  std::set<std::string> seen;
  const auto add = [&](sut::Program p) {
    if (!seen.insert(p.name()).second) {
      throw InvalidParameter("program '" + p.name() + "' selected twice");
    }
    programs.push_back(std::move(p));
  };
  if (suts_given || o.program_files.empty()) {
    for (const auto& name : o.suts) {
      if (name == "all") {
        for (auto& p : sut::corpus()) add(std::move(p));
      } else {
        add(sut::corpus_program(name));
      }
    }
  }
  for (const auto& file : o.program_files) add(sut::load_program(file));
  return programs;
}

int cmd_run(const RunOptions& o, bool suts_given, std::ostream& out) {
  experiment::ExperimentConfig config;
  config.runs = o.runs;
  config.budget = o.steps;
  config.base_seed = o.seed;
  config.jobs = o.jobs;
  config.validate();

  experiment::AnalysisConfig analysis{o.epsilon, o.lag};
  if (!std::isfinite(o.epsilon) || o.epsilon < 0.0) {
    throw InvalidParameter("epsilon must be a non-negative number");
  }
  if (o.lag < 1 || o.lag >= o.steps) throw InvalidParameter("lag must lie in [1, steps-1]");

  std::vector<experiment::Algorithm> algorithms;
  for (const auto& a : o.algorithms) {
    const auto alg = experiment::parse_algorithm(a);
    if (std::find(algorithms.begin(), algorithms.end(), alg) == algorithms.end()) {
      algorithms.push_back(alg);
    }
  }
  std::sort(algorithms.begin(), algorithms.end());

  const auto programs = select_programs(o, suts_given);
  if (programs.empty()) throw InvalidParameter("no programs selected");

  const std::filesystem::path dir(o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  config.records_dir = dir / "records";

  const auto records = experiment::run_experiment(programs, algorithms, config);
  const auto results = experiment::analyze(programs, records, analysis);

  report::ReportInput input;
  input.programs = &programs;
  input.algorithms = algorithms;
  input.experiment = config;
  input.analysis = analysis;
  input.records = &records;
  input.results = &results;
  const auto files = report::render_reports(input);
  report::write_reports(dir, files);

  std::size_t evaluations = 0;
  for (const auto& r : records) evaluations += r.evaluations;
  out << records.size() << " runs, " << evaluations << " evaluations; " << files.size()
      << " report files written to " << dir.string() << '\n';
  return kExitOk;
}

// Newline-separated reals; blank lines are skipped.
std::vector<double> read_walk(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file);
  std::vector<double> values;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    double v = 0.0;
    const auto r = std::from_chars(token.data(), token.data() + token.size(), v);
    if (r.ec != std::errc{} || r.ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ParseError(file + ":" + std::to_string(n) + ": not a number: '" + std::string(token) +
                       "'");
    }
    values.push_back(v);
  }
  return values;
}

int cmd_metrics(const MetricsOptions& o, std::ostream& out) {
  if (!std::isfinite(o.epsilon) || o.epsilon < 0.0) {
    throw InvalidParameter("epsilon must be a non-negative number");
  }
  const metrics::FitnessWalk walk(read_walk(o.file));
  const auto r = metrics::compute_all(walk, o.epsilon, o.lag);
  nlohmann::ordered_json j;
  j["ac"] = r.ac;
  j["nd"] = r.nd;
  j["nv"] = r.nv;
  j["ic"] = r.ic;
  j["pic"] = r.pic;
  j["dbi"] = r.dbi;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_list(std::ostream& out) {
  for (const auto& p : sut::corpus()) {
    out << p.name() << '\t' << p.branches().size() << " branches\t" << p.description() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fitness landscape analysis of search-based test generation"};
  app.name("fitscape");
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Run RW and MIO on programs and write reports");
  auto* sut_opt = run_cmd->add_option("--sut", ro.suts, "Built-in programs, or 'all'")
                      ->delimiter(',')
                      ->envname("FITSCAPE_SUT");
  run_cmd->add_option("--program-file", ro.program_files, "Extra JSON program definitions");
  run_cmd->add_option("--algo", ro.algorithms, "Algorithms: rw, mio")
      ->delimiter(',')
      ->envname("FITSCAPE_ALGO");
  run_cmd->add_option("--runs", ro.runs, "Independent runs per program and algorithm")
      ->envname("FITSCAPE_RUNS")
      ->capture_default_str();
  run_cmd->add_option("--steps", ro.steps, "Fitness evaluations per run")
      ->envname("FITSCAPE_STEPS")
      ->capture_default_str();
  run_cmd->add_option("--epsilon", ro.epsilon, "Symbolization threshold")
      ->envname("FITSCAPE_EPSILON")
      ->capture_default_str();
  run_cmd->add_option("--lag", ro.lag, "Autocorrelation lag")
      ->envname("FITSCAPE_LAG")
      ->capture_default_str();
  run_cmd->add_option("--seed", ro.seed, "Base seed")->envname("FITSCAPE_SEED")->capture_default_str();
  run_cmd->add_option("--out", ro.out, "Output directory")
      ->envname("FITSCAPE_OUT")
      ->capture_default_str();
  run_cmd->add_option("--jobs", ro.jobs, "Parallel runs")->envname("FITSCAPE_JOBS")->capture_default_str();

  MetricsOptions mo;
  auto* metrics_cmd = app.add_subcommand("metrics", "Print the six landscape measures of a walk file");
  metrics_cmd->add_option("file", mo.file, "Newline-separated fitness values")->required();
  metrics_cmd->add_option("--epsilon", mo.epsilon, "Symbolization threshold")
      ->envname("FITSCAPE_EPSILON")
      ->capture_default_str();
  metrics_cmd->add_option("--lag", mo.lag, "Autocorrelation lag")
      ->envname("FITSCAPE_LAG")
      ->capture_default_str();

  auto* list_cmd = app.add_subcommand("list", "List built-in programs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(ro, sut_opt->count() > 0, out);
    if (metrics_cmd->parsed()) return cmd_metrics(mo, out);
    if (list_cmd->parsed()) return cmd_list(out);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace fitscape::cli
