// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fitscape/corpus.hpp"
#include "fitscape/experiment.hpp"
#include "fitscape/metrics.hpp"
#include "fitscape/report.hpp"
#include "fitscape/stats.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fitscape;
using experiment::Algorithm;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Shared full-corpus experiment at the default protocol.
struct Experiment {
  std::vector<sut::Program> programs;
  std::vector<Algorithm> algorithms{Algorithm::RandomWalk, Algorithm::Mio};
  experiment::ExperimentConfig config;
  experiment::AnalysisConfig analysis;
  std::vector<experiment::RunRecord> records;
  std::vector<experiment::ProgramAnalysis> results;

  Experiment(std::vector<sut::Program> p, std::uint64_t seed, std::size_t jobs,
             std::optional<fs::path> dir = {})
      : programs(std::move(p)) {
    config.base_seed = seed;
    config.jobs = jobs;
    if (dir) config.records_dir = *dir / "records";
    records = experiment::run_experiment(programs, algorithms, config);
    results = experiment::analyze(programs, records, analysis);
  }

  report::ReportFiles render() const {
    report::ReportInput in;
    in.programs = &programs;
    in.algorithms = algorithms;
    in.experiment = config;
    in.analysis = analysis;
    in.records = &records;
    in.results = &results;
    return report::render_reports(in);
  }

  const experiment::ProgramAnalysis& program(const std::string& name) const {
    for (const auto& pa : results) {
      if (pa.program == name) return pa;
    }
    throw std::runtime_error("no results for " + name);
  }
};

std::vector<double> random_walk_values(std::mt19937_64& rng, std::size_t k, int shape) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution stay(0.7);
  std::uniform_int_distribution<int> level(0, 3);
  std::vector<double> v(k);
  double current = unit(rng);
  for (std::size_t i = 0; i < k; ++i) {
    switch (shape) {
      case 0: current = unit(rng); break;                               // white noise
      case 1: if (!stay(rng)) current = unit(rng); break;               // plateaus
      case 2: if (!stay(rng)) current = level(rng) / 3.0; break;        // few levels
      default: current = std::clamp(current + (unit(rng) - 0.5) * 0.05, 0.0, 1.0); break;
    }
    v[i] = current;
  }
  return v;
}

Outcome criterion1() {
  Outcome o;
  const std::vector<double> v{0.3, 0.3, 0.3, 0.2, 0.2, 0.7, 0.7};
  const auto r = metrics::compute_all(metrics::FitnessWalk(v), 0.0, 1);
  const auto sym = oracle::symbols(oracle::deltas(v), 0.0);
  o.require(r.nv == 3.0 / 7.0, "NV == 3/7 exactly (got " + fmt(r.nv, 17) + ")");
  const double ac = oracle::autocorrelation_exact({3, 3, 3, 2, 2, 7, 7}, 1).value();
  o.require(std::abs(ac - 517.0 / 1414.0) < 1e-15, "rational oracle AC == 517/1414");
  o.require(std::abs(r.ac - ac) <= 1e-9, "AC(1)");
  o.require(std::abs(r.nd - oracle::neutrality_distance(v)) <= 1e-9, "ND");
  o.require(std::abs(r.ic - oracle::information_content(sym)) <= 1e-9, "IC");
  o.require(std::abs(r.pic - oracle::partial_information_content(sym)) <= 1e-9, "PIC");
  o.require(std::abs(r.dbi - oracle::density_basin_information(sym)) <= 1e-9, "DBI");
  o.note("nv=" + fmt(r.nv, 10) + " nd=" + fmt(r.nd, 10) + " ic=" + fmt(r.ic, 10) +
         " pic=" + fmt(r.pic, 10) + " dbi=" + fmt(r.dbi, 10) + " ac=" + fmt(r.ac, 10));
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = random_walk_values(rng, 1000, i % 4);
    const auto r = metrics::compute_all(metrics::FitnessWalk(v), 0.0, 1);
    const auto sym = oracle::symbols(oracle::deltas(v), 0.0);
    const double diffs[] = {std::abs(r.ac - oracle::autocorrelation(v, 1)),
                            std::abs(r.nd - oracle::neutrality_distance(v)),
                            std::abs(r.nv - oracle::neutrality_volume(v)),
                            std::abs(r.ic - oracle::information_content(sym)),
                            std::abs(r.pic - oracle::partial_information_content(sym)),
                            std::abs(r.dbi - oracle::density_basin_information(sym))};
    for (double d : diffs) worst = std::max(worst, d);
  }
  o.require(worst <= 1e-9, "max deviation " + fmt(worst) + " > 1e-9");
  o.note("1000 walks x 1000 steps, max |production - oracle| = " + fmt(worst));
  return o;
}

Outcome criterion3(const Experiment& e) {
  Outcome o;
  std::size_t evaluations = 0;
  bool shapes = true;
  for (const auto& r : e.records) {
    evaluations += r.evaluations;
    shapes = shapes && r.steps == e.config.budget && r.heuristics.size() == r.steps * r.targets;
  }
  const std::size_t expected =
      e.config.runs * e.algorithms.size() * e.programs.size() * e.config.budget;
  o.require(e.records.size() == e.config.runs * e.algorithms.size() * e.programs.size(),
            "record count");
  o.require(evaluations == expected, "evaluation counter");
  o.require(expected == 360000, "default protocol is 30 x 2 x 6 x 1000");
  o.require(shapes, "matrix shape");
  o.note(std::to_string(e.records.size()) + " records, " + std::to_string(evaluations) +
         " evaluations");
  return o;
}

metrics::MetricReport flag_means(const experiment::ProgramAnalysis& pa, std::size_t& n) {
  metrics::MetricReport m;
  n = 0;
  for (const auto& b : pa.branches) {
    if (!b.included() || !b.landscape) continue;
    ++n;
    m.nd += b.landscape->mean.nd;
    m.nv += b.landscape->mean.nv;
    m.ic += b.landscape->mean.ic;
    m.pic += b.landscape->mean.pic;
    m.dbi += b.landscape->mean.dbi;
  }
  const double k = static_cast<double>(n);
  m.nd /= k;
  m.nv /= k;
  m.ic /= k;
  m.pic /= k;
  m.dbi /= k;
  return m;
}

Outcome criterion4(const Experiment& seed0) {
  Outcome o;
  for (std::uint64_t seed : {0, 1, 2}) {
    std::optional<Experiment> own;
    if (seed != 0) own.emplace(std::vector<sut::Program>{sut::corpus_program("flags")}, seed, 1);
    const auto& pa = (seed == 0 ? seed0 : *own).program("flags");
    std::size_t n = 0;
    const auto m = flag_means(pa, n);
    const std::string s = "seed " + std::to_string(seed);
    o.require(n > 0, s + " has included branches");
    o.require(m.nd >= 0.8, s + " ND >= 0.8");
    o.require(m.nv <= 0.02, s + " NV <= 0.02");
    o.require(m.ic <= 0.2, s + " IC <= 0.2");
    o.require(m.pic <= 0.02, s + " PIC <= 0.02");
    o.require(m.dbi <= 0.1, s + " DBI <= 0.1");
    o.note(s + ": n=" + std::to_string(n) + " nd=" + fmt(m.nd) + " nv=" + fmt(m.nv) +
           " ic=" + fmt(m.ic) + " pic=" + fmt(m.pic) + " dbi=" + fmt(m.dbi));
  }
  return o;
}

Outcome criterion5(const Experiment& e) {
  Outcome o;
  using SrOf = std::function<double(const experiment::BranchStats&)>;
  const std::pair<const char*, SrOf> rates[] = {
      {"mio", [](const experiment::BranchStats& b) { return *b.sr_mio; }},
      {"rw", [](const experiment::BranchStats& b) { return *b.sr_rw; }},
      {"pooled",
       [](const experiment::BranchStats& b) {
         return static_cast<double>(b.covered_runs) / static_cast<double>(b.total_runs);
       }}};
  for (const auto& [name, sr_of] : rates) {
    std::vector<double> sr, nd, nv;
    for (const auto& pa : e.results) {
      for (const auto& b : pa.branches) {
        if (!b.included() || !b.landscape) continue;
        sr.push_back(sr_of(b));
        nd.push_back(b.landscape->mean.nd);
        nv.push_back(b.landscape->mean.nv);
      }
    }
    const auto rho_nd = stats::spearman_rho(sr, nd);
    const auto rho_nv = stats::spearman_rho(sr, nv);
    o.require(rho_nd && *rho_nd < 0.0, std::string(name) + " rho(SR,ND) < 0");
    o.require(rho_nv && *rho_nv > 0.0, std::string(name) + " rho(SR,NV) > 0");
    o.note(std::string(name) + " SR: n=" + std::to_string(sr.size()) +
           " rho_nd=" + (rho_nd ? fmt(*rho_nd) : "NA") + " rho_nv=" + (rho_nv ? fmt(*rho_nv) : "NA"));
  }
  return o;
}

Outcome criterion6(const Experiment& e) {
  Outcome o;
  const auto& numeric = e.program("numeric");
  const double a12 = stats::vargha_delaney_a12(numeric.coverage_mio, numeric.coverage_rw);
  const double p = stats::mann_whitney_u(numeric.coverage_mio, numeric.coverage_rw);
  o.require(a12 >= 0.6, "numeric A12 >= 0.6");
  o.require(p < 0.05, "numeric p < 0.05");
  const auto& flags = e.program("flags");
  const double fa12 = stats::vargha_delaney_a12(flags.coverage_mio, flags.coverage_rw);
  o.require(fa12 >= 0.35 && fa12 <= 0.65, "flags A12 in [0.35, 0.65]");
  o.note("numeric A12=" + fmt(a12) + " p=" + fmt(p) + "; flags A12=" + fmt(fa12));
  return o;
}

Outcome criterion7(const Experiment& e) {
  Outcome o;
  double zero_sum = 0.0, int_sum = 0.0;
  std::size_t zero_walks = 0, int_walks = 0;
  for (const auto& pa : e.results) {
    for (const auto& b : pa.branches) {
      if (!b.included() || !b.landscape) continue;
      const double total = b.landscape->distinct_mean * static_cast<double>(b.landscape->runs);
      if (b.classification == sut::BranchClass::IntegerZero) {
        zero_sum += total;
        zero_walks += b.landscape->runs;
      }
      if (pa.program == "numeric" && b.kind == sut::PredicateKind::IntInt) {
        int_sum += total;
        int_walks += b.landscape->runs;
      }
    }
  }
  o.require(zero_walks > 0 && int_walks > 0, "both populations non-empty");
  const double zero_mean = zero_sum / static_cast<double>(zero_walks);
  const double int_mean = int_sum / static_cast<double>(int_walks);
  o.require(zero_mean <= 3.0, "Integer_Zero mean distinct <= 3");
  o.require(int_mean > zero_mean, "numeric IntInt mean distinct greater");
  o.note("Integer_Zero " + fmt(zero_mean) + " over " + std::to_string(zero_walks) +
         " walks; numeric IntInt " + fmt(int_mean) + " over " + std::to_string(int_walks) + " walks");
  return o;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(entry.path(), dir).generic_string()] = s.str();
  }
  return files;
}

Outcome criterion8(const Experiment& first, const fs::path& first_dir, const fs::path& second_dir) {
  Outcome o;
  report::write_reports(first_dir, first.render());
  const Experiment second(sut::corpus(), first.config.base_seed, 2, second_dir);
  report::write_reports(second_dir, second.render());
  const auto a = tree(first_dir);
  const auto b = tree(second_dir);
  o.require(a.size() > 0 && a.size() == b.size(), "same file set");
  std::size_t differing = 0;
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != content) ++differing;
  }
  o.require(differing == 0, std::to_string(differing) + " files differ");
  std::size_t bytes = 0;
  for (const auto& [name, content] : a) bytes += content.size();
  o.note(std::to_string(a.size()) + " files (" + std::to_string(bytes) +
         " bytes) identical across jobs=1 and jobs=2");
  return o;
}

Outcome criterion9() {
  Outcome o;
  using V = std::vector<double>;
  o.require(stats::vargha_delaney_a12(V{1, 2, 3}, V{1, 2, 3}) == 0.5, "A12(identical) = 0.5");
  o.require(stats::vargha_delaney_a12(V{5, 6, 7}, V{1, 2, 3}) == 1.0, "A12(dominant) = 1");
  o.require(stats::vargha_delaney_a12(V{1, 2}, V{2, 3}) == 0.125, "A12([1,2],[2,3]) = 0.125");
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    V a(8), b(8);
    for (auto& x : a) x = normal(rng) + 0.5 * (trial % 4);
    for (auto& x : b) x = normal(rng);
    worst = std::max(worst, std::abs(stats::mann_whitney_u(a, b) - oracle::exact_u_pvalue(a, b)));
  }
  o.require(worst <= 0.02, "U test vs exact enumeration within 0.02");
  const auto up = stats::spearman_rho(V{1, 2, 3, 4, 5}, V{3, 9, 27, 81, 243});
  const auto down = stats::spearman_rho(V{1, 2, 3, 4, 5}, V{5, 4, 3, 2, 1});
  o.require(up && *up == 1.0, "Spearman monotone increasing = 1");
  o.require(down && *down == -1.0, "Spearman monotone decreasing = -1");
  o.note("max |normal - exact| at n=m=8 over 100 samples = " + fmt(worst));
  return o;
}

}  // namespace

int main() {
  const auto base = fs::temp_directory_path() / "fitscape_acceptance";
  fs::remove_all(base);
  const auto first_dir = base / "jobs1";
  const auto second_dir = base / "jobs2";

  int failures = 0;
  const auto report = [&](int id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%s] (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "metric values of the reference walk", criterion1);
  report(2, "oracle equivalence on random walks", criterion2);

  std::optional<Experiment> full;
  const auto start = std::chrono::steady_clock::now();
  try {
    full.emplace(sut::corpus(), 0, 1, first_dir);
  } catch (const std::exception& e) {
    std::printf("full-corpus experiment failed: %s\n", e.what());
  }
  std::printf("full-corpus experiment: %.2fs\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  const auto need = [&](auto f) {
    return [&, f]() -> Outcome {
      if (!full) throw std::runtime_error("full-corpus experiment unavailable");
      return f(*full);
    };
  };

  report(3, "protocol evaluation count", need(criterion3));
  report(4, "flag program landscape regime", need(criterion4));
  report(5, "success rate against neutrality", need(criterion5));
  report(6, "MIO against RW coverage", need(criterion6));
  report(7, "plateau distinct-value counts", need(criterion7));
  report(8, "byte-identical reports across parallelism",
         need([&](const Experiment& e) { return criterion8(e, first_dir, second_dir); }));
  report(9, "statistics anchors", criterion9);

  std::error_code ec;
  fs::remove_all(base, ec);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
