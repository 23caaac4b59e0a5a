#include "fitscape/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "fitscape/error.hpp"

namespace fitscape::experiment {

std::string_view to_string(Algorithm a) noexcept {
  return a == Algorithm::RandomWalk ? "RW" : "MIO";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rw") return Algorithm::RandomWalk;
  if (lower == "mio") return Algorithm::Mio;
  throw InvalidParameter("unknown algorithm '" + std::string(name) + "' (expected rw or mio)");
}

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::Easy: return "Easy";
    case Group::Hard: return "Hard";
    case Group::Search: return "Search";
    case Group::RW: return "RW";
    case Group::Excluded: return "Excluded";
    case Group::Ungrouped: return "Ungrouped";
  }
  return "?";
}

std::string_view to_string(Exclusion e) noexcept {
  switch (e) {
    case Exclusion::None: return "";
    case Exclusion::NeverReached: return "never-reached";
    case Exclusion::NeverCovered: return "never-covered";
  }
  return "?";
}

std::size_t RunRecord::covered_count() const {
  return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw InvalidParameter("runs must be at least 1");
  if (budget < 2) throw InvalidParameter("steps must be at least 2");
  if (jobs < 1) throw InvalidParameter("jobs must be at least 1");
  auto s = search;
  s.budget = budget;
  s.validate();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view program, Algorithm algorithm,
                          std::size_t run) {
  std::uint64_t s = splitmix64(base_seed ^ fnv1a(program));
  s = splitmix64(s ^ (static_cast<std::uint64_t>(algorithm) + 1));
  return splitmix64(s ^ static_cast<std::uint64_t>(run));
}

RunRecord run_once(const sut::Program& program, Algorithm algorithm, std::size_t run,
                   const ExperimentConfig& config) {
  RunRecord rec;
  rec.program = program.name();
  rec.algorithm = algorithm;
  rec.run = run;
  rec.seed = derive_seed(config.base_seed, program.name(), algorithm, run);
  rec.steps = config.budget;
  rec.targets = program.target_count();
  rec.heuristics.assign(rec.steps * rec.targets, 0.0);
  rec.covered.assign(rec.targets, false);
  rec.reached.assign(program.branches().size(), false);

  search::SearchConfig sc = config.search;
  sc.budget = config.budget;
  sc.seed = rec.seed;

  const auto observe = [&](const search::StepEvent& ev) {
    const auto& h = ev.result->heuristics;
    std::copy(h.begin(), h.end(),
              rec.heuristics.begin() + static_cast<std::ptrdiff_t>(ev.step * rec.targets));
    for (std::size_t t = 0; t < rec.targets; ++t) {
      if (ev.result->covered[t]) rec.covered[t] = true;
    }
    for (std::size_t b = 0; b < rec.reached.size(); ++b) {
      if (ev.result->reached[b]) rec.reached[b] = true;
    }
  };
  const auto outcome = algorithm == Algorithm::RandomWalk ? search::random_walk(program, sc, observe)
                                                          : search::mio(program, sc, observe);
  rec.evaluations = outcome.evaluations;
  rec.actions_executed = outcome.actions_executed;
  return rec;
}

std::filesystem::path record_path(const std::filesystem::path& dir, const RunRecord& record) {
  std::string algo(to_string(record.algorithm));
  std::transform(algo.begin(), algo.end(), algo.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return dir / record.program / (algo + "_" + std::to_string(record.run) + ".csv.gz");
}

namespace {

class GzWriter {
 public:
  explicit GzWriter(const std::filesystem::path& file) : file_(file) {
    handle_ = gzopen(file.string().c_str(), "wb6");
    if (handle_ == nullptr) throw IoError("cannot open " + file.string() + " for writing");
  }
  GzWriter(const GzWriter&) = delete;
  GzWriter& operator=(const GzWriter&) = delete;
  ~GzWriter() {
    if (handle_ != nullptr) gzclose(handle_);
  }

  void write(std::string_view s) {
    if (s.empty()) return;
    if (gzwrite(handle_, s.data(), static_cast<unsigned>(s.size())) != static_cast<int>(s.size())) {
      throw IoError("write failed for " + file_.string());
    }
  }

  void close() {
    const int rc = gzclose(handle_);
    handle_ = nullptr;
    if (rc != Z_OK) throw IoError("closing " + file_.string() + " failed");
  }

 private:
  std::filesystem::path file_;
  gzFile handle_ = nullptr;
};

void append_number(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

void append_number(std::string& out, std::size_t v) {
  char buf[24];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

}  // namespace

void write_run_record(const RunRecord& record, const std::filesystem::path& file) {
  GzWriter out(file);
  std::string chunk = "step,target_id,heuristic\n";
  for (std::size_t s = 0; s < record.steps; ++s) {
    for (std::size_t t = 0; t < record.targets; ++t) {
      append_number(chunk, s);
      chunk += ',';
      append_number(chunk, t);
      chunk += ',';
      append_number(chunk, record.at(s, t));
      chunk += '\n';
    }
    if (chunk.size() > (1U << 16U)) {
      out.write(chunk);
      chunk.clear();
    }
  }
  out.write(chunk);
  out.close();
}

RunRecord read_run_record(const std::filesystem::path& file, const sut::Program& program,
                          Algorithm algorithm, std::size_t run, std::uint64_t seed) {
  gzFile in = gzopen(file.string().c_str(), "rb");
  if (in == nullptr) throw IoError("cannot open " + file.string());
  struct Closer {
    gzFile f;
    ~Closer() { gzclose(f); }
  } closer{in};

  RunRecord rec;
  rec.program = program.name();
  rec.algorithm = algorithm;
  rec.run = run;
  rec.seed = seed;
  rec.targets = program.target_count();

  char line[256];
  std::size_t line_no = 0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
  while (gzgets(in, line, sizeof line) != nullptr) {
    ++line_no;
    std::string_view row(line);
    while (!row.empty() && (row.back() == '\n' || row.back() == '\r')) row.remove_suffix(1);
    if (line_no == 1) {
      if (row != "step,target_id,heuristic") throw IoError(file.string() + ": bad header");
      continue;
    }
    if (row.empty()) continue;
    std::size_t step = 0;
    std::size_t target = 0;
    double h = 0.0;
    const char* p = row.data();
    const char* end = row.data() + row.size();
    auto r1 = std::from_chars(p, end, step);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',') {
      throw IoError(file.string() + ": malformed row " + std::to_string(line_no));
    }
    auto r2 = std::from_chars(r1.ptr + 1, end, target);
    if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ',') {
      throw IoError(file.string() + ": malformed row " + std::to_string(line_no));
    }
    auto r3 = std::from_chars(r2.ptr + 1, end, h);
    if (r3.ec != std::errc{} || r3.ptr != end || target >= rec.targets || h < 0.0 || h > 1.0) {
      throw IoError(file.string() + ": malformed row " + std::to_string(line_no));
    }
    cells.emplace_back(step, target, h);
    rec.steps = std::max(rec.steps, step + 1);
  }
  rec.heuristics.assign(rec.steps * rec.targets, 0.0);
  rec.covered.assign(rec.targets, false);
  rec.reached.assign(program.branches().size(), false);
  for (const auto& [step, target, h] : cells) {
    rec.heuristics[step * rec.targets + target] = h;
    if (h == 1.0) rec.covered[target] = true;
    if (h > 0.0) rec.reached[sut::branch_of_target(target)] = true;
  }
  rec.evaluations = rec.steps;
  return rec;
}

std::vector<RunRecord> run_experiment(const std::vector<sut::Program>& programs,
                                      const std::vector<Algorithm>& algorithms,
                                      const ExperimentConfig& config) {
  config.validate();
  struct Task {
    const sut::Program* program;
    Algorithm algorithm;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (const auto& p : programs) {
    for (const Algorithm a : algorithms) {
      for (std::size_t r = 0; r < config.runs; ++r) tasks.push_back({&p, a, r});
    }
  }

  if (config.records_dir) {
    for (const auto& p : programs) {
      std::error_code ec;
      std::filesystem::create_directories(*config.records_dir / p.name(), ec);
      if (ec) throw IoError("cannot create " + (*config.records_dir / p.name()).string());
    }
  }

  std::vector<RunRecord> records(tasks.size());
  std::vector<char> persisted(tasks.size(), 0);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        records[i] = run_once(*tasks[i].program, tasks[i].algorithm, tasks[i].run, config);
        if (config.records_dir) {
          write_run_record(records[i], record_path(*config.records_dir, records[i]));
          persisted[i] = 1;
        }
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(config.jobs, tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (failure) {
    if (config.records_dir) {
      nlohmann::json manifest;
      manifest["complete"] = false;
      manifest["records"] = nlohmann::json::array();
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (persisted[i]) {
          manifest["records"].push_back(
              std::filesystem::relative(record_path(*config.records_dir, records[i]),
                                        *config.records_dir)
                  .generic_string());
        }
      }
      try {
        std::rethrow_exception(failure);
      } catch (const std::exception& e) {
        manifest["error"] = e.what();
      }
      std::ofstream(*config.records_dir / "partial_manifest.json") << manifest.dump(2) << '\n';
    }
    try {
      std::rethrow_exception(failure);
    } catch (const IoError&) {
      throw;
    } catch (const std::filesystem::filesystem_error& e) {
      throw IoError(e.what());
    }
  }
  return records;
}

double success_rate(std::span<const RunRecord* const> records, std::size_t target) {
  if (records.empty()) throw InvalidParameter("success rate needs at least one run");
  std::size_t hits = 0;
  for (const RunRecord* r : records) {
    if (r->covered.at(target)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

Group classify_group(double sr_rw, double sr_mio) {
  const bool rw = sr_rw >= 0.5;
  const bool mio = sr_mio >= 0.5;
  if (rw && mio) return Group::Easy;
  if (!rw && !mio) return Group::Hard;
  return mio ? Group::Search : Group::RW;
}

std::vector<std::size_t> filter_branches(std::vector<BranchStats>& stats) {
  std::vector<std::size_t> included;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    auto& s = stats[i];
    if (s.reached_runs == 0) {
      s.exclusion = Exclusion::NeverReached;
    } else if (s.covered_runs == 0) {
      s.exclusion = Exclusion::NeverCovered;
    } else {
      s.exclusion = Exclusion::None;
      included.push_back(i);
      continue;
    }
    s.group = Group::Excluded;
  }
  return included;
}

std::vector<metrics::FitnessWalk> branch_walks(const RunRecord& record,
                                               std::span<const std::size_t> targets) {
  std::vector<metrics::FitnessWalk> walks;
  walks.reserve(targets.size());
  std::vector<double> column(record.steps);
  for (const std::size_t t : targets) {
    for (std::size_t s = 0; s < record.steps; ++s) column[s] = record.at(s, t);
    walks.emplace_back(column);
  }
  return walks;
}

std::size_t distinct_fitness_count(const metrics::FitnessWalk& walk) {
  const auto v = walk.values();
  return std::set<double>(v.begin(), v.end()).size();
}

AggregateMetrics aggregate(std::span<const metrics::FitnessWalk> walks,
                           const AnalysisConfig& config) {
  if (walks.empty()) throw InvalidParameter("aggregate needs at least one walk");
  AggregateMetrics out;
  auto& m = out.mean;
  for (const auto& w : walks) {
    const auto r = metrics::compute_all(w, config.epsilon, config.ac_lag);
    m.ac += r.ac;
    m.nd += r.nd;
    m.nv += r.nv;
    m.ic += r.ic;
    m.pic += r.pic;
    m.dbi += r.dbi;
    out.distinct_mean += static_cast<double>(distinct_fitness_count(w));
  }
  const double n = static_cast<double>(walks.size());
  m.ac /= n;
  m.nd /= n;
  m.nv /= n;
  m.ic /= n;
  m.pic /= n;
  m.dbi /= n;
  out.distinct_mean /= n;
  out.runs = walks.size();
  return out;
}

std::vector<ProgramAnalysis> analyze(const std::vector<sut::Program>& programs,
                                     const std::vector<RunRecord>& records,
                                     const AnalysisConfig& config) {
  std::vector<ProgramAnalysis> out;
  for (const auto& program : programs) {
    std::vector<const RunRecord*> rw;
    std::vector<const RunRecord*> mio;
    for (const auto& r : records) {
      if (r.program != program.name()) continue;
      (r.algorithm == Algorithm::RandomWalk ? rw : mio).push_back(&r);
    }
    const auto by_run = [](const RunRecord* a, const RunRecord* b) { return a->run < b->run; };
    std::sort(rw.begin(), rw.end(), by_run);
    std::sort(mio.begin(), mio.end(), by_run);
    std::vector<const RunRecord*> all = rw;
    all.insert(all.end(), mio.begin(), mio.end());

    ProgramAnalysis pa;
    pa.program = program.name();
    for (const RunRecord* r : rw) {
      pa.coverage_rw.push_back(static_cast<double>(r->covered_count()));
      pa.actions_rw.push_back(static_cast<double>(r->actions_executed));
    }
    for (const RunRecord* r : mio) {
      pa.coverage_mio.push_back(static_cast<double>(r->covered_count()));
      pa.actions_mio.push_back(static_cast<double>(r->actions_executed));
    }

    const auto count_covered = [&](std::size_t target) {
      return static_cast<std::size_t>(std::count_if(
          all.begin(), all.end(), [&](const RunRecord* r) { return r->covered[target]; }));
    };
    const auto rate = [&](const std::vector<const RunRecord*>& set,
                          std::size_t target) -> std::optional<double> {
      if (set.empty()) return std::nullopt;
      return success_rate(set, target);
    };

    for (const auto& d : program.branches()) {
      const auto reached_runs = static_cast<std::size_t>(std::count_if(
          all.begin(), all.end(), [&](const RunRecord* r) { return r->reached[d.id]; }));
      for (const std::size_t t : {d.then_target, d.else_target}) {
        TargetStats ts;
        ts.program = program.name();
        ts.target = t;
        ts.branch = d.id;
        ts.then_outcome = t == d.then_target;
        ts.reached_runs = reached_runs;
        ts.covered_runs = count_covered(t);
        ts.total_runs = all.size();
        ts.sr_rw = rate(rw, t);
        ts.sr_mio = rate(mio, t);
        ts.exclusion = reached_runs == 0        ? Exclusion::NeverReached
                       : ts.covered_runs == 0 ? Exclusion::NeverCovered
                                              : Exclusion::None;
        pa.targets.push_back(ts);
      }

      BranchStats bs;
      bs.program = program.name();
      bs.branch = d.id;
      bs.label = d.label;
      bs.kind = d.kind;
      bs.classification = d.classification;
      const std::size_t then_hits = count_covered(d.then_target);
      const std::size_t else_hits = count_covered(d.else_target);
      bs.designated_target = else_hits < then_hits ? d.else_target : d.then_target;
      bs.reached_runs = reached_runs;
      bs.covered_runs = std::min(then_hits, else_hits);
      bs.total_runs = all.size();
      bs.sr_rw = rate(rw, bs.designated_target);
      bs.sr_mio = rate(mio, bs.designated_target);
      pa.branches.push_back(std::move(bs));
    }

    for (const std::size_t i : filter_branches(pa.branches)) {
      auto& bs = pa.branches[i];
      bs.group = (bs.sr_rw && bs.sr_mio) ? classify_group(*bs.sr_rw, *bs.sr_mio) : Group::Ungrouped;
      if (rw.empty()) continue;
      std::vector<metrics::FitnessWalk> walks;
      walks.reserve(rw.size());
      const std::size_t target[] = {bs.designated_target};
      for (const RunRecord* r : rw) walks.push_back(std::move(branch_walks(*r, target).front()));
      bs.landscape = aggregate(walks, config);
    }
    out.push_back(std::move(pa));
  }
  return out;
}

}  // namespace fitscape::experiment
