#include "fitscape/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>

#include <nlohmann/json.hpp>

#include "fitscape/error.hpp"
#include "fitscape/stats.hpp"

namespace fitscape::report {

using experiment::Algorithm;
using experiment::BranchStats;
using experiment::Group;
using experiment::ProgramAnalysis;
using experiment::RunRecord;

std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

namespace {

constexpr double kSignificance = 0.05;

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : "NA"; }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(std::string_view v) { return std::string(v); }

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) { row(header); }

  void row(std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (const auto c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  [[nodiscard]] std::string str() && { return std::move(text_); }

 private:
  std::string text_;
};

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pooled_sr(const BranchStats& b) {
  return b.total_runs == 0 ? 0.0
                           : static_cast<double>(b.covered_runs) / static_cast<double>(b.total_runs);
}

using MeasureGetter = std::function<double(const experiment::AggregateMetrics&)>;

const std::vector<std::pair<std::string_view, MeasureGetter>>& measures() {
  static const std::vector<std::pair<std::string_view, MeasureGetter>> m = {
      {"ac", [](const auto& a) { return a.mean.ac; }},
      {"nd", [](const auto& a) { return a.mean.nd; }},
      {"nv", [](const auto& a) { return a.mean.nv; }},
      {"ic", [](const auto& a) { return a.mean.ic; }},
      {"pic", [](const auto& a) { return a.mean.pic; }},
      {"dbi", [](const auto& a) { return a.mean.dbi; }},
  };
  return m;
}

// Mean of each measure over branches that carry landscape data, then distinct_mean.
std::vector<std::string> measure_means(const std::vector<const BranchStats*>& branches,
                                       bool with_distinct) {
  std::vector<std::string> out;
  std::vector<const experiment::AggregateMetrics*> data;
  for (const auto* b : branches) {
    if (b->landscape) data.push_back(&*b->landscape);
  }
  const auto avg = [&](const MeasureGetter& get) -> std::optional<double> {
    if (data.empty()) return std::nullopt;
    double s = 0.0;
    for (const auto* a : data) s += get(*a);
    return s / static_cast<double>(data.size());
  };
  for (const auto& [name, get] : measures()) out.push_back(cell(avg(get)));
  if (with_distinct) out.push_back(cell(avg([](const auto& a) { return a.distinct_mean; })));
  return out;
}

std::string branches_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"program", "branch", "label", "kind", "classification", "designated_target",
           "designated_outcome", "reached_runs", "covered_runs", "total_runs", "sr_rw", "sr_mio",
           "sr_pooled", "group", "exclusion", "ac", "nd", "nv", "ic", "pic", "dbi",
           "distinct_mean", "walks"});
  for (const auto& pa : results) {
    for (const auto& b : pa.branches) {
      std::vector<std::string> row = {
          b.program,
          cell(b.branch),
          b.label,
          cell(sut::to_string(b.kind)),
          cell(sut::to_string(b.classification)),
          cell(b.designated_target),
          b.designated_then() ? "then" : "else",
          cell(b.reached_runs),
          cell(b.covered_runs),
          cell(b.total_runs),
          cell(b.sr_rw),
          cell(b.sr_mio),
          format_real(pooled_sr(b)),
          cell(experiment::to_string(b.group)),
          b.included() ? "none" : cell(experiment::to_string(b.exclusion)),
      };
      auto m = measure_means({&b}, true);
      row.insert(row.end(), m.begin(), m.end());
      row.push_back(cell(b.landscape ? b.landscape->runs : std::size_t{0}));
      csv.row(row);
    }
  }
  return std::move(csv).str();
}

std::string targets_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"program", "target", "branch", "outcome", "reached_runs", "covered_runs", "total_runs",
           "sr_rw", "sr_mio", "exclusion"});
  for (const auto& pa : results) {
    for (const auto& t : pa.targets) {
      csv.row({t.program, cell(t.target), cell(t.branch), t.then_outcome ? "then" : "else",
               cell(t.reached_runs), cell(t.covered_runs), cell(t.total_runs), cell(t.sr_rw),
               cell(t.sr_mio),
               t.exclusion == experiment::Exclusion::None ? "none"
                                                          : cell(experiment::to_string(t.exclusion))});
    }
  }
  return std::move(csv).str();
}

std::string groups_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"group", "nb", "ac", "nd", "nv", "ic", "pic", "dbi", "distinct_mean"});
  std::vector<const BranchStats*> all;
  for (const auto& pa : results) {
    for (const auto& b : pa.branches) {
      if (b.included()) all.push_back(&b);
    }
  }
  const auto emit = [&](std::string_view name, const std::vector<const BranchStats*>& set) {
    std::vector<std::string> row = {std::string(name), cell(set.size())};
    auto m = measure_means(set, true);
    row.insert(row.end(), m.begin(), m.end());
    csv.row(row);
  };
  for (const Group g : {Group::Easy, Group::Hard, Group::Search, Group::RW, Group::Ungrouped}) {
    std::vector<const BranchStats*> set;
    std::copy_if(all.begin(), all.end(), std::back_inserter(set),
                 [&](const BranchStats* b) { return b->group == g; });
    if (g == Group::Ungrouped && set.empty()) continue;
    emit(experiment::to_string(g), set);
  }
  emit("All", all);
  return std::move(csv).str();
}

std::string programs_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"program", "branches", "reached_branches", "never_covered_branches",
           "included_branches", "targets", "reached_targets", "never_covered_targets", "ac", "nd",
           "nv", "ic", "pic", "dbi"});
  for (const auto& pa : results) {
    std::size_t reached = 0;
    std::size_t never_covered = 0;
    std::vector<const BranchStats*> included;
    for (const auto& b : pa.branches) {
      if (b.reached_runs > 0) ++reached;
      if (b.exclusion == experiment::Exclusion::NeverCovered) ++never_covered;
      if (b.included()) included.push_back(&b);
    }
    std::size_t t_reached = 0;
    std::size_t t_never = 0;
    for (const auto& t : pa.targets) {
      if (t.reached_runs > 0) ++t_reached;
      if (t.exclusion == experiment::Exclusion::NeverCovered) ++t_never;
    }
    std::vector<std::string> row = {pa.program,          cell(pa.branches.size()),
                                    cell(reached),       cell(never_covered),
                                    cell(included.size()), cell(pa.targets.size()),
                                    cell(t_reached),     cell(t_never)};
    auto m = measure_means(included, false);
    row.insert(row.end(), m.begin(), m.end());
    csv.row(row);
  }
  return std::move(csv).str();
}

struct Comparison {
  std::optional<double> p;
  std::optional<double> a12;
};

Comparison compare(const std::vector<double>& mio, const std::vector<double>& rw) {
  if (mio.empty() || rw.empty()) return {};
  return {stats::mann_whitney_u(mio, rw), stats::vargha_delaney_a12(mio, rw)};
}

std::string significance(const Comparison& c) {
  if (!c.p) return "NA";
  return *c.p < kSignificance ? "yes" : "no";
}

std::string branch_types_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"program", "classification", "nb", "never_covered", "sr_rw", "sr_mio", "p_value",
           "a12", "significant"});
  static const sut::BranchClass classes[] = {
      sut::BranchClass::IntegerInteger, sut::BranchClass::IntegerZero,
      sut::BranchClass::ReferenceReference, sut::BranchClass::ReferenceNull};

  const auto emit = [&](std::string_view program, std::string_view cls,
                        const std::vector<const BranchStats*>& set) {
    std::vector<double> rw;
    std::vector<double> mio;
    std::size_t nb = 0;
    std::size_t never = 0;
    for (const auto* b : set) {
      if (b->exclusion == experiment::Exclusion::NeverCovered) ++never;
      if (!b->included()) continue;
      ++nb;
      if (b->sr_rw) rw.push_back(*b->sr_rw);
      if (b->sr_mio) mio.push_back(*b->sr_mio);
    }
    const auto c = compare(mio, rw);
    csv.row({std::string(program), std::string(cls), cell(nb), cell(never), cell(mean(rw)),
             cell(mean(mio)), cell(c.p), cell(c.a12), significance(c)});
  };

  const auto emit_program = [&](std::string_view program,
                                const std::vector<const BranchStats*>& branches) {
    for (const auto cls : classes) {
      std::vector<const BranchStats*> set;
      std::copy_if(branches.begin(), branches.end(), std::back_inserter(set),
                   [&](const BranchStats* b) { return b->classification == cls; });
      emit(program, sut::to_string(cls), set);
    }
    emit(program, "All", branches);
  };

  std::vector<const BranchStats*> everything;
  for (const auto& pa : results) {
    std::vector<const BranchStats*> branches;
    for (const auto& b : pa.branches) branches.push_back(&b);
    everything.insert(everything.end(), branches.begin(), branches.end());
    emit_program(pa.program, branches);
  }
  emit_program("ALL", everything);
  return std::move(csv).str();
}

std::string comparison_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"program", "runs_rw", "runs_mio", "coverage_rw", "coverage_mio", "a12", "p_value",
           "significant", "actions_rw", "actions_mio"});
  for (const auto& pa : results) {
    const auto c = compare(pa.coverage_mio, pa.coverage_rw);
    csv.row({pa.program, cell(pa.coverage_rw.size()), cell(pa.coverage_mio.size()),
             cell(mean(pa.coverage_rw)), cell(mean(pa.coverage_mio)), cell(c.a12), cell(c.p),
             significance(c), cell(mean(pa.actions_rw)), cell(mean(pa.actions_mio))});
  }
  return std::move(csv).str();
}

std::string correlations_csv(const std::vector<ProgramAnalysis>& results) {
  Csv csv({"success_rate", "measure", "n", "rho"});
  using SrGetter = std::function<std::optional<double>(const BranchStats&)>;
  const std::pair<std::string_view, SrGetter> rates[] = {
      {"mio", [](const BranchStats& b) { return b.sr_mio; }},
      {"rw", [](const BranchStats& b) { return b.sr_rw; }},
      {"pooled", [](const BranchStats& b) { return std::optional<double>(pooled_sr(b)); }},
  };
  auto all_measures = measures();
  all_measures.emplace_back("distinct", [](const auto& a) { return a.distinct_mean; });

  for (const auto& [sr_name, sr] : rates) {
    for (const auto& [m_name, get] : all_measures) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& pa : results) {
        for (const auto& b : pa.branches) {
          if (!b.included() || !b.landscape) continue;
          const auto r = sr(b);
          if (!r) continue;
          x.push_back(*r);
          y.push_back(get(*b.landscape));
        }
      }
      std::optional<double> rho;
      if (x.size() >= 3) rho = stats::spearman_rho(x, y);
      csv.row({std::string(sr_name), std::string(m_name), cell(x.size()), cell(rho)});
    }
  }
  return std::move(csv).str();
}

std::string heatmap(const RunRecord& rec, const ProgramAnalysis& pa) {
  std::string out;
  for (const auto& b : pa.branches) {
    for (std::size_t s = 0; s < rec.steps; ++s) {
      if (s != 0) out += ' ';
      out += format_real(rec.at(s, b.designated_target));
    }
    out += '\n';
  }
  return out;
}

std::string algo_tag(Algorithm a) {
  return a == Algorithm::RandomWalk ? "rw" : "mio";
}

}  // namespace

ReportFiles render_reports(const ReportInput& input) {
  if (input.programs == nullptr || input.records == nullptr || input.results == nullptr) {
    throw InvalidParameter("report input is incomplete");
  }
  const auto& results = *input.results;
  ReportFiles files;
  files["branches.csv"] = branches_csv(results);
  files["targets.csv"] = targets_csv(results);
  files["groups.csv"] = groups_csv(results);
  files["programs.csv"] = programs_csv(results);
  files["branch_types.csv"] = branch_types_csv(results);
  files["comparison.csv"] = comparison_csv(results);
  files["correlations.csv"] = correlations_csv(results);

  std::vector<const RunRecord*> sorted;
  for (const auto& r : *input.records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tie(a->program, a->algorithm, a->run) < std::tie(b->program, b->algorithm, b->run);
  });

  for (const RunRecord* r : sorted) {
    if (r->algorithm != Algorithm::RandomWalk) continue;
    const auto it = std::find_if(results.begin(), results.end(),
                                 [&](const ProgramAnalysis& pa) { return pa.program == r->program; });
    if (it == results.end()) continue;
    files["heatmaps/" + r->program + "_rw_" + std::to_string(r->run) + ".txt"] = heatmap(*r, *it);
  }

  nlohmann::ordered_json m;
  const auto& ec = input.experiment;
  nlohmann::ordered_json protocol;
  protocol["runs"] = ec.runs;
  protocol["steps"] = ec.budget;
  protocol["base_seed"] = ec.base_seed;
  protocol["epsilon"] = input.analysis.epsilon;
  protocol["ac_lag"] = input.analysis.ac_lag;
  protocol["algorithms"] = nlohmann::ordered_json::array();
  for (const auto a : input.algorithms) protocol["algorithms"].push_back(experiment::to_string(a));
  protocol["programs"] = nlohmann::ordered_json::array();
  for (const auto& p : *input.programs) protocol["programs"].push_back(p.name());
  protocol["population"] = ec.search.population;
  protocol["random_probability"] = ec.search.random_probability;
  protocol["focused_start"] = ec.search.focused_start;
  protocol["update_parameters"] = ec.search.update_parameters;
  protocol["structural_probability"] = ec.search.mutation.structural_probability;
  protocol["null_probability"] = ec.search.mutation.null_probability;
  protocol["integer_delta_p"] = ec.search.mutation.integer_delta_p;
  protocol["evaluations"] = std::accumulate(
      sorted.begin(), sorted.end(), std::size_t{0},
      [](std::size_t acc, const RunRecord* r) { return acc + r->evaluations; });
  m["protocol"] = protocol;
  m["designated_target"] =
      "per branch, the outcome with the lower success rate pooled over all runs; then on ties";
  m["record_schema"] = "step,target_id,heuristic";
  m["success_rate_threshold"] = 0.5;

  m["runs"] = nlohmann::ordered_json::array();
  for (const RunRecord* r : sorted) {
    nlohmann::ordered_json e;
    e["program"] = r->program;
    e["algorithm"] = experiment::to_string(r->algorithm);
    e["run"] = r->run;
    e["seed"] = r->seed;
    e["evaluations"] = r->evaluations;
    e["actions_executed"] = r->actions_executed;
    e["covered_targets"] = r->covered_count();
    if (ec.records_dir) {
      e["record"] = "records/" + r->program + "/" + algo_tag(r->algorithm) + "_" +
                    std::to_string(r->run) + ".csv.gz";
    }
    m["runs"].push_back(e);
  }

  m["exclusions"] = nlohmann::ordered_json::array();
  for (const auto& pa : results) {
    for (const auto& b : pa.branches) {
      if (b.included()) continue;
      m["exclusions"].push_back({{"program", b.program},
                                 {"branch", b.branch},
                                 {"label", b.label},
                                 {"reason", experiment::to_string(b.exclusion)}});
    }
  }
  m["target_exclusions"] = nlohmann::ordered_json::array();
  for (const auto& pa : results) {
    for (const auto& t : pa.targets) {
      if (t.exclusion == experiment::Exclusion::None) continue;
      m["target_exclusions"].push_back({{"program", t.program},
                                        {"target", t.target},
                                        {"reason", experiment::to_string(t.exclusion)}});
    }
  }

  m["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, content] : files) m["files"].push_back(name);
  files["manifest.json"] = m.dump(2) + "\n";
  return files;
}

void write_reports(const std::filesystem::path& dir, const ReportFiles& files) {
  for (const auto& [name, content] : files) {
    const auto path = dir / name;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
  }
}

}  // namespace fitscape::report
