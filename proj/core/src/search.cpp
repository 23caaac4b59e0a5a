#include "fitscape/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fitscape/error.hpp"

namespace fitscape::search {

void SearchConfig::validate() const {
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (budget < 1) throw InvalidParameter("search budget must be positive");
  if (population < 1) throw InvalidParameter("population bound must be positive");
  if (!prob(random_probability)) throw InvalidParameter("random sampling probability must be in [0, 1]");
  if (!(focused_start > 0.0 && focused_start <= 1.0)) {
    throw InvalidParameter("focused search start must be in (0, 1]");
  }
  if (!prob(mutation.structural_probability) || !prob(mutation.null_probability)) {
    throw InvalidParameter("mutation probabilities must be in [0, 1]");
  }
  if (!(mutation.integer_delta_p > 0.0 && mutation.integer_delta_p <= 1.0)) {
    throw InvalidParameter("integer delta parameter must be in (0, 1]");
  }
}

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

char random_char(const std::string& alphabet, Rng& rng) {
  return alphabet[uniform_index(rng, alphabet.size())];
}

bool string_mutable(const GeneSpec& spec, const std::string& s) {
  const bool can_insert = s.size() < spec.max_length;
  const bool can_delete = s.size() > spec.min_length;
  const bool can_replace = !s.empty() && spec.alphabet.size() > 1;
  return can_insert || can_delete || can_replace;
}

bool gene_mutable(const GeneSpec& spec, const GeneValue& value) {
  switch (spec.type) {
    case GeneType::Integer: return spec.min < spec.max;
    case GeneType::String: return string_mutable(spec, std::get<std::string>(value));
    case GeneType::Boolean:
    case GeneType::Reference: return true;
  }
  return false;
}

__extension__ using Wide = __int128;

void mutate_integer(const GeneSpec& spec, std::int64_t& v, Rng& rng, const MutationConfig& cfg) {
  const std::int64_t delta =
      1 + std::geometric_distribution<std::int64_t>(cfg.integer_delta_p)(rng);
  const auto step = [&](std::int64_t sign) {
    const auto target = static_cast<Wide>(v) + static_cast<Wide>(sign) * delta;
    return static_cast<std::int64_t>(
        std::clamp<Wide>(target, spec.min, spec.max));
  };
  const std::int64_t sign = chance(rng, 0.5) ? 1 : -1;
  std::int64_t next = step(sign);
  if (next == v) next = step(-sign);
  v = next;
}

void mutate_string(const GeneSpec& spec, std::string& s, Rng& rng) {
  enum class Edit { Insert, Delete, Replace };
  std::vector<Edit> edits;
  if (s.size() < spec.max_length) edits.push_back(Edit::Insert);
  if (s.size() > spec.min_length) edits.push_back(Edit::Delete);
  if (!s.empty() && spec.alphabet.size() > 1) edits.push_back(Edit::Replace);
  switch (edits[uniform_index(rng, edits.size())]) {
    case Edit::Insert:
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, s.size() + 1)),
               random_char(spec.alphabet, rng));
      break;
    case Edit::Delete:
      s.erase(s.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, s.size())));
      break;
    case Edit::Replace: {
      const std::size_t pos = uniform_index(rng, s.size());
      char c = s[pos];
      while (c == s[pos]) c = random_char(spec.alphabet, rng);
      s[pos] = c;
      break;
    }
  }
}

void mutate_reference(const GeneSpec& spec, Reference& r, Rng& rng) {
  if (r.is_null()) {
    r.token = std::uniform_int_distribution<std::int64_t>(1, spec.pool)(rng);
  } else if (spec.pool > 1 && chance(rng, 0.5)) {
    // Draw a different token from the remaining pool - 1.
    const auto draw = std::uniform_int_distribution<std::int64_t>(1, spec.pool - 1)(rng);
    r.token = draw >= r.token ? draw + 1 : draw;
  } else {
    r.token = 0;
  }
}

void mutate_gene(const GeneSpec& spec, GeneValue& value, Rng& rng, const MutationConfig& cfg) {
  switch (spec.type) {
    case GeneType::Integer: mutate_integer(spec, std::get<std::int64_t>(value), rng, cfg); break;
    case GeneType::Boolean: value = !std::get<bool>(value); break;
    case GeneType::String: mutate_string(spec, std::get<std::string>(value), rng); break;
    case GeneType::Reference: mutate_reference(spec, std::get<Reference>(value), rng); break;
  }
}

void mutate_structure(const std::vector<ActionSchema>& schemas, TestCase& t, Rng& rng,
                      const MutationConfig& cfg) {
  const bool can_add = t.actions.size() < TestCase::kMaxActions;
  const bool can_remove = t.actions.size() > TestCase::kMinActions;
  const bool add = can_add && (!can_remove || chance(rng, 0.5));
  if (add) {
    const auto pos = uniform_index(rng, t.actions.size() + 1);
    t.actions.insert(t.actions.begin() + static_cast<std::ptrdiff_t>(pos),
                     sample_action(schemas, rng, cfg));
  } else {
    t.actions.erase(t.actions.begin() +
                    static_cast<std::ptrdiff_t>(uniform_index(rng, t.actions.size())));
  }
}

std::size_t largest_uncovered(const TargetPopulations& pops) {
  std::size_t largest = 0;
  for (std::size_t t = 0; t < pops.size(); ++t) {
    const auto& target = pops.target(t);
    if (!target.covered) largest = std::max(largest, target.population.size());
  }
  return largest;
}

}  // namespace

GeneValue sample_gene(const GeneSpec& spec, Rng& rng, const MutationConfig& cfg) {
  switch (spec.type) {
    case GeneType::Integer:
      return std::uniform_int_distribution<std::int64_t>(spec.min, spec.max)(rng);
    case GeneType::Boolean:
      return chance(rng, 0.5);
    case GeneType::String: {
      const auto len =
          std::uniform_int_distribution<std::size_t>(spec.min_length, spec.max_length)(rng);
      std::string s(len, '\0');
      for (char& c : s) c = random_char(spec.alphabet, rng);
      return s;
    }
    case GeneType::Reference:
      if (chance(rng, cfg.null_probability)) return Reference{};
      return Reference{std::uniform_int_distribution<std::int64_t>(1, spec.pool)(rng)};
  }
  return std::int64_t{0};
}

Action sample_action(const std::vector<ActionSchema>& schemas, Rng& rng,
                     const MutationConfig& cfg) {
  Action a;
  a.schema = uniform_index(rng, schemas.size());
  for (const GeneSpec& g : schemas[a.schema].genes) a.genes.push_back(sample_gene(g, rng, cfg));
  return a;
}

TestCase sample_random(const sut::Program& program, Rng& rng, const MutationConfig& cfg) {
  TestCase t;
  const auto n = std::uniform_int_distribution<std::size_t>(TestCase::kMinActions,
                                                            TestCase::kMaxActions)(rng);
  t.actions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.actions.push_back(sample_action(program.schemas(), rng, cfg));
  return t;
}

TestCase mutate(const sut::Program& program, const TestCase& test, Rng& rng,
                const MutationConfig& cfg) {
  const auto& schemas = program.schemas();
  TestCase out = test;

  std::vector<std::size_t> candidates;
  for (std::size_t a = 0; a < out.actions.size(); ++a) {
    const auto& action = out.actions[a];
    const auto& genes = schemas[action.schema].genes;
    for (std::size_t g = 0; g < genes.size(); ++g) {
      if (gene_mutable(genes[g], action.genes[g])) {
        candidates.push_back(a);
        break;
      }
    }
  }

  if (candidates.empty() || chance(rng, cfg.structural_probability)) {
    mutate_structure(schemas, out, rng, cfg);
    return out;
  }

  Action& action = out.actions[candidates[uniform_index(rng, candidates.size())]];
  const auto& genes = schemas[action.schema].genes;
  std::vector<std::size_t> slots;
  for (std::size_t g = 0; g < genes.size(); ++g) {
    if (gene_mutable(genes[g], action.genes[g])) slots.push_back(g);
  }
  const std::size_t g = slots[uniform_index(rng, slots.size())];
  mutate_gene(genes[g], action.genes[g], rng, cfg);
  return out;
}

// ---------------------------------------------------------------------------

TargetPopulations::TargetPopulations(std::size_t target_count) : targets_(target_count) {
  for (std::size_t t = 0; t < target_count; ++t) targets_[t].id = t;
}

void TargetPopulations::remove_worst(Target& t) {
  // Lowest heuristic; among equals the oldest.
  const auto worst = std::min_element(
      t.population.begin(), t.population.end(), [](const Individual& a, const Individual& b) {
        return a.heuristic < b.heuristic || (a.heuristic == b.heuristic && a.birth < b.birth);
      });
  t.population.erase(worst);
}

std::size_t TargetPopulations::update(const TestCase& test, const sut::EvaluationResult& result,
                                      std::size_t bound, Archive& archive) {
  std::size_t newly_covered = 0;
  for (std::size_t b = 0; b < result.reached.size(); ++b) {
    if (!result.reached[b]) continue;
    for (const std::size_t id : {sut::then_target_of(b), sut::else_target_of(b)}) {
      Target& t = targets_[id];
      if (t.covered) continue;
      Individual ind{test, result.heuristics[id], births_++};
      if (result.covered[id]) {
        t.covered = true;
        archive.emplace(id, test);
        t.population.clear();
        t.population.push_back(std::move(ind));
        ++newly_covered;
        continue;
      }
      t.population.push_back(std::move(ind));
      while (t.population.size() > bound) remove_worst(t);
    }
  }
  return newly_covered;
}

void TargetPopulations::shrink(std::size_t bound) {
  for (Target& t : targets_) {
    if (t.covered) continue;
    while (t.population.size() > bound) remove_worst(t);
  }
}

std::vector<std::size_t> TargetPopulations::sampleable() const {
  std::vector<std::size_t> out;
  for (const Target& t : targets_) {
    if (!t.covered && !t.population.empty()) out.push_back(t.id);
  }
  return out;
}

// ---------------------------------------------------------------------------

SearchOutcome random_walk(const sut::Program& program, const SearchConfig& config,
                          const StepObserver& observer) {
  config.validate();
  Rng rng(config.seed);
  TargetPopulations pops(program.target_count());
  SearchOutcome out;
  TestCase current;

  for (std::size_t step = 0; step < config.budget; ++step) {
    StepEvent ev;
    ev.step = step;
    if (step == 0) {
      current = sample_random(program, rng, config.mutation);
      ev.origin = Origin::Random;
    } else {
      current = mutate(program, current, rng, config.mutation);
      ev.origin = Origin::Mutation;
      ev.parent_step = step - 1;
    }
    const auto result = sut::execute(program, current);
    ++out.evaluations;
    out.actions_executed += result.actions_executed;
    pops.update(current, result, config.population, out.archive);

    if (observer) {
      ev.test = &current;
      ev.result = &result;
      ev.population_bound = config.population;
      ev.largest_population = largest_uncovered(pops);
      observer(ev);
    }
  }
  return out;
}

SearchOutcome mio(const sut::Program& program, const SearchConfig& config,
                  const StepObserver& observer) {
  config.validate();
  Rng rng(config.seed);
  TargetPopulations pops(program.target_count());
  SearchOutcome out;
  double random_probability = config.random_probability;
  std::size_t bound = config.population;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t step = 0; step < config.budget; ++step) {
    StepEvent ev;
    ev.step = step;
    TestCase p;
    const double u = unit(rng);
    const auto sampleable = pops.sampleable();
    if (random_probability > u || sampleable.empty()) {
      p = sample_random(program, rng, config.mutation);
      ev.origin = Origin::Random;
    } else {
      const std::size_t target = sampleable[uniform_index(rng, sampleable.size())];
      const auto& population = pops.target(target).population;
      const TestCase& parent = population[uniform_index(rng, population.size())].test;
      p = mutate(program, parent, rng, config.mutation);
      ev.origin = Origin::Mutation;
      ev.sampled_target = target;
    }

    const auto result = sut::execute(program, p);
    ++out.evaluations;
    out.actions_executed += result.actions_executed;
    pops.update(p, result, bound, out.archive);

    // Linear decay towards the focused phase, constant afterwards.
    if (config.update_parameters) {
      const double consumed = static_cast<double>(step + 1) / static_cast<double>(config.budget);
      if (consumed >= config.focused_start) {
        random_probability = 0.0;
        bound = 1;
      } else {
        const double progress = consumed / config.focused_start;
        random_probability = config.random_probability * (1.0 - progress);
        const double n0 = static_cast<double>(config.population);
        bound = static_cast<std::size_t>(std::lround(n0 - (n0 - 1.0) * progress));
      }
      pops.shrink(bound);
    }

    if (observer) {
      ev.test = &p;
      ev.result = &result;
      ev.population_bound = bound;
      ev.largest_population = largest_uncovered(pops);
      observer(ev);
    }
  }
  return out;
}

}  // namespace fitscape::search
