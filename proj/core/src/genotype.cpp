#include "fitscape/genotype.hpp"

#include <algorithm>

#include "fitscape/error.hpp"

namespace fitscape {

bool gene_conforms(const GeneSpec& spec, const GeneValue& value) {
  switch (spec.type) {
    case GeneType::Integer: {
      const auto* v = std::get_if<std::int64_t>(&value);
      return v != nullptr && *v >= spec.min && *v <= spec.max;
    }
    case GeneType::Boolean:
      return std::holds_alternative<bool>(value);
    case GeneType::String: {
      const auto* s = std::get_if<std::string>(&value);
      if (s == nullptr || s->size() < spec.min_length || s->size() > spec.max_length) return false;
      return std::all_of(s->begin(), s->end(), [&](char c) {
        return spec.alphabet.find(c) != std::string::npos;
      });
    }
    case GeneType::Reference: {
      const auto* r = std::get_if<Reference>(&value);
      return r != nullptr && r->token >= 0 && r->token <= spec.pool;
    }
  }
  return false;
}

void validate_test(const std::vector<ActionSchema>& schemas, const TestCase& test) {
  const auto n = test.actions.size();
  if (n < TestCase::kMinActions || n > TestCase::kMaxActions) {
    throw InvalidTest("test has " + std::to_string(n) + " actions; expected 1..10");
  }
  for (std::size_t a = 0; a < n; ++a) {
    const Action& action = test.actions[a];
    if (action.schema >= schemas.size()) {
      throw InvalidTest("action " + std::to_string(a) + " refers to unknown schema " +
                        std::to_string(action.schema));
    }
    const ActionSchema& schema = schemas[action.schema];
    if (action.genes.size() != schema.genes.size()) {
      throw InvalidTest("action " + std::to_string(a) + " (" + schema.name + ") has " +
                        std::to_string(action.genes.size()) + " genes; schema declares " +
                        std::to_string(schema.genes.size()));
    }
    for (std::size_t g = 0; g < action.genes.size(); ++g) {
      if (!gene_conforms(schema.genes[g], action.genes[g])) {
        throw InvalidTest("gene '" + schema.genes[g].name + "' of action " + std::to_string(a) +
                          " (" + schema.name + ") is outside its domain");
      }
    }
  }
}

void validate_schema(const ActionSchema& schema) {
  if (schema.genes.empty()) {
    throw InvalidParameter("action schema '" + schema.name + "' declares no genes");
  }
  for (const GeneSpec& g : schema.genes) {
    const std::string where = "gene '" + g.name + "' of action '" + schema.name + "'";
    switch (g.type) {
      case GeneType::Integer:
        if (g.min > g.max) throw InvalidParameter(where + " has an empty range");
        break;
      case GeneType::String:
        if (g.min_length > g.max_length) throw InvalidParameter(where + " has empty length bounds");
        if (g.alphabet.empty() && g.max_length > 0) {
          throw InvalidParameter(where + " has an empty alphabet");
        }
        break;
      case GeneType::Reference:
        if (g.pool < 1) throw InvalidParameter(where + " needs a token pool of at least 1");
        break;
      case GeneType::Boolean:
        break;
    }
  }
}

}  // namespace fitscape
