#pragma once

// Test-case genotype: an ordered list of actions, each a vector of typed genes
// conforming to one of a program's action schemas.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fitscape {

enum class GeneType : std::uint8_t { Integer, Boolean, String, Reference };

struct GeneSpec {
  std::string name;
  GeneType type = GeneType::Integer;
  // Integer: inclusive range.
  std::int64_t min = 0;
  std::int64_t max = 0;
  // String: inclusive length bounds and the alphabet characters are drawn from.
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  std::string alphabet;
  // Reference: non-null tokens are 1..pool.
  std::int64_t pool = 1;
};

struct ActionSchema {
  std::string name;
  std::vector<GeneSpec> genes;
};

// Opaque object handle; token 0 is null.
struct Reference {
  std::int64_t token = 0;

  [[nodiscard]] bool is_null() const noexcept { return token == 0; }
  friend auto operator<=>(const Reference&, const Reference&) = default;
};

using GeneValue = std::variant<std::int64_t, bool, std::string, Reference>;

struct Action {
  std::size_t schema = 0;
  std::vector<GeneValue> genes;

  friend bool operator==(const Action&, const Action&) = default;
};

struct TestCase {
  static constexpr std::size_t kMinActions = 1;
  static constexpr std::size_t kMaxActions = 10;

  std::vector<Action> actions;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

// True when `value` lies in the domain declared by `spec`.
[[nodiscard]] bool gene_conforms(const GeneSpec& spec, const GeneValue& value);

// Throws InvalidTest describing the first violation of the action-count bound
// or of a schema's gene domains.
void validate_test(const std::vector<ActionSchema>& schemas, const TestCase& test);

// Throws InvalidParameter if a schema has no genes or an empty domain.
void validate_schema(const ActionSchema& schema);

}  // namespace fitscape
