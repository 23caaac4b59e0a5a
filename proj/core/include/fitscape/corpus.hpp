#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fitscape/sut.hpp"

namespace fitscape::sut {

// Built-in programs, in a fixed order:
//   numeric   - gradient-rich integer logic
//   text      - string predicates
//   flags     - dense boolean flags (Integer_Zero plateaus)
//   nullchain - null-check chains (Reference_Null)
//   identity  - reference identity (Reference_Reference)
//   nested    - deep nesting with never-reached and never-covered branches
[[nodiscard]] std::vector<Program> corpus();

[[nodiscard]] std::vector<std::string> corpus_names();

// Throws InvalidParameter for an unknown name.
[[nodiscard]] Program corpus_program(std::string_view name);

// JSON source of a built-in program. Throws InvalidParameter for an unknown name.
[[nodiscard]] std::string_view corpus_source(std::string_view name);

}  // namespace fitscape::sut
