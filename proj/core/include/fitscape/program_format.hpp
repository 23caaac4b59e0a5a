#pragma once

// JSON program definitions.
//
//   {
//     "name": "shop",
//     "description": "...",                     (optional)
//     "registers": ["cart"],                    (optional)
//     "actions": [{
//       "name": "add",
//       "genes": [
//         {"name": "qty",  "type": "int", "min": 0, "max": 50},
//         {"name": "gift", "type": "bool"},
//         {"name": "code", "type": "string", "min_length": 0, "max_length": 6,
//          "alphabet": "abc"},
//         {"name": "item", "type": "ref", "pool": 3}
//       ],
//       "body": [
//         {"if": {"kind": "int_int", "op": "gt", "lhs": ["gene", "qty"], "rhs": 10},
//          "label": "bulk", "then": [...], "else": [...]},
//         {"loop": ["gene", "qty"], "body": [...]},
//         {"set": "cart", "value": ["gene", "item"]}
//       ]
//     }]
//   }
//
// Predicates: int_int (op eq|ne|lt|le|gt|ge, lhs, rhs), int_zero (value),
// ref_null (ref), ref_ref (lhs, rhs), string_eq (gene, literal).
// Expressions: integer literal, ["gene", name], ["reg", name], ["index"] or
// ["index", depth], ["add"|"sub"|"mul"|"mod", a, b], ["abs"|"not", a],
// ["eq"|"ne"|"lt"|"le"|"gt"|"ge", a, b], ["and"|"or", a, b], ["len", gene],
// ["char", gene, index]. Branch ids are assigned in document order.

#include <filesystem>
#include <string_view>

#include "fitscape/sut.hpp"

namespace fitscape::sut {

// Throws ProgramFormatError on malformed input.
[[nodiscard]] Program parse_program(std::string_view json_text);
[[nodiscard]] Program load_program(const std::filesystem::path& path);

}  // namespace fitscape::sut
