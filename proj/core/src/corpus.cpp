#include "fitscape/corpus.hpp"

#include <array>
#include <utility>

#include "fitscape/error.hpp"
#include "fitscape/program_format.hpp"

namespace fitscape::sut {

namespace {

constexpr std::string_view kNumeric = R"json({
  "name": "numeric",
  "description": "Gradient-rich integer logic: triangle classification, remainders, a running total.",
  "registers": ["total"],
  "actions": [
    {
      "name": "triangle",
      "genes": [
        {"name": "a", "type": "int", "min": -20, "max": 200},
        {"name": "b", "type": "int", "min": -20, "max": 200},
        {"name": "c", "type": "int", "min": -20, "max": 200}
      ],
      "body": [
        {
          "if": {"kind": "int_int", "op": "le", "lhs": ["gene", "a"], "rhs": 0},
          "label": "a_nonpositive",
          "else": [
            {
              "if": {"kind": "int_int", "op": "le", "lhs": ["gene", "b"], "rhs": 0},
              "label": "b_nonpositive",
              "else": [
                {
                  "if": {"kind": "int_int", "op": "le", "lhs": ["gene", "c"], "rhs": 0},
                  "label": "c_nonpositive",
                  "else": [
                    {
                      "if": {
                        "kind": "int_int",
                        "op": "le",
                        "lhs": ["add", ["gene", "a"], ["gene", "b"]],
                        "rhs": ["gene", "c"]
                      },
                      "label": "not_triangle",
                      "else": [
                        {
                          "if": {
                            "kind": "int_int",
                            "op": "eq",
                            "lhs": ["gene", "a"],
                            "rhs": ["gene", "b"]
                          },
                          "label": "a_eq_b",
                          "then": [
                            {
                              "if": {
                                "kind": "int_int",
                                "op": "eq",
                                "lhs": ["gene", "b"],
                                "rhs": ["gene", "c"]
                              },
                              "label": "equilateral"
                            }
                          ],
                          "else": [
                            {
                              "if": {
                                "kind": "int_int",
                                "op": "eq",
                                "lhs": ["gene", "b"],
                                "rhs": ["gene", "c"]
                              },
                              "label": "b_eq_c"
                            },
                            {
                              "if": {
                                "kind": "int_int",
                                "op": "eq",
                                "lhs": ["mul", ["gene", "c"], ["gene", "c"]],
                                "rhs": [
                                  "add",
                                  ["mul", ["gene", "a"], ["gene", "a"]],
                                  ["mul", ["gene", "b"], ["gene", "b"]]
                                ]
                              },
                              "label": "right_angle"
                            }
                          ]
                        }
                      ]
                    }
                  ]
                }
              ]
            }
          ]
        }
      ]
    },
    {
      "name": "classify",
      "genes": [
        {"name": "n", "type": "int", "min": -1000, "max": 1000},
        {"name": "k", "type": "int", "min": 0, "max": 12}
      ],
      "body": [
        {"if": {"kind": "int_int", "op": "lt", "lhs": ["gene", "n"], "rhs": 0}, "label": "negative"},
        {"if": {"kind": "int_int", "op": "eq", "lhs": ["gene", "n"], "rhs": 42}, "label": "answer"},
        {
          "if": {
            "kind": "int_int",
            "op": "gt",
            "lhs": ["abs", ["sub", ["gene", "n"], 500]],
            "rhs": ["mul", ["gene", "k"], 40]
          },
          "label": "far_from_500"
        },
        {
          "loop": ["gene", "k"],
          "body": [
            {
              "if": {
                "kind": "int_int",
                "op": "eq",
                "lhs": ["mod", ["gene", "n"], ["add", ["index"], 7]],
                "rhs": 0
              },
              "label": "divisible"
            }
          ]
        },
        {"if": {"kind": "int_zero", "value": ["eq", ["mod", ["gene", "n"], 2], 0]}, "label": "even"}
      ]
    },
    {
      "name": "accumulate",
      "genes": [{"name": "x", "type": "int", "min": -100, "max": 100}],
      "body": [
        {"set": "total", "value": ["add", ["reg", "total"], ["gene", "x"]]},
        {
          "if": {"kind": "int_int", "op": "eq", "lhs": ["reg", "total"], "rhs": 250},
          "label": "total_250"
        },
        {
          "if": {"kind": "int_int", "op": "gt", "lhs": ["reg", "total"], "rhs": ["mul", ["gene", "x"], 3]},
          "label": "total_ahead"
        }
      ]
    }
  ]
})json";

constexpr std::string_view kText = R"json({
  "name": "text",
  "description": "String predicates: role codes, routes and a character scanner.",
  "registers": ["user"],
  "actions": [
    {
      "name": "login",
      "genes": [
        {"name": "role", "type": "string", "min_length": 6, "max_length": 6, "alphabet": "ab"},
        {
          "name": "name",
          "type": "string",
          "min_length": 0,
          "max_length": 8,
          "alphabet": "abdeimnorstu"
        },
        {"name": "pin", "type": "int", "min": 0, "max": 9999}
      ],
      "body": [
        {
          "if": {"kind": "string_eq", "gene": "role", "literal": "abbaab"},
          "label": "is_admin",
          "then": [
            {"set": "user", "value": 2},
            {
              "if": {"kind": "int_int", "op": "eq", "lhs": ["gene", "pin"], "rhs": 1234},
              "label": "admin_pin"
            }
          ],
          "else": [
            {
              "if": {"kind": "int_int", "op": "gt", "lhs": ["len", "name"], "rhs": 5},
              "label": "long_name",
              "then": [{"set": "user", "value": 1}]
            }
          ]
        }
      ]
    },
    {
      "name": "route",
      "genes": [{"name": "path", "type": "string", "min_length": 4, "max_length": 4, "alphabet": "/a"}],
      "body": [
        {"if": {"kind": "string_eq", "gene": "path", "literal": "/a/a"}, "label": "route_aa"},
        {
          "if": {"kind": "int_int", "op": "eq", "lhs": ["char", "path", 0], "rhs": 47},
          "label": "absolute",
          "then": [
            {
              "if": {"kind": "int_int", "op": "gt", "lhs": ["reg", "user"], "rhs": 0},
              "label": "authenticated"
            }
          ]
        }
      ]
    },
    {
      "name": "scan",
      "genes": [{"name": "s", "type": "string", "min_length": 0, "max_length": 8, "alphabet": "ab01-"}],
      "body": [
        {
          "loop": ["len", "s"],
          "body": [
            {
              "if": {"kind": "int_int", "op": "eq", "lhs": ["char", "s", ["index"]], "rhs": 45},
              "label": "dash"
            }
          ]
        },
        {
          "if": {
            "kind": "int_zero",
            "value": [
              "and",
              [
                "and",
                ["and", ["eq", ["len", "s"], 5], ["eq", ["char", "s", 0], 45]],
                ["eq", ["char", "s", 4], 45]
              ],
              ["eq", ["char", "s", 2], 98]
            ]
          },
          "label": "checksum"
        }
      ]
    }
  ]
})json";

constexpr std::string_view kFlags = R"json({
  "name": "flags",
  "description": "Boolean flags compiled from character classes and slot parity; no gradient anywhere.",
  "actions": [
    {
      "name": "submit",
      "genes": [
        {"name": "code", "type": "string", "min_length": 6, "max_length": 10, "alphabet": "ab01"},
        {"name": "slots", "type": "int", "min": 4, "max": 10},
        {"name": "strict", "type": "bool"},
        {"name": "mode", "type": "int", "min": 0, "max": 15},
        {"name": "level", "type": "int", "min": 0, "max": 15},
        {"name": "owner", "type": "ref", "pool": 4}
      ],
      "body": [
        {
          "loop": ["len", "code"],
          "body": [
            {
              "if": {
                "kind": "int_zero",
                "value": [
                  "and",
                  ["ge", ["char", "code", ["index"]], 48],
                  ["le", ["char", "code", ["index"]], 57]
                ]
              },
              "label": "is_digit",
              "then": [
                {
                  "if": {"kind": "int_zero", "value": ["eq", ["char", "code", ["index"]], 49]},
                  "label": "is_one"
                }
              ],
              "else": [
                {
                  "if": {"kind": "int_zero", "value": ["eq", ["char", "code", ["index"]], 97]},
                  "label": "is_a"
                }
              ]
            }
          ]
        },
        {
          "loop": ["gene", "slots"],
          "body": [
            {
              "if": {"kind": "int_zero", "value": ["eq", ["mod", ["index"], 2], 0]},
              "label": "even_slot",
              "then": [
                {
                  "if": {"kind": "int_zero", "value": ["eq", ["mod", ["index"], 4], 0]},
                  "label": "fourth_slot"
                }
              ]
            }
          ]
        },
        {
          "if": {
            "kind": "int_zero",
            "value": [
              "and",
              [
                "and",
                ["and", ["gene", "strict"], ["eq", ["gene", "mode"], 7]],
                ["eq", ["gene", "level"], 3]
              ],
              ["eq", ["gene", "slots"], 6]
            ]
          },
          "label": "lockdown"
        },
        {
          "if": {"kind": "int_zero", "value": ["gt", ["len", "code"], 10]},
          "label": "oversized",
          "then": [{"if": {"kind": "int_zero", "value": ["gene", "strict"]}, "label": "oversized_strict"}]
        },
        {"if": {"kind": "ref_null", "ref": ["gene", "owner"]}, "label": "unowned"}
      ]
    }
  ]
})json";

constexpr std::string_view kNullChain = R"json({
  "name": "nullchain",
  "description": "Chains of null checks guarding nested lookups, plus a cached handle.",
  "registers": ["cache"],
  "actions": [
    {
      "name": "lookup",
      "genes": [
        {"name": "user", "type": "ref", "pool": 4},
        {"name": "profile", "type": "ref", "pool": 4},
        {"name": "address", "type": "ref", "pool": 4},
        {"name": "zip", "type": "int", "min": 0, "max": 999}
      ],
      "body": [
        {
          "if": {"kind": "ref_null", "ref": ["gene", "user"]},
          "label": "user_null",
          "else": [
            {
              "if": {"kind": "ref_null", "ref": ["gene", "profile"]},
              "label": "profile_null",
              "else": [
                {
                  "if": {"kind": "ref_null", "ref": ["gene", "address"]},
                  "label": "address_null",
                  "else": [
                    {
                      "if": {"kind": "int_int", "op": "lt", "lhs": ["gene", "zip"], "rhs": 100},
                      "label": "low_zip"
                    }
                  ]
                }
              ]
            }
          ]
        },
        {"if": {"kind": "ref_null", "ref": ["reg", "cache"]}, "label": "lookup_uncached"},
        {
          "if": {
            "kind": "int_zero",
            "value": ["and", ["eq", ["gene", "zip"], 321], ["eq", ["reg", "cache"], 0]]
          },
          "label": "archived_zip"
        }
      ]
    },
    {
      "name": "store",
      "genes": [{"name": "item", "type": "ref", "pool": 4}, {"name": "pin", "type": "bool"}],
      "body": [
        {
          "if": {"kind": "ref_null", "ref": ["reg", "cache"]},
          "label": "cache_empty",
          "then": [{"set": "cache", "value": ["gene", "item"]}],
          "else": [{"if": {"kind": "int_zero", "value": ["gene", "pin"]}, "label": "pinned"}]
        },
        {"if": {"kind": "ref_null", "ref": ["gene", "item"]}, "label": "item_null"}
      ]
    }
  ]
})json";

constexpr std::string_view kIdentity = R"json({
  "name": "identity",
  "description": "Reference identity: ownership transfers between handles created earlier in the test.",
  "registers": ["last", "owner"],
  "actions": [
    {
      "name": "create",
      "genes": [{"name": "obj", "type": "ref", "pool": 5}],
      "body": [
        {"if": {"kind": "ref_null", "ref": ["gene", "obj"]}, "label": "create_null"},
        {
          "if": {"kind": "ref_ref", "lhs": ["gene", "obj"], "rhs": ["reg", "last"]},
          "label": "recreate"
        },
        {"set": "last", "value": ["gene", "obj"]}
      ]
    },
    {
      "name": "transfer",
      "genes": [{"name": "obj", "type": "ref", "pool": 5}, {"name": "to", "type": "ref", "pool": 5}],
      "body": [
        {
          "if": {"kind": "ref_null", "ref": ["gene", "obj"]},
          "label": "missing_obj",
          "else": [
            {
              "if": {"kind": "ref_ref", "lhs": ["gene", "obj"], "rhs": ["reg", "last"]},
              "label": "owns_last",
              "then": [
                {
                  "if": {"kind": "ref_ref", "lhs": ["gene", "to"], "rhs": ["gene", "obj"]},
                  "label": "self_transfer",
                  "else": [{"set": "owner", "value": ["gene", "to"]}]
                }
              ]
            }
          ]
        }
      ]
    },
    {
      "name": "audit",
      "genes": [
        {"name": "who", "type": "ref", "pool": 5},
        {"name": "depth", "type": "int", "min": 0, "max": 5},
        {"name": "code", "type": "int", "min": 0, "max": 999}
      ],
      "body": [
        {
          "if": {"kind": "ref_ref", "lhs": ["gene", "who"], "rhs": ["reg", "owner"]},
          "label": "is_owner",
          "then": [
            {
              "if": {"kind": "int_int", "op": "ge", "lhs": ["gene", "depth"], "rhs": 4},
              "label": "deep_audit"
            }
          ]
        },
        {"if": {"kind": "ref_null", "ref": ["reg", "owner"]}, "label": "unowned"},
        {
          "if": {
            "kind": "int_zero",
            "value": ["and", ["eq", ["gene", "code"], 404], ["eq", ["gene", "depth"], 5]]
          },
          "label": "forensic"
        }
      ]
    }
  ]
})json";

constexpr std::string_view kNested = R"json({
  "name": "nested",
  "description": "Deep nesting with contradictory guards: never-reached and never-covered branches.",
  "actions": [
    {
      "name": "process",
      "genes": [
        {"name": "x", "type": "int", "min": 0, "max": 1000},
        {"name": "y", "type": "int", "min": 0, "max": 1000},
        {"name": "fast", "type": "bool"},
        {"name": "ref", "type": "ref", "pool": 2}
      ],
      "body": [
        {
          "if": {"kind": "int_int", "op": "gt", "lhs": ["gene", "x"], "rhs": 500},
          "label": "x_high",
          "then": [
            {
              "if": {"kind": "int_int", "op": "lt", "lhs": ["gene", "x"], "rhs": 400},
              "label": "x_contradiction",
              "then": [
                {
                  "if": {"kind": "int_int", "op": "eq", "lhs": ["gene", "y"], "rhs": 3},
                  "label": "dead_y"
                }
              ]
            },
            {
              "if": {"kind": "int_int", "op": "gt", "lhs": ["gene", "y"], "rhs": 900},
              "label": "y_high",
              "then": [
                {
                  "if": {"kind": "int_zero", "value": ["gene", "fast"]},
                  "label": "fast_path",
                  "then": [
                    {
                      "if": {"kind": "int_int", "op": "eq", "lhs": ["gene", "x"], "rhs": ["gene", "y"]},
                      "label": "x_eq_y",
                      "then": [{"if": {"kind": "ref_null", "ref": ["gene", "ref"]}, "label": "deep_null"}]
                    }
                  ]
                }
              ]
            }
          ],
          "else": [
            {
              "if": {
                "kind": "int_zero",
                "value": ["and", ["gt", ["gene", "y"], 10], ["lt", ["gene", "y"], 5]]
              },
              "label": "y_contradiction"
            },
            {
              "if": {"kind": "int_int", "op": "lt", "lhs": ["gene", "y"], "rhs": 100},
              "label": "y_low"
            }
          ]
        },
        {
          "if": {
            "kind": "int_zero",
            "value": ["and", ["eq", ["add", ["gene", "x"], ["gene", "y"]], 1000], ["gene", "fast"]]
          },
          "label": "mirror"
        },
        {
          "if": {
            "kind": "int_zero",
            "value": ["and", ["eq", ["mod", ["gene", "x"], 97], 13], ["eq", ["mod", ["gene", "y"], 89], 7]]
          },
          "label": "resonant"
        }
      ]
    }
  ]
})json";

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kSources = {{
    {"numeric", kNumeric},
    {"text", kText},
    {"flags", kFlags},
    {"nullchain", kNullChain},
    {"identity", kIdentity},
    {"nested", kNested},
}};

}  // namespace

std::vector<Program> corpus() {
  std::vector<Program> out;
  out.reserve(kSources.size());
  for (const auto& [name, source] : kSources) out.push_back(parse_program(source));
  return out;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& [name, source] : kSources) out.emplace_back(name);
  return out;
}

std::string_view corpus_source(std::string_view name) {
  for (const auto& [n, source] : kSources) {
    if (n == name) return source;
  }
  throw InvalidParameter("unknown program '" + std::string(name) + "'");
}

Program corpus_program(std::string_view name) { return parse_program(corpus_source(name)); }

}  // namespace fitscape::sut
