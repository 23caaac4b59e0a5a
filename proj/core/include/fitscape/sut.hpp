#pragma once

// Instrumented toy programs: action handlers made of guarded blocks, bounded
// loops and register assignments. Every guard is a branching statement with
// two targets (then/else) whose heuristic is the normalised branch distance.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fitscape/genotype.hpp"

namespace fitscape::sut {

// Distance assigned to an unsatisfied flag-like predicate and added to
// strict ordering distances.
inline constexpr double kUnsatisfied = 1.0;
// Cost of each missing or surplus character in a string comparison.
inline constexpr double kLengthPenalty = 128.0;
// Upper bound on the iterations of any loop.
inline constexpr std::int64_t kMaxLoopIterations = 10;

enum class PredicateKind : std::uint8_t { IntInt, IntZero, RefNull, RefRef, StringEq };

// Bytecode-level branch classification.
enum class BranchClass : std::uint8_t {
  IntegerInteger,
  IntegerZero,
  ReferenceReference,
  ReferenceNull,
};

enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

[[nodiscard]] BranchClass classify(PredicateKind kind) noexcept;
[[nodiscard]] std::string_view to_string(PredicateKind kind) noexcept;
[[nodiscard]] std::string_view to_string(BranchClass cls) noexcept;
[[nodiscard]] std::string_view to_string(CompareOp op) noexcept;
[[nodiscard]] CompareOp negate(CompareOp op) noexcept;

struct IntOperands {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
};
struct FlagOperand {
  std::int64_t value = 0;
};
struct RefOperand {
  Reference ref;
};
struct RefPairOperands {
  Reference lhs;
  Reference rhs;
};
struct StringOperands {
  std::string_view value;
  std::string_view literal;
};
using Operands =
    std::variant<IntOperands, FlagOperand, RefOperand, RefPairOperands, StringOperands>;

struct BranchDistance {
  double then_distance = 0.0;
  double else_distance = 0.0;
};

// Korel-style distances of both outcomes. IntInt uses `op`; IntZero takes the
// then-branch when the flag is non-zero; RefNull when the reference is null;
// RefRef when both references are identical; StringEq when the strings match.
// Throws InvalidOperand when `operands` does not fit `kind`.
[[nodiscard]] BranchDistance branch_distance(PredicateKind kind, const Operands& operands,
                                             CompareOp op = CompareOp::Eq);

// 1 / (1 + d). Throws InvalidParameter for negative or NaN distances.
[[nodiscard]] double normalize(double distance);

struct BranchDescriptor {
  std::size_t id = 0;
  std::string label;
  PredicateKind kind = PredicateKind::IntInt;
  BranchClass classification = BranchClass::IntegerInteger;
  std::size_t then_target = 0;
  std::size_t else_target = 0;
  std::size_t action = 0;  // schema whose handler contains the statement
  std::size_t depth = 0;   // number of enclosing guards
};

[[nodiscard]] constexpr std::size_t then_target_of(std::size_t branch) noexcept {
  return 2 * branch;
}
[[nodiscard]] constexpr std::size_t else_target_of(std::size_t branch) noexcept {
  return 2 * branch + 1;
}
[[nodiscard]] constexpr std::size_t branch_of_target(std::size_t target) noexcept {
  return target / 2;
}

enum class ExprOp : std::uint8_t {
  Const,
  Gene,       // value = gene slot in the current action
  Register,   // value = register index
  LoopIndex,  // value = 0 for the innermost loop, 1 for the next, ...
  Add,
  Sub,
  Mul,
  Mod,
  Abs,
  Compare,  // materialises a comparison as 0/1
  And,
  Or,
  Not,
  Length,  // value = string gene slot
  CharAt,  // value = string gene slot, args[0] = index; -1 when out of range
};

struct Expr {
  ExprOp op = ExprOp::Const;
  std::int64_t value = 0;
  CompareOp compare = CompareOp::Eq;
  std::vector<Expr> args;
};

struct Condition {
  PredicateKind kind = PredicateKind::IntInt;
  CompareOp op = CompareOp::Eq;  // IntInt only
  Expr lhs;
  Expr rhs;                      // IntInt and RefRef
  std::size_t string_gene = 0;   // StringEq
  std::string literal;           // StringEq
};

struct Statement {
  enum class Kind : std::uint8_t { If, Loop, Set };

  Kind kind = Kind::If;
  // If
  std::size_t branch = 0;
  Condition condition;
  std::vector<Statement> then_body;
  std::vector<Statement> else_body;
  // Loop: `count` iterations of `then_body`, clamped to [0, kMaxLoopIterations].
  Expr count;
  // Set
  std::size_t target_register = 0;
  Expr value;
};

// Immutable after construction.
class Program {
 public:
  // Validates structure: unique, dense branch ids appearing exactly once in
  // the bodies, descriptors consistent with guards, operands type-correct.
  // Throws ProgramFormatError on violation.
  Program(std::string name, std::string description, std::vector<std::string> registers,
          std::vector<ActionSchema> schemas, std::vector<std::vector<Statement>> bodies,
          std::vector<BranchDescriptor> branches);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::string& description() const noexcept { return description_; }
  [[nodiscard]] const std::vector<std::string>& registers() const noexcept { return registers_; }
  [[nodiscard]] const std::vector<ActionSchema>& schemas() const noexcept { return schemas_; }
  [[nodiscard]] const std::vector<Statement>& body(std::size_t schema) const {
    return bodies_.at(schema);
  }
  [[nodiscard]] const std::vector<BranchDescriptor>& branches() const noexcept {
    return branches_;
  }
  [[nodiscard]] std::size_t target_count() const noexcept { return 2 * branches_.size(); }

 private:
  std::string name_;
  std::string description_;
  std::vector<std::string> registers_;
  std::vector<ActionSchema> schemas_;
  std::vector<std::vector<Statement>> bodies_;
  std::vector<BranchDescriptor> branches_;
};

struct EvaluationResult {
  std::vector<double> heuristics;  // per target, in [0, 1]
  std::vector<bool> reached;       // per branch
  std::vector<bool> covered;       // per target
  std::size_t actions_executed = 0;

  [[nodiscard]] std::vector<std::size_t> reached_branches() const;
  [[nodiscard]] std::vector<std::size_t> covered_targets() const;

  friend bool operator==(const EvaluationResult&, const EvaluationResult&) = default;
};

// One evaluation of a branching statement, in execution order.
struct BranchEvaluation {
  std::size_t branch = 0;
  BranchDistance distance;
};

// Runs every action of `test` in order against fresh program state. A target's
// heuristic is the best normalised distance over all evaluations of its
// statement; statements never executed leave both targets at 0.
// Throws InvalidTest when the test does not conform to the schemas.
[[nodiscard]] EvaluationResult execute(const Program& program, const TestCase& test,
                                       std::vector<BranchEvaluation>* trace = nullptr);

}  // namespace fitscape::sut
