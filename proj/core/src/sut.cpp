#include "fitscape/sut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fitscape/error.hpp"

namespace fitscape::sut {

BranchClass classify(PredicateKind kind) noexcept {
  switch (kind) {
    case PredicateKind::IntInt:
      return BranchClass::IntegerInteger;
    case PredicateKind::IntZero:
    case PredicateKind::StringEq:
      return BranchClass::IntegerZero;
    case PredicateKind::RefNull:
      return BranchClass::ReferenceNull;
    case PredicateKind::RefRef:
      return BranchClass::ReferenceReference;
  }
  return BranchClass::IntegerZero;
}

std::string_view to_string(PredicateKind kind) noexcept {
  switch (kind) {
    case PredicateKind::IntInt: return "IntInt";
    case PredicateKind::IntZero: return "IntZero";
    case PredicateKind::RefNull: return "RefNull";
    case PredicateKind::RefRef: return "RefRef";
    case PredicateKind::StringEq: return "StringEq";
  }
  return "?";
}

std::string_view to_string(BranchClass cls) noexcept {
  switch (cls) {
    case BranchClass::IntegerInteger: return "Integer_Integer";
    case BranchClass::IntegerZero: return "Integer_Zero";
    case BranchClass::ReferenceReference: return "Reference_Reference";
    case BranchClass::ReferenceNull: return "Reference_Null";
  }
  return "?";
}

std::string_view to_string(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "eq";
    case CompareOp::Ne: return "ne";
    case CompareOp::Lt: return "lt";
    case CompareOp::Le: return "le";
    case CompareOp::Gt: return "gt";
    case CompareOp::Ge: return "ge";
  }
  return "?";
}

CompareOp negate(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return CompareOp::Ne;
    case CompareOp::Ne: return CompareOp::Eq;
    case CompareOp::Lt: return CompareOp::Ge;
    case CompareOp::Le: return CompareOp::Gt;
    case CompareOp::Gt: return CompareOp::Le;
    case CompareOp::Ge: return CompareOp::Lt;
  }
  return CompareOp::Eq;
}

namespace {

bool compare(CompareOp op, std::int64_t a, std::int64_t b) noexcept {
  switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
  }
  return false;
}

double korel(CompareOp op, std::int64_t a, std::int64_t b) noexcept {
  const double diff = static_cast<double>(a) - static_cast<double>(b);
  switch (op) {
    case CompareOp::Eq: return std::abs(diff);
    case CompareOp::Ne: return a != b ? 0.0 : kUnsatisfied;
    case CompareOp::Lt: return a < b ? 0.0 : diff + kUnsatisfied;
    case CompareOp::Le: return a <= b ? 0.0 : diff;
    case CompareOp::Gt: return a > b ? 0.0 : -diff + kUnsatisfied;
    case CompareOp::Ge: return a >= b ? 0.0 : -diff;
  }
  return kUnsatisfied;
}

BranchDistance flag(bool then_taken) noexcept {
  return then_taken ? BranchDistance{0.0, kUnsatisfied} : BranchDistance{kUnsatisfied, 0.0};
}

double string_distance(std::string_view a, std::string_view b) noexcept {
  const std::size_t common = std::min(a.size(), b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < common; ++i) {
    d += std::abs(static_cast<double>(static_cast<unsigned char>(a[i])) -
                  static_cast<double>(static_cast<unsigned char>(b[i])));
  }
  const auto longer = std::max(a.size(), b.size());
  return d + kLengthPenalty * static_cast<double>(longer - common);
}

template <typename T>
const T& expect(const Operands& operands, PredicateKind kind) {
  if (const auto* v = std::get_if<T>(&operands)) return *v;
  throw InvalidOperand("operands do not match predicate kind " + std::string(to_string(kind)));
}

}  // namespace

BranchDistance branch_distance(PredicateKind kind, const Operands& operands, CompareOp op) {
  switch (kind) {
    case PredicateKind::IntInt: {
      const auto& o = expect<IntOperands>(operands, kind);
      return {korel(op, o.lhs, o.rhs), korel(negate(op), o.lhs, o.rhs)};
    }
    case PredicateKind::IntZero:
      return flag(expect<FlagOperand>(operands, kind).value != 0);
    case PredicateKind::RefNull:
      return flag(expect<RefOperand>(operands, kind).ref.is_null());
    case PredicateKind::RefRef: {
      const auto& o = expect<RefPairOperands>(operands, kind);
      return flag(o.lhs == o.rhs);
    }
    case PredicateKind::StringEq: {
      const auto& o = expect<StringOperands>(operands, kind);
      const double d = string_distance(o.value, o.literal);
      return {d, d == 0.0 ? kUnsatisfied : 0.0};
    }
  }
  throw InvalidOperand("unknown predicate kind");
}

double normalize(double distance) {
  if (!(distance >= 0.0)) throw InvalidParameter("branch distance must be non-negative");
  return 1.0 / (1.0 + distance);
}

std::vector<std::size_t> EvaluationResult::reached_branches() const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < reached.size(); ++b) {
    if (reached[b]) out.push_back(b);
  }
  return out;
}

std::vector<std::size_t> EvaluationResult::covered_targets() const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < covered.size(); ++t) {
    if (covered[t]) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural validation

namespace {

enum class ValueType { Int, Ref, Str, Any };

struct Validator {
  const std::vector<std::string>& registers;
  const std::vector<BranchDescriptor>& branches;
  const ActionSchema* schema = nullptr;
  std::size_t action = 0;
  std::vector<int> seen;
  std::size_t loop_depth = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ProgramFormatError("action '" + schema->name + "': " + what);
  }

  const GeneSpec& gene(std::int64_t slot) const {
    if (slot < 0 || static_cast<std::size_t>(slot) >= schema->genes.size()) {
      fail("gene slot " + std::to_string(slot) + " out of range");
    }
    return schema->genes[static_cast<std::size_t>(slot)];
  }

  // Returns the value type an expression yields.
  ValueType check(const Expr& e) const {
    auto arity = [&](std::size_t n) {
      if (e.args.size() != n) fail("expression arity mismatch");
    };
    switch (e.op) {
      case ExprOp::Const:
        arity(0);
        return ValueType::Int;
      case ExprOp::Gene: {
        arity(0);
        const auto& g = gene(e.value);
        if (g.type == GeneType::String) fail("string gene '" + g.name + "' used as a number");
        return g.type == GeneType::Reference ? ValueType::Ref : ValueType::Int;
      }
      case ExprOp::Register:
        arity(0);
        if (e.value < 0 || static_cast<std::size_t>(e.value) >= registers.size()) {
          fail("register index out of range");
        }
        return ValueType::Any;
      case ExprOp::LoopIndex:
        arity(0);
        if (e.value < 0 || static_cast<std::size_t>(e.value) >= loop_depth) {
          fail("loop index used outside a loop of that depth");
        }
        return ValueType::Int;
      case ExprOp::Length:
      case ExprOp::CharAt: {
        arity(e.op == ExprOp::Length ? 0 : 1);
        if (gene(e.value).type != GeneType::String) fail("string operation on a non-string gene");
        if (e.op == ExprOp::CharAt) numeric(e.args[0]);
        return ValueType::Int;
      }
      case ExprOp::Abs:
      case ExprOp::Not:
        arity(1);
        numeric(e.args[0]);
        return ValueType::Int;
      case ExprOp::Compare:
        arity(2);
        // Identity comparisons of references are allowed when materialising flags.
        check(e.args[0]);
        check(e.args[1]);
        return ValueType::Int;
      default:
        arity(2);
        numeric(e.args[0]);
        numeric(e.args[1]);
        return ValueType::Int;
    }
  }

  void numeric(const Expr& e) const {
    if (check(e) == ValueType::Ref) fail("reference used in arithmetic");
  }

  void reference(const Expr& e) const {
    const auto t = check(e);
    if (t != ValueType::Ref && t != ValueType::Any) fail("expected a reference operand");
  }

  void visit(const std::vector<Statement>& body, std::size_t depth) {
    for (const Statement& s : body) {
      switch (s.kind) {
        case Statement::Kind::Set:
          if (s.target_register >= registers.size()) fail("assignment to unknown register");
          check(s.value);
          break;
        case Statement::Kind::Loop:
          numeric(s.count);
          if (!s.else_body.empty()) fail("loop with an else body");
          ++loop_depth;
          visit(s.then_body, depth);
          --loop_depth;
          break;
        case Statement::Kind::If: {
          if (s.branch >= branches.size()) fail("guard refers to unknown branch id");
          if (seen[s.branch]++ != 0) {
            fail("branch " + std::to_string(s.branch) + " appears more than once");
          }
          const BranchDescriptor& d = branches[s.branch];
          const Condition& c = s.condition;
          if (d.kind != c.kind || d.action != action || d.depth != depth) {
            fail("descriptor of branch " + std::to_string(s.branch) + " disagrees with its guard");
          }
          switch (c.kind) {
            case PredicateKind::IntInt:
              numeric(c.lhs);
              numeric(c.rhs);
              break;
            case PredicateKind::IntZero:
              numeric(c.lhs);
              break;
            case PredicateKind::RefNull:
              reference(c.lhs);
              break;
            case PredicateKind::RefRef:
              reference(c.lhs);
              reference(c.rhs);
              break;
            case PredicateKind::StringEq:
              if (gene(static_cast<std::int64_t>(c.string_gene)).type != GeneType::String) {
                fail("string comparison on a non-string gene");
              }
              break;
          }
          visit(s.then_body, depth + 1);
          visit(s.else_body, depth + 1);
          break;
        }
      }
    }
  }
};

}  // namespace

Program::Program(std::string name, std::string description, std::vector<std::string> registers,
                 std::vector<ActionSchema> schemas, std::vector<std::vector<Statement>> bodies,
                 std::vector<BranchDescriptor> branches)
    : name_(std::move(name)),
      description_(std::move(description)),
      registers_(std::move(registers)),
      schemas_(std::move(schemas)),
      bodies_(std::move(bodies)),
      branches_(std::move(branches)) {
  if (name_.empty()) throw ProgramFormatError("program has no name");
  if (schemas_.empty()) throw ProgramFormatError("program '" + name_ + "' has no actions");
  if (schemas_.size() != bodies_.size()) {
    throw ProgramFormatError("program '" + name_ + "': schema and body counts differ");
  }
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    const auto& d = branches_[b];
    if (d.id != b || d.then_target != then_target_of(b) || d.else_target != else_target_of(b) ||
        d.classification != classify(d.kind)) {
      throw ProgramFormatError("program '" + name_ + "': inconsistent descriptor for branch " +
                               std::to_string(b));
    }
  }
  Validator v{registers_, branches_, nullptr, 0, std::vector<int>(branches_.size(), 0)};
  for (std::size_t a = 0; a < schemas_.size(); ++a) {
    try {
      validate_schema(schemas_[a]);
    } catch (const InvalidParameter& e) {
      throw ProgramFormatError("program '" + name_ + "': " + e.what());
    }
    v.schema = &schemas_[a];
    v.action = a;
    v.visit(bodies_[a], 0);
  }
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    if (v.seen[b] != 1) {
      throw ProgramFormatError("program '" + name_ + "': branch " + std::to_string(b) +
                               " has no guard");
    }
  }
}

// ---------------------------------------------------------------------------
// Interpretation

namespace {

__extension__ using Wide = __int128;

std::int64_t saturate(Wide v) noexcept {
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  return v < lo ? lo : (v > hi ? hi : static_cast<std::int64_t>(v));
}

class Interpreter {
 public:
  Interpreter(const Program& program, std::vector<BranchEvaluation>* trace)
      : program_(program), trace_(trace), registers_(program.registers().size(), 0) {
    result_.heuristics.assign(program.target_count(), 0.0);
    result_.reached.assign(program.branches().size(), false);
    result_.covered.assign(program.target_count(), false);
  }

  void run(const Action& action) {
    genes_ = &action.genes;
    loops_.clear();
    block(program_.body(action.schema));
    ++result_.actions_executed;
  }

  EvaluationResult take() { return std::move(result_); }

 private:
  void block(const std::vector<Statement>& body) {
    for (const Statement& s : body) statement(s);
  }

  void statement(const Statement& s) {
    switch (s.kind) {
      case Statement::Kind::Set:
        registers_[s.target_register] = eval(s.value);
        break;
      case Statement::Kind::Loop: {
        const auto n = std::clamp<std::int64_t>(eval(s.count), 0, kMaxLoopIterations);
        loops_.push_back(0);
        for (std::int64_t i = 0; i < n; ++i) {
          loops_.back() = i;
          block(s.then_body);
        }
        loops_.pop_back();
        break;
      }
      case Statement::Kind::If: {
        const BranchDistance d = distance(s.condition);
        record(s.branch, d);
        block(d.then_distance == 0.0 ? s.then_body : s.else_body);
        break;
      }
    }
  }

  void record(std::size_t branch, const BranchDistance& d) {
    if (trace_ != nullptr) trace_->push_back({branch, d});
    result_.reached[branch] = true;
    const auto update = [&](std::size_t target, double dist) {
      const double h = normalize(dist);
      if (h > result_.heuristics[target]) result_.heuristics[target] = h;
      if (dist == 0.0) result_.covered[target] = true;
    };
    update(then_target_of(branch), d.then_distance);
    update(else_target_of(branch), d.else_distance);
  }

  BranchDistance distance(const Condition& c) {
    switch (c.kind) {
      case PredicateKind::IntInt:
        return branch_distance(c.kind, IntOperands{eval(c.lhs), eval(c.rhs)}, c.op);
      case PredicateKind::IntZero:
        return branch_distance(c.kind, FlagOperand{eval(c.lhs)});
      case PredicateKind::RefNull:
        return branch_distance(c.kind, RefOperand{Reference{eval(c.lhs)}});
      case PredicateKind::RefRef:
        return branch_distance(c.kind,
                               RefPairOperands{Reference{eval(c.lhs)}, Reference{eval(c.rhs)}});
      case PredicateKind::StringEq:
        return branch_distance(c.kind, StringOperands{string_gene(c.string_gene), c.literal});
    }
    throw InvalidOperand("unknown predicate kind");
  }

  const std::string& string_gene(std::size_t slot) const {
    return std::get<std::string>((*genes_)[slot]);
  }

  std::int64_t gene_value(std::size_t slot) const {
    return std::visit(
        [](const auto& v) -> std::int64_t {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::int64_t>) {
            return v;
          } else if constexpr (std::is_same_v<T, bool>) {
            return v ? 1 : 0;
          } else if constexpr (std::is_same_v<T, Reference>) {
            return v.token;
          } else {
            return static_cast<std::int64_t>(v.size());
          }
        },
        (*genes_)[slot]);
  }

  std::int64_t eval(const Expr& e) const {
    const auto arg = [&](std::size_t i) -> Wide { return eval(e.args[i]); };
    switch (e.op) {
      case ExprOp::Const: return e.value;
      case ExprOp::Gene: return gene_value(static_cast<std::size_t>(e.value));
      case ExprOp::Register: return registers_[static_cast<std::size_t>(e.value)];
      case ExprOp::LoopIndex: return loops_[loops_.size() - 1 - static_cast<std::size_t>(e.value)];
      case ExprOp::Add: return saturate(arg(0) + arg(1));
      case ExprOp::Sub: return saturate(arg(0) - arg(1));
      case ExprOp::Mul: return saturate(arg(0) * arg(1));
      case ExprOp::Mod: {
        const auto d = arg(1);
        return d == 0 ? 0 : saturate(arg(0) % d);
      }
      case ExprOp::Abs: {
        const auto v = arg(0);
        return saturate(v < 0 ? -v : v);
      }
      case ExprOp::Compare:
        return compare(e.compare, eval(e.args[0]), eval(e.args[1])) ? 1 : 0;
      case ExprOp::And: return (eval(e.args[0]) != 0 && eval(e.args[1]) != 0) ? 1 : 0;
      case ExprOp::Or: return (eval(e.args[0]) != 0 || eval(e.args[1]) != 0) ? 1 : 0;
      case ExprOp::Not: return eval(e.args[0]) == 0 ? 1 : 0;
      case ExprOp::Length:
        return static_cast<std::int64_t>(string_gene(static_cast<std::size_t>(e.value)).size());
      case ExprOp::CharAt: {
        const auto& s = string_gene(static_cast<std::size_t>(e.value));
        const auto i = eval(e.args[0]);
        if (i < 0 || static_cast<std::size_t>(i) >= s.size()) return -1;
        return static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
      }
    }
    return 0;
  }

  const Program& program_;
  std::vector<BranchEvaluation>* trace_;
  std::vector<std::int64_t> registers_;
  std::vector<std::int64_t> loops_;
  const std::vector<GeneValue>* genes_ = nullptr;
  EvaluationResult result_;
};

}  // namespace

EvaluationResult execute(const Program& program, const TestCase& test,
                         std::vector<BranchEvaluation>* trace) {
  validate_test(program.schemas(), test);
  Interpreter interp(program, trace);
  for (const Action& a : test.actions) interp.run(a);
  return interp.take();
}

}  // namespace fitscape::sut
