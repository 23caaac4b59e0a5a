#include "fitscape/program_format.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fitscape/error.hpp"

namespace fitscape::sut {

namespace {

using nlohmann::json;

const std::map<std::string, CompareOp, std::less<>> kCompareOps = {
    {"eq", CompareOp::Eq}, {"ne", CompareOp::Ne}, {"lt", CompareOp::Lt},
    {"le", CompareOp::Le}, {"gt", CompareOp::Gt}, {"ge", CompareOp::Ge},
};

const std::map<std::string, ExprOp, std::less<>> kArithmetic = {
    {"add", ExprOp::Add}, {"sub", ExprOp::Sub}, {"mul", ExprOp::Mul},
    {"mod", ExprOp::Mod}, {"and", ExprOp::And}, {"or", ExprOp::Or},
};

const std::map<std::string, PredicateKind, std::less<>> kKinds = {
    {"int_int", PredicateKind::IntInt},   {"int_zero", PredicateKind::IntZero},
    {"ref_null", PredicateKind::RefNull}, {"ref_ref", PredicateKind::RefRef},
    {"string_eq", PredicateKind::StringEq},
};

class Parser {
 public:
  Program parse(const json& doc) {
    const auto name = field<std::string>(doc, "name", "program");
    const auto description = doc.value("description", std::string{});
    if (doc.contains("registers")) {
      for (const auto& r : doc.at("registers")) registers_.push_back(r.get<std::string>());
    }
    const json& actions = require(doc, "actions", "program");
    if (!actions.is_array() || actions.empty()) fail("'actions' must be a non-empty array");

    for (const json& a : actions) {
      ActionSchema schema;
      schema.name = field<std::string>(a, "name", "action");
      for (const json& g : require(a, "genes", schema.name)) schema.genes.push_back(gene(g));
      schemas_.push_back(std::move(schema));
    }
    std::vector<std::vector<Statement>> bodies;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      current_ = i;
      bodies.push_back(block(require(actions[i], "body", schemas_[i].name), 0));
    }
    return Program(name, description, registers_, schemas_, std::move(bodies), branches_);
  }

 private:
  [[noreturn]] static void fail(const std::string& what) { throw ProgramFormatError(what); }

  static const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing '" + key + "'");
    return obj.at(key);
  }

  template <typename T>
  static T field(const json& obj, const char* key, const std::string& where) {
    try {
      return require(obj, key, where).get<T>();
    } catch (const json::exception&) {
      fail(where + ": field '" + key + "' has the wrong type");
    }
  }

  GeneSpec gene(const json& g) {
    GeneSpec spec;
    spec.name = field<std::string>(g, "name", "gene");
    const auto type = field<std::string>(g, "type", spec.name);
    if (type == "int") {
      spec.type = GeneType::Integer;
      spec.min = field<std::int64_t>(g, "min", spec.name);
      spec.max = field<std::int64_t>(g, "max", spec.name);
    } else if (type == "bool") {
      spec.type = GeneType::Boolean;
    } else if (type == "string") {
      spec.type = GeneType::String;
      spec.min_length = g.value("min_length", std::size_t{0});
      spec.max_length = field<std::size_t>(g, "max_length", spec.name);
      spec.alphabet = field<std::string>(g, "alphabet", spec.name);
    } else if (type == "ref") {
      spec.type = GeneType::Reference;
      spec.pool = field<std::int64_t>(g, "pool", spec.name);
    } else {
      fail("gene '" + spec.name + "': unknown type '" + type + "'");
    }
    return spec;
  }

  std::size_t gene_slot(const json& name) const {
    const auto& genes = schemas_[current_].genes;
    const auto n = name.get<std::string>();
    for (std::size_t i = 0; i < genes.size(); ++i) {
      if (genes[i].name == n) return i;
    }
    fail("action '" + schemas_[current_].name + "': unknown gene '" + n + "'");
  }

  std::size_t register_slot(const json& name) const {
    const auto n = name.get<std::string>();
    for (std::size_t i = 0; i < registers_.size(); ++i) {
      if (registers_[i] == n) return i;
    }
    fail("unknown register '" + n + "'");
  }

  Expr expr(const json& j) const {
    Expr e;
    if (j.is_number_integer()) {
      e.op = ExprOp::Const;
      e.value = j.get<std::int64_t>();
      return e;
    }
    if (j.is_boolean()) {
      e.value = j.get<bool>() ? 1 : 0;
      return e;
    }
    if (!j.is_array() || j.empty() || !j[0].is_string()) fail("malformed expression " + j.dump());
    const auto op = j[0].get<std::string>();
    const auto operands = [&](std::size_t n) {
      if (j.size() != n + 1) fail("expression '" + op + "' takes " + std::to_string(n) + " operands");
    };
    try {
      if (op == "gene") {
        operands(1);
        e.op = ExprOp::Gene;
        e.value = static_cast<std::int64_t>(gene_slot(j[1]));
      } else if (op == "reg") {
        operands(1);
        e.op = ExprOp::Register;
        e.value = static_cast<std::int64_t>(register_slot(j[1]));
      } else if (op == "index") {
        e.op = ExprOp::LoopIndex;
        e.value = j.size() > 1 ? j[1].get<std::int64_t>() : 0;
      } else if (op == "len") {
        operands(1);
        e.op = ExprOp::Length;
        e.value = static_cast<std::int64_t>(gene_slot(j[1]));
      } else if (op == "char") {
        operands(2);
        e.op = ExprOp::CharAt;
        e.value = static_cast<std::int64_t>(gene_slot(j[1]));
        e.args.push_back(expr(j[2]));
      } else if (op == "abs" || op == "not") {
        operands(1);
        e.op = op == "abs" ? ExprOp::Abs : ExprOp::Not;
        e.args.push_back(expr(j[1]));
      } else if (auto c = kCompareOps.find(op); c != kCompareOps.end()) {
        operands(2);
        e.op = ExprOp::Compare;
        e.compare = c->second;
        e.args = {expr(j[1]), expr(j[2])};
      } else if (auto a = kArithmetic.find(op); a != kArithmetic.end()) {
        operands(2);
        e.op = a->second;
        e.args = {expr(j[1]), expr(j[2])};
      } else {
        fail("unknown expression operator '" + op + "'");
      }
    } catch (const json::exception&) {
      fail("malformed expression " + j.dump());
    }
    return e;
  }

  Condition condition(const json& j) const {
    Condition c;
    const auto kind = field<std::string>(j, "kind", "condition");
    const auto k = kKinds.find(kind);
    if (k == kKinds.end()) fail("unknown predicate kind '" + kind + "'");
    c.kind = k->second;
    switch (c.kind) {
      case PredicateKind::IntInt: {
        const auto op = field<std::string>(j, "op", kind);
        const auto o = kCompareOps.find(op);
        if (o == kCompareOps.end()) fail("unknown comparison '" + op + "'");
        c.op = o->second;
        c.lhs = expr(require(j, "lhs", kind));
        c.rhs = expr(require(j, "rhs", kind));
        break;
      }
      case PredicateKind::IntZero:
        c.lhs = expr(require(j, "value", kind));
        break;
      case PredicateKind::RefNull:
        c.lhs = expr(require(j, "ref", kind));
        break;
      case PredicateKind::RefRef:
        c.lhs = expr(require(j, "lhs", kind));
        c.rhs = expr(require(j, "rhs", kind));
        break;
      case PredicateKind::StringEq:
        c.string_gene = gene_slot(require(j, "gene", kind));
        c.literal = field<std::string>(j, "literal", kind);
        break;
    }
    return c;
  }

  std::vector<Statement> block(const json& body, std::size_t depth) {
    if (!body.is_array()) fail("statement block must be an array");
    std::vector<Statement> out;
    for (const json& j : body) out.push_back(statement(j, depth));
    return out;
  }

  Statement statement(const json& j, std::size_t depth) {
    Statement s;
    if (j.contains("if")) {
      s.kind = Statement::Kind::If;
      s.condition = condition(j.at("if"));
      s.branch = branches_.size();
      BranchDescriptor d;
      d.id = s.branch;
      d.label = j.value("label", "b" + std::to_string(s.branch));
      d.kind = s.condition.kind;
      d.classification = classify(d.kind);
      d.then_target = then_target_of(d.id);
      d.else_target = else_target_of(d.id);
      d.action = current_;
      d.depth = depth;
      branches_.push_back(std::move(d));
      s.then_body = j.contains("then") ? block(j.at("then"), depth + 1) : std::vector<Statement>{};
      s.else_body = j.contains("else") ? block(j.at("else"), depth + 1) : std::vector<Statement>{};
    } else if (j.contains("loop")) {
      s.kind = Statement::Kind::Loop;
      s.count = expr(j.at("loop"));
      s.then_body = block(require(j, "body", "loop"), depth);
    } else if (j.contains("set")) {
      s.kind = Statement::Kind::Set;
      s.target_register = register_slot(j.at("set"));
      s.value = expr(require(j, "value", "set"));
    } else {
      fail("unknown statement " + j.dump());
    }
    return s;
  }

  std::vector<std::string> registers_;
  std::vector<ActionSchema> schemas_;
  std::vector<BranchDescriptor> branches_;
  std::size_t current_ = 0;
};

}  // namespace

Program parse_program(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ProgramFormatError(std::string("invalid program JSON: ") + e.what());
  }
  return Parser{}.parse(doc);
}

Program load_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open program file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str());
}

}  // namespace fitscape::sut
