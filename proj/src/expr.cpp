#include "kenmotsu/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>

namespace kenmotsu {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 6> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
}};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return f;
  }
  return std::nullopt;
}

NodePtr make_node(NodeKind kind, std::vector<NodePtr> children = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& params)
      : src_(src), params_(params) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expression();
    skip_space();
    if (pos_ < src_.size()) {
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) {
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      }
      throw ParseError(std::string("expected '") + c + "', found '" + src_[pos_] + "'", pos_);
    }
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(NodeKind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_node(NodeKind::subtract, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(NodeKind::multiply, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make_node(NodeKind::divide, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(NodeKind::negate, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_node(NodeKind::power, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        throw ParseError("malformed exponent", save);
      }
      digits();
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      throw ParseError("malformed number", start);
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const auto f = lookup_function(name);
      if (!f) throw UnknownIdentifierError(name, start);
      ++pos_;
      std::vector<NodePtr> args;
      skip_space();
      if (!accept(')')) {
        args.push_back(expression());
        while (accept(',')) args.push_back(expression());
        expect(')');
      }
      if (args.size() != 1) throw ArityError(name, args.size(), start);
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::call;
      n->function = *f;
      n->children = std::move(args);
      return n;
    }
    const auto it = std::find(params_.begin(), params_.end(), name);
    if (it == params_.end()) throw UnknownIdentifierError(name, start);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::parameter;
    n->parameter = static_cast<std::size_t>(it - params_.begin());
    return n;
  }

  std::string_view src_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer.
int level(const Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::subtract:
      return 1;
    case NodeKind::multiply:
    case NodeKind::divide:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::power:
      return 4;
    default:
      return 5;
  }
}

void print(const Node& n, const std::vector<std::string>& params, int required,
           std::string& out) {
  const bool paren = level(n) < required;
  if (paren) out += '(';
  switch (n.kind) {
    case NodeKind::constant: {
      std::array<char, 64> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      out.append(buf.data(), res.ptr);
      break;
    }
    case NodeKind::parameter:
      out += params.at(n.parameter);
      break;
    case NodeKind::negate:
      out += '-';
      print(*n.children[0], params, 3, out);
      break;
    case NodeKind::add:
    case NodeKind::subtract:
      print(*n.children[0], params, 1, out);
      out += n.kind == NodeKind::add ? " + " : " - ";
      print(*n.children[1], params, 2, out);
      break;
    case NodeKind::multiply:
    case NodeKind::divide:
      print(*n.children[0], params, 2, out);
      out += n.kind == NodeKind::multiply ? "*" : "/";
      print(*n.children[1], params, 3, out);
      break;
    case NodeKind::power:
      print(*n.children[0], params, 5, out);
      out += '^';
      print(*n.children[1], params, 3, out);
      break;
    case NodeKind::call:
      out += function_name(n.function);
      out += '(';
      print(*n.children[0], params, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

std::optional<int> integer_exponent(const Node& n) {
  const Node* c = &n;
  double sign = 1.0;
  if (c->kind == NodeKind::negate) {
    sign = -1.0;
    c = c->children[0].get();
  }
  if (c->kind != NodeKind::constant) return std::nullopt;
  const double v = sign * c->value;
  if (v != std::floor(v) || std::abs(v) > 64.0) return std::nullopt;
  return static_cast<int>(v);
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [n, fn] : kFunctions) {
    if (fn == f) return n;
  }
  return "?";
}

ExprAst parse(std::string_view source, const std::vector<std::string>& parameters) {
  Parser p(source, parameters);
  return ExprAst(p.parse(), parameters);
}

std::string to_string(const Node& node, const std::vector<std::string>& parameters) {
  std::string out;
  print(node, parameters, 0, out);
  return out;
}

std::string to_string(const ExprAst& ast) { return to_string(ast.root(), ast.parameters()); }

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::constant:
      if (a.value != b.value) return false;
      break;
    case NodeKind::parameter:
      if (a.parameter != b.parameter) return false;
      break;
    case NodeKind::call:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

CompiledExpr::CompiledExpr(ExprAst ast) : ast_(std::move(ast)) {
  emit(ast_.root());
  if (labels_.empty() || labels_.back() != to_string(ast_)) labels_.push_back(to_string(ast_));
}

void CompiledExpr::emit(const Node& node) {
  Instruction ins;
  switch (node.kind) {
    case NodeKind::constant:
      ins.op = Op::push_constant;
      ins.constant = node.value;
      break;
    case NodeKind::parameter:
      ins.op = Op::push_parameter;
      ins.index = node.parameter;
      break;
    case NodeKind::negate:
      emit(*node.children[0]);
      ins.op = Op::negate;
      break;
    case NodeKind::add:
    case NodeKind::subtract:
    case NodeKind::multiply:
    case NodeKind::divide:
      emit(*node.children[0]);
      emit(*node.children[1]);
      ins.op = node.kind == NodeKind::add        ? Op::add
               : node.kind == NodeKind::subtract ? Op::subtract
               : node.kind == NodeKind::multiply ? Op::multiply
                                                 : Op::divide;
      break;
    case NodeKind::power:
      emit(*node.children[0]);
      if (const auto k = integer_exponent(*node.children[1])) {
        ins.op = Op::power_int;
        ins.exponent = *k;
      } else {
        emit(*node.children[1]);
        ins.op = Op::power_general;
      }
      break;
    case NodeKind::call:
      emit(*node.children[0]);
      ins.op = Op::call;
      ins.function = node.function;
      break;
  }
  labels_.push_back(to_string(node, ast_.parameters()));
  ins.label = labels_.size() - 1;
  tape_.push_back(ins);
}

double CompiledExpr::operator()(std::span<const double> point) const {
  return evaluate<double>(point, [](double c) { return c; });
}

double CompiledExpr::operator()(const Eigen::VectorXd& point) const {
  return (*this)(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

CompiledExpr compile(std::string_view source, const std::vector<std::string>& parameters) {
  return CompiledExpr(parse(source, parameters));
}

double eval(const CompiledExpr& expr, const Eigen::VectorXd& point) { return expr(point); }

Dual2<double> dual2_eval(const CompiledExpr& expr, const Eigen::VectorXd& point,
                         std::span<const std::size_t> active) {
  const auto k = static_cast<Eigen::Index>(active.size());
  std::vector<Dual2<double>> args;
  args.reserve(static_cast<std::size_t>(point.size()));
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    args.push_back(Dual2<double>::constant(point(i), k));
  }
  for (std::size_t slot = 0; slot < active.size(); ++slot) {
    if (active[slot] >= args.size()) {
      throw DimensionError("dual2_eval: active index " + std::to_string(active[slot]) +
                           " out of range");
    }
    args[active[slot]] = Dual2<double>::variable(point(static_cast<Eigen::Index>(active[slot])),
                                                 static_cast<Eigen::Index>(slot), k);
  }
  return expr.evaluate<Dual2<double>>(std::span<const Dual2<double>>(args),
                                      [k](double c) { return Dual2<double>::constant(c, k); });
}

Dual2<double> dual2_eval(const CompiledExpr& expr, const Eigen::VectorXd& point) {
  std::vector<std::size_t> active(static_cast<std::size_t>(point.size()));
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  return dual2_eval(expr, point, active);
}

}  // namespace kenmotsu
