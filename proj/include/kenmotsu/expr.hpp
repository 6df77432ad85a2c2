#pragma once

// Scalar expression language used for immersion components, warping
// functions and other scalar fields over the parameter space.
//
// Grammar, lowest to highest precedence:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?            right associative
//   atom    := number | name | name '(' expr ')' | '(' expr ')'
// Functions: sin cos tan exp log sqrt.

#include "kenmotsu/dual2.hpp"
#include "kenmotsu/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kenmotsu {

enum class NodeKind { constant, parameter, negate, add, subtract, multiply, divide, power, call };
enum class Function { sin, cos, tan, exp, log, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;           // constant
  std::size_t parameter = 0;    // parameter index
  Function function = Function::sin;
  std::vector<NodePtr> children;
};

class ExprAst {
 public:
  ExprAst(NodePtr root, std::vector<std::string> parameters)
      : root_(std::move(root)), parameters_(std::move(parameters)) {}

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::vector<std::string>& parameters() const { return parameters_; }

 private:
  NodePtr root_;
  std::vector<std::string> parameters_;
};

ExprAst parse(std::string_view source, const std::vector<std::string>& parameters);

// Minimal-parenthesis rendering that reparses to the same tree.
std::string to_string(const ExprAst& ast);
std::string to_string(const Node& node, const std::vector<std::string>& parameters);

bool structurally_equal(const Node& a, const Node& b);

std::string_view function_name(Function f);

// Flattened postfix program for an expression.
class CompiledExpr {
 public:
  enum class Op { push_constant, push_parameter, negate, add, subtract, multiply, divide,
                  power_int, power_general, call };

  struct Instruction {
    Op op = Op::push_constant;
    double constant = 0.0;
    std::size_t index = 0;
    int exponent = 0;
    Function function = Function::sin;
    std::size_t label = 0;  // index into labels(): source text of the subtree
  };

  explicit CompiledExpr(ExprAst ast);

  std::size_t arity() const { return ast_.parameters().size(); }
  const ExprAst& ast() const { return ast_; }
  const std::vector<Instruction>& tape() const { return tape_; }
  const std::string& source() const { return labels_.back(); }

  // Evaluate over any scalar type closed under the DSL operations.
  // make_constant turns a double into that scalar type.
  template <typename T, typename MakeConstant>
  T evaluate(std::span<const T> point, MakeConstant&& make_constant) const;

  double operator()(std::span<const double> point) const;
  double operator()(const Eigen::VectorXd& point) const;

 private:
  void emit(const Node& node);

  ExprAst ast_;
  std::vector<Instruction> tape_;
  std::vector<std::string> labels_;
};

CompiledExpr compile(std::string_view source, const std::vector<std::string>& parameters);

double eval(const CompiledExpr& expr, const Eigen::VectorXd& point);

// Value, gradient and Hessian with respect to the parameters listed in
// `active` (indices into the declared parameter list, in slot order).
Dual2<double> dual2_eval(const CompiledExpr& expr, const Eigen::VectorXd& point,
                         std::span<const std::size_t> active);

// All parameters active.
Dual2<double> dual2_eval(const CompiledExpr& expr, const Eigen::VectorXd& point);

namespace detail {

inline double scalar_value(double v) { return v; }
template <typename S>
S scalar_value(const Dual2<S>& v) {
  return v.value();
}

inline bool has_derivatives(double) { return false; }
template <typename S>
bool has_derivatives(const Dual2<S>&) {
  return true;
}

}  // namespace detail

template <typename T, typename MakeConstant>
T CompiledExpr::evaluate(std::span<const T> point, MakeConstant&& make_constant) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;
  if (point.size() != arity()) {
    throw DimensionError("expression '" + source() + "' expects " + std::to_string(arity()) +
                         " parameters, got " + std::to_string(point.size()));
  }
  std::vector<T> stack;
  stack.reserve(tape_.size());
  auto fail = [this](const char* what, const Instruction& ins) {
    throw DomainError(what, labels_[ins.label]);
  };
  for (const Instruction& ins : tape_) {
    switch (ins.op) {
      case Op::push_constant:
        stack.push_back(make_constant(ins.constant));
        break;
      case Op::push_parameter:
        stack.push_back(point[ins.index]);
        break;
      case Op::negate:
        stack.back() = -stack.back();
        break;
      case Op::add:
      case Op::subtract:
      case Op::multiply:
      case Op::divide:
      case Op::power_general: {
        T rhs = std::move(stack.back());
        stack.pop_back();
        T& lhs = stack.back();
        if (ins.op == Op::add) {
          lhs = lhs + rhs;
        } else if (ins.op == Op::subtract) {
          lhs = lhs - rhs;
        } else if (ins.op == Op::multiply) {
          lhs = lhs * rhs;
        } else if (ins.op == Op::divide) {
          if (detail::scalar_value(rhs) == 0.0) fail("division by zero", ins);
          lhs = lhs / rhs;
        } else {
          if (!(detail::scalar_value(lhs) > 0.0)) {
            fail("non-integer power of a non-positive base", ins);
          }
          lhs = exp(rhs * log(lhs));
        }
        break;
      }
      case Op::power_int: {
        T& base = stack.back();
        if (ins.exponent < 0 && detail::scalar_value(base) == 0.0) {
          fail("negative power of zero", ins);
        }
        base = powi(base, ins.exponent);
        break;
      }
      case Op::call: {
        T& arg = stack.back();
        const double x = detail::scalar_value(arg);
        switch (ins.function) {
          case Function::sin:
            arg = sin(arg);
            break;
          case Function::cos:
            arg = cos(arg);
            break;
          case Function::tan:
            if (cos(x) == 0.0) fail("tan at a pole", ins);
            arg = tan(arg);
            break;
          case Function::exp:
            arg = exp(arg);
            break;
          case Function::log:
            if (!(x > 0.0)) fail("log of a non-positive value", ins);
            arg = log(arg);
            break;
          case Function::sqrt:
            if (!(x >= 0.0)) fail("sqrt of a negative value", ins);
            if (x == 0.0 && detail::has_derivatives(arg)) {
              fail("sqrt is not differentiable at 0", ins);
            }
            arg = sqrt(arg);
            break;
        }
        break;
      }
    }
    if (!std::isfinite(detail::scalar_value(stack.back()))) fail("non-finite result", ins);
  }
  return std::move(stack.back());
}

}  // namespace kenmotsu
