#include "doctest.h"

#include "kenmotsu/expr.hpp"
#include "support/random_expr.hpp"

#include <cmath>

using namespace kenmotsu;

namespace {

const std::vector<std::string> kChi{"u", "v", "theta", "phi", "t"};

NodePtr param(std::size_t i) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::parameter;
  n->parameter = i;
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = v;
  return n;
}

NodePtr op(NodeKind k, std::vector<NodePtr> c) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->children = std::move(c);
  return n;
}

NodePtr call(Function f, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->function = f;
  n->children = {std::move(arg)};
  return n;
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(structurally_equal(parse("u*cos(theta)", kChi).root(),
                           *op(NodeKind::multiply, {param(0), call(Function::cos, param(2))})));
  CHECK(structurally_equal(parse("-t", kChi).root(), *op(NodeKind::negate, {param(4)})));
  CHECK(structurally_equal(
      parse("3*theta+2*phi", kChi).root(),
      *op(NodeKind::add, {op(NodeKind::multiply, {num(3), param(2)}),
                          op(NodeKind::multiply, {num(2), param(3)})})));
}

TEST_CASE("precedence and associativity") {
  // Unary minus binds looser than power.
  CHECK(structurally_equal(parse("-u^2", kChi).root(),
                           *op(NodeKind::negate, {op(NodeKind::power, {param(0), num(2)})})));
  // Power is right associative.
  CHECK(structurally_equal(
      parse("u^v^t", kChi).root(),
      *op(NodeKind::power, {param(0), op(NodeKind::power, {param(1), param(4)})})));
  // Subtraction is left associative.
  CHECK(structurally_equal(
      parse("u - v - t", kChi).root(),
      *op(NodeKind::subtract, {op(NodeKind::subtract, {param(0), param(1)}), param(4)})));
  CHECK(structurally_equal(parse("u^-2", kChi).root(),
                           *op(NodeKind::power, {param(0), op(NodeKind::negate, {num(2)})})));
  CHECK(parse("  1.5e-3 ", kChi).root().value == 1.5e-3);
  CHECK(parse("2.", kChi).root().value == 2.0);
}

TEST_CASE("parse errors") {
  SUBCASE("unknown identifier names the token and offset") {
    try {
      parse("u + w", kChi);
      FAIL("expected an error");
    } catch (const UnknownIdentifierError& e) {
      CHECK(e.token() == "w");
      CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("foo(u)", kChi), UnknownIdentifierError);
  }
  SUBCASE("arity") {
    CHECK_THROWS_AS(parse("sin(u, v)", kChi), ArityError);
    CHECK_THROWS_AS(parse("cos()", kChi), ArityError);
  }
  SUBCASE("syntax with offsets") {
    try {
      parse("u * (v + 1", kChi);
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 10);
    }
    try {
      parse("u ** v", kChi);
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(parse("", kChi), ParseError);
    CHECK_THROWS_AS(parse("1e", kChi), ParseError);
    CHECK_THROWS_AS(parse("u v", kChi), ParseError);
  }
}

TEST_CASE("malformed corpus is rejected without crashing") {
  const std::vector<std::string> corpus{
      "(", ")", "u +", "* u", "sin", "sin(", "sin u", "u^", "^u", "1..2", "1e+", "()",
      "u,v", "u)", "((u)", "u $ v", "-", "--", "exp(()", ".5", "sqrt(u,,)", "3 4"};
  for (const auto& s : corpus) {
    CAPTURE(s);
    CHECK_THROWS_AS(parse(s, kChi), ParseError);
  }
  // Random token soup: either parses or throws a ParseError, nothing else.
  const std::vector<std::string> tokens{"u", "v", "(", ")", "+", "-", "*", "/", "^",
                                        "sin", "1", "2.5e1", ",", " ", "theta", "."};
  Rng rng(99);
  int rejected = 0;
  for (int k = 0; k < 5000; ++k) {
    std::string s;
    const int len = 1 + static_cast<int>(rng.next() % 12);
    for (int i = 0; i < len; ++i) s += tokens[rng.next() % tokens.size()];
    try {
      parse(s, kChi);
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  CHECK(rejected > 1000);
}

TEST_CASE("printing round-trips") {
  const std::vector<std::string> hand{
      "u*cos(theta)", "-t", "3*theta+2*phi", "-u^2", "(-u)^2", "u^v^t", "(u^v)^t",
      "u-(v-t)", "u/(v*t)", "u/v*t", "--u", "u*-v", "sqrt(u*u+v*v+13)", "0.1+1e-300",
      "exp(-(u - v))", "2^-1", "(u+v)*(u-v)"};
  testing::RandomExpr gen(kChi, 5);
  std::vector<std::string> corpus = hand;
  for (int k = 0; k < 300; ++k) corpus.push_back(gen.next(5));
  for (const auto& s : corpus) {
    CAPTURE(s);
    const ExprAst a = parse(s, kChi);
    const std::string printed = to_string(a);
    const ExprAst b = parse(printed, kChi);
    CHECK(structurally_equal(a.root(), b.root()));
    CHECK(to_string(b) == printed);
  }
  CHECK(to_string(parse("(u+v)*t", kChi)) == "(u + v)*t");
  CHECK(to_string(parse("((u))", kChi)) == "u");
}

TEST_CASE("eval") {
  const auto f = compile("sqrt(u*u+v*v+13)", {"u", "v"});
  CHECK(f(Eigen::Vector2d(0, 0)) == doctest::Approx(3.605551275463989).epsilon(1e-15));
  CHECK(compile("cos(theta)", kChi)(Eigen::VectorXd::Zero(5)) == 1.0);
  CHECK(compile("u*sin(phi)", {"u", "phi"})(Eigen::Vector2d(2.0, M_PI / 6)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(compile("2^10", {})(Eigen::VectorXd()) == 1024.0);
  CHECK(compile("4^0.5", {})(Eigen::VectorXd()) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("eval domain errors name the subexpression") {
  const std::vector<std::string> p{"u"};
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  try {
    compile("1 + log(u)", p)(zero);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "log(u)");
  }
  try {
    compile("u + 1/(u*u)", p)(zero);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "1/(u*u)");
  }
  CHECK_THROWS_AS(compile("sqrt(u - 1)", p)(zero), DomainError);
  CHECK_THROWS_AS(compile("(u - 1)^0.5", p)(zero), DomainError);
  CHECK_THROWS_AS(compile("u^-1", p)(zero), DomainError);
  CHECK_THROWS_AS(compile("exp(exp(exp(u + 10)))", p)(zero), DomainError);
  CHECK(compile("sqrt(u)", p)(zero) == 0.0);
  CHECK_THROWS_AS(dual2_eval(compile("sqrt(u)", p), zero), DomainError);
  CHECK_THROWS_AS(compile("u", p)(Eigen::VectorXd::Zero(2)), DimensionError);
}

TEST_CASE("real and dual evaluation agree bit for bit") {
  testing::RandomExpr gen(kChi, 17);
  Rng rng(18);
  for (int k = 0; k < 300; ++k) {
    const auto f = compile(gen.next(), kChi);
    const Eigen::VectorXd x = rng.uniform_vector(5, -1, 1);
    CHECK(dual2_eval(f, x).value() == f(x));
    const std::vector<std::size_t> none;
    CHECK(dual2_eval(f, x, none).value() == f(x));
  }
}

TEST_CASE("partial activation selects gradient slots") {
  const auto f = compile("u*theta + t^2", kChi);
  const std::vector<std::size_t> active{4, 0};
  const auto d = dual2_eval(f, Eigen::VectorXd::LinSpaced(5, 1, 5), active);
  CHECK(d.gradient().size() == 2);
  CHECK(d.gradient()(0) == 10.0);
  CHECK(d.gradient()(1) == 3.0);
  CHECK(d.hessian()(0, 0) == 2.0);
}

TEST_CASE("integer powers compile to repeated multiplication") {
  const auto f = compile("u^3 + u^-2 + u^0.5", {"u"});
  int ints = 0;
  int general = 0;
  for (const auto& ins : f.tape()) {
    ints += ins.op == CompiledExpr::Op::power_int;
    general += ins.op == CompiledExpr::Op::power_general;
  }
  CHECK(ints == 2);
  CHECK(general == 1);
  CHECK(f(Eigen::VectorXd::Constant(1, 2.0)) == doctest::Approx(8.0 + 0.25 + std::sqrt(2.0)));
}
