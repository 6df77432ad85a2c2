#pragma once

// Random well-conditioned expressions over parameters in [-1, 1].  Every
// denominator, log and sqrt argument is kept away from its singular set so
// the expressions are smooth on the whole sampling box.

#include "kenmotsu/sampling.hpp"

#include <string>
#include <vector>

namespace kenmotsu::testing {

class RandomExpr {
 public:
  RandomExpr(std::vector<std::string> params, std::uint64_t seed)
      : params_(std::move(params)), rng_(seed) {}

  std::string next(int depth = 4) { return gen(depth); }

 private:
  int pick(int n) { return static_cast<int>(rng_.next() % static_cast<std::uint64_t>(n)); }

  std::string leaf() {
    if (pick(3) == 0) {
      const double c = rng_.uniform(-2.0, 2.0);
      std::string s = std::to_string(std::abs(c));
      return c < 0 ? "(-" + s + ")" : s;
    }
    return params_[static_cast<std::size_t>(pick(static_cast<int>(params_.size())))];
  }

  std::string gen(int depth) {
    if (depth == 0) return leaf();
    const std::string a = gen(depth - 1);
    switch (pick(12)) {
      case 0: return "(" + a + " + " + gen(depth - 1) + ")";
      case 1: return "(" + a + " - " + gen(depth - 1) + ")";
      case 2: return "(" + a + ")*(" + gen(depth - 1) + ")";
      case 3: return "(" + a + ")/(2 + sin(" + gen(depth - 1) + "))";
      case 4: return "(" + a + ")/(1 + (" + gen(depth - 1) + ")^2)";
      case 5: return "sin(" + a + ")";
      case 6: return "cos(" + a + ")";
      case 7: return "exp(0.5*sin(" + a + "))";
      case 8: return "log(2 + cos(" + a + "))";
      case 9: return "sqrt(1 + (" + a + ")^2)";
      case 10: return "(1.5 + sin(" + a + "))^0.7";
      default: return "-(" + a + ")^3";
    }
  }

  std::vector<std::string> params_;
  Rng rng_;
};

}  // namespace kenmotsu::testing
