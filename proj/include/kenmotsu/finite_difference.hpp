#pragma once

// Central finite differences.  Used as an independent oracle in tests and
// for derivatives of quantities with no closed form (slant functions).

#include <Eigen/Dense>

namespace kenmotsu {

template <typename F>
Eigen::VectorXd central_gradient(F&& f, const Eigen::VectorXd& x, double step = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double plus = f(probe);
    probe(i) = x(i) - step;
    const double minus = f(probe);
    probe(i) = x(i);
    g(i) = (plus - minus) / (2.0 * step);
  }
  return g;
}

template <typename F>
Eigen::MatrixXd central_hessian(F&& f, const Eigen::VectorXd& x, double step = 1e-4) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd probe = x;
  const double center = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe(i) = x(i) + step;
    const double plus = f(probe);
    probe(i) = x(i) - step;
    const double minus = f(probe);
    probe(i) = x(i);
    h(i, i) = (plus - 2.0 * center + minus) / (step * step);
    for (Eigen::Index j = 0; j < i; ++j) {
      auto at = [&](double si, double sj) {
        probe(i) = x(i) + si;
        probe(j) = x(j) + sj;
        const double v = f(probe);
        probe(i) = x(i);
        probe(j) = x(j);
        return v;
      };
      const double mixed =
          (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
          (4.0 * step * step);
      h(i, j) = mixed;
      h(j, i) = mixed;
    }
  }
  return h;
}

}  // namespace kenmotsu
