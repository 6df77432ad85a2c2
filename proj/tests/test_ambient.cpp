#include "doctest.h"

#include "kenmotsu/ambient.hpp"
#include "kenmotsu/finite_difference.hpp"
#include "kenmotsu/sampling.hpp"

#include <cmath>

using namespace kenmotsu;

namespace {

VectorXd point13(double t) {
  VectorXd p = VectorXd::Zero(13);
  p(12) = t;
  return p;
}

// x_i and y_i index helpers for the interleaved coordinate order.
Eigen::Index x(int i) { return 2 * (i - 1); }
Eigen::Index y(int i) { return 2 * (i - 1) + 1; }

}  // namespace

TEST_CASE("phi") {
  const KenmotsuStructure s(6);
  const VectorXd p = point13(0.3);
  CHECK(s.apply_phi(p, s.xi()).isZero(0.0));
  const VectorXd dx1 = VectorXd::Unit(13, x(1));
  const VectorXd dy1 = VectorXd::Unit(13, y(1));
  CHECK(s.apply_phi(p, dx1) == dy1);
  CHECK(s.apply_phi(p, s.apply_phi(p, dx1)) == -dx1);
  CHECK_THROWS_AS(s.apply_phi(p, VectorXd::Zero(5)), DimensionError);

  const KenmotsuStructure opposite(6, MetricModel::kenmotsu, PhiConvention::opposite);
  CHECK(opposite.apply_phi(p, dx1) == -dy1);
}

TEST_CASE("metric") {
  const KenmotsuStructure s(6);
  const VectorXd dx1 = VectorXd::Unit(13, x(1));
  const VectorXd dy1 = VectorXd::Unit(13, y(1));
  CHECK(s.metric_eval(point13(0.7), s.xi(), s.xi()) == 1.0);
  CHECK(s.metric_eval(point13(0.0), dx1, dx1) == 1.0);
  CHECK(s.metric_eval(point13(1.0), dx1, dx1) == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
  CHECK(s.metric_eval(point13(0.4), dx1, dy1) == 0.0);
  const MatrixXd g = s.metric(point13(-0.5));
  CHECK(sym_eigen(g).values.minCoeff() > 0.0);
}

TEST_CASE("christoffel symbols against the closed form") {
  const KenmotsuStructure s(6);
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const VectorXd p = rng.uniform_vector(13, -1, 1);
    const double t = p(12);
    const Christoffel c = christoffel(s, p);
    const auto T = static_cast<std::size_t>(s.t_index());
    CHECK(c.gamma[T](x(1), x(1)) == doctest::Approx(-std::exp(2 * t)).epsilon(1e-14));
    CHECK(c.gamma[T](y(3), y(3)) == doctest::Approx(-std::exp(2 * t)).epsilon(1e-14));
    CHECK(c.gamma[static_cast<std::size_t>(x(1))](x(1), 12) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.gamma[static_cast<std::size_t>(x(1))](12, x(1)) == doctest::Approx(1.0).epsilon(1e-14));
    // Three distinct spatial indices.
    for (Eigen::Index a = 0; a < 12; ++a) {
      for (Eigen::Index b = 0; b < 12; ++b) {
        for (Eigen::Index d = 0; d < 12; ++d) {
          if (a != b && b != d && a != d) {
            CHECK(c.gamma[static_cast<std::size_t>(a)](b, d) == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("christoffel symbols against finite differences of the metric") {
  const KenmotsuStructure s(2);
  const VectorXd p = (VectorXd(5) << 0.1, -0.3, 0.5, 0.2, 0.35).finished();
  const Christoffel c = christoffel(s, p);
  const MatrixXd ginv = s.metric(p).inverse();
  const Eigen::Index n = 5;
  // ∂_k g_ij by central differences.
  std::vector<MatrixXd> dg(n, MatrixXd(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const VectorXd grad = central_gradient(
          [&](const VectorXd& q) { return s.metric(q)(i, j); }, p);
      for (Eigen::Index k = 0; k < n; ++k) dg[k](i, j) = grad(k);
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double v = 0.0;
        for (Eigen::Index l = 0; l < n; ++l) {
          v += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        }
        CHECK(c.gamma[k](i, j) == doctest::Approx(v).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("covariant derivative") {
  const KenmotsuStructure s(6);
  const VectorXd p = point13(0.25);
  const Christoffel c = christoffel(s, p);
  const VectorXd dx1 = VectorXd::Unit(13, x(1));
  const VectorXd zero = VectorXd::Zero(13);
  CHECK((ambient_covariant_derivative(c, s.xi(), zero, dx1) - dx1).norm() <= 1e-14);
  CHECK(ambient_covariant_derivative(c, s.xi(), zero, s.xi()).norm() <= 1e-14);
  CHECK_THROWS_AS(ambient_covariant_derivative(c, s.xi(), VectorXd(), dx1), DimensionError);
  // Leibniz: ∇(a Y) = (Xa) Y + a ∇Y for a = 3 + direction-dependent slope 2.
  const VectorXd Y = VectorXd::Unit(13, y(2));
  const VectorXd lhs = ambient_covariant_derivative(c, 3.0 * Y, 2.0 * Y, dx1);
  const VectorXd rhs = 2.0 * Y + 3.0 * ambient_covariant_derivative(c, Y, zero, dx1);
  CHECK((lhs - rhs).norm() <= 1e-14);
}

TEST_CASE("kenmotsu axioms hold on the model") {
  const KenmotsuStructure s(6);
  const auto points = random_points(Box(13, {-1.0, 1.0}), 100, 2024);
  const AxiomReport r = check_kenmotsu_axioms(s, points, 2024);
  for (const auto& e : r.residuals) {
    CAPTURE(e.name);
    CHECK(e.max_residual <= 1e-8);
  }
  CHECK(r.max_for("2.1") == 0.0);
  CHECK(r.find("phi_isometry").max_residual <= 1e-12);
  CHECK(r.find("phi_skew").max_residual <= 1e-12);
}

TEST_CASE("both phi conventions satisfy the axioms") {
  const KenmotsuStructure s(3, MetricModel::kenmotsu, PhiConvention::opposite);
  const auto points = random_points(Box(7, {-1.0, 1.0}), 20, 5);
  const AxiomReport r = check_kenmotsu_axioms(s, points, 5);
  for (const auto& e : r.residuals) CHECK(e.max_residual <= 1e-8);
}

TEST_CASE("cosymplectic control violates the Kenmotsu axioms") {
  const KenmotsuStructure s(6, MetricModel::cosymplectic);
  const auto points = random_points(Box(13, {-1.0, 1.0}), 100, 2024);
  const AxiomReport r = check_kenmotsu_axioms(s, points, 2024);
  CHECK(r.max_for("2.4") > 0.1);
  CHECK(r.max_for("2.1") == 0.0);
  CHECK(r.max_for("2.3") <= 1e-12);
}
