#include "doctest.h"

#include "kenmotsu/slant.hpp"
#include "support/immersions.hpp"

#include <cmath>
#include <numbers>

using namespace kenmotsu;
using testing::chi_example;
using testing::product_cone;

namespace {

const std::vector<std::string> kProductParams{"u", "v", "a", "b", "t"};

Distribution coords(const std::string& name, const std::vector<std::string>& params,
                    std::vector<std::size_t> idx) {
  Distribution d{name, {}};
  for (auto i : idx) d.generators.push_back(FieldExpr::coordinate(params, i));
  return d;
}

FieldExpr xi_field(const std::vector<std::string>& params) {
  return FieldExpr::coordinate(params, params.size() - 1);
}

// Closed-form slant angles of the product cone.
double product_theta1(double u) {
  return std::acos(std::abs(0.6 - 0.48 * u) / std::sqrt(1 + 0.36 * u * u));
}
double product_theta2(double a) {
  return std::acos(std::abs(0.8 - 0.24 * a) / std::sqrt(1 + 0.16 * a * a));
}

// Slice (x1, y1, x2, y2, t) of R^{2m+1}, all other coordinates zero.
Immersion slice(int m, const std::vector<std::string>& comps5) {
  std::vector<std::string> c(static_cast<std::size_t>(2 * m + 1), "0");
  for (std::size_t k = 0; k < 4; ++k) c[k] = comps5[k];
  c.back() = comps5[4];
  return Immersion({"p", "q", "r", "s", "t"}, c, Box(5, {-1.0, 1.0}));
}

const std::vector<std::string> kSliceParams{"p", "q", "r", "s", "t"};

}  // namespace

TEST_CASE("slant angles of the product cone match the closed form") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const auto d1 = coords("D1", kProductParams, {0, 1});
  const auto d2 = coords("D2", kProductParams, {2, 3});
  for (const auto& p : random_points(chi.box(), 10, 11)) {
    const SubmanifoldFrame f(chi, s, p);
    const auto b = build_bislant(f, d1, d2, xi_field(kProductParams), BiSlantMode::strict, 3);
    CHECK(b.theta1.theta == doctest::Approx(product_theta1(p(0))).epsilon(1e-10));
    CHECK(b.theta2.theta == doctest::Approx(product_theta2(p(2))).epsilon(1e-10));
    CHECK(b.theta1.spread <= 1e-7);
    CHECK(b.theta2.spread <= 1e-7);
    for (double a : b.theta1.per_vector) CHECK(std::abs(a - b.theta1.spectral_theta) <= 1e-7);
    for (double a : b.theta2.per_vector) CHECK(std::abs(a - b.theta2.spectral_theta) <= 1e-7);
    CHECK(b.theta1.spectral_spread <= 1e-12);
    CHECK(b.bislant());
    CHECK(b.proper);
    CHECK(b.phi_d1_perp <= 1e-12);
    CHECK(b.qd_orthogonality <= 1e-12);
    CHECK(b.nu_invariance <= 1e-12);
    CHECK(b.qd1.cols() == 2);
    CHECK(b.qd2.cols() == 2);
    CHECK(b.nu.cols() == 2);
    CHECK(b.p3_3[0] <= 1e-12);
    CHECK(b.p3_3[1] <= 1e-12);
    CHECK(b.trace_bookkeeping <= 1e-12);

    for (const auto* d : {&b.d1, &b.d2}) {
      const double c2 = (d == &b.d1) ? b.cos2_1() : b.cos2_2();
      const auto r = slant_relations(f, *d, c2);
      CHECK(r.p_squared <= 1e-12);
      CHECK(r.pp <= 1e-12);
      CHECK(r.qq <= 1e-12);
      CHECK(r.bq <= 1e-12);
      CHECK(r.cq <= 1e-12);
    }

    const VectorXd spectrum = slant_spectrum(f);
    VectorXd expect(4);
    expect << std::pow(std::cos(product_theta1(p(0))), 2), std::pow(std::cos(product_theta1(p(0))), 2),
        std::pow(std::cos(product_theta2(p(2))), 2), std::pow(std::cos(product_theta2(p(2))), 2);
    std::sort(expect.begin(), expect.end());
    CHECK((spectrum - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("swapping the distributions exchanges the angles") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const auto d1 = coords("D1", kProductParams, {0, 1});
  const auto d2 = coords("D2", kProductParams, {2, 3});
  const SubmanifoldFrame f(chi, s, (VectorXd(5) << 0.2, -0.4, 0.7, 0.1, 0.3).finished());
  const auto b = build_bislant(f, d1, d2, xi_field(kProductParams), BiSlantMode::strict, 3);
  const auto c = build_bislant(f, d2, d1, xi_field(kProductParams), BiSlantMode::strict, 3);
  CHECK(b.theta1.spectral_theta == doctest::Approx(c.theta2.spectral_theta).epsilon(1e-14));
  CHECK(b.theta2.spectral_theta == doctest::Approx(c.theta1.spectral_theta).epsilon(1e-14));
}

TEST_CASE("structural hypotheses are rejected") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const SubmanifoldFrame f(chi, s, (VectorXd(5) << 0.2, -0.4, 0.7, 0.1, 0.3).finished());
  const auto d1 = coords("D1", kProductParams, {0, 1});
  const auto d2 = coords("D2", kProductParams, {2, 3});
  const auto xi = xi_field(kProductParams);
  CHECK_THROWS_AS(build_bislant(f, d1, d1, xi, BiSlantMode::forced, 1), HypothesisError);
  CHECK_THROWS_AS(build_bislant(f, coords("D1", kProductParams, {0}), d2, xi,
                                BiSlantMode::forced, 1),
                  HypothesisError);
  // d/du + d/da is not orthogonal to D2.
  Distribution skew{"D1", {FieldExpr::parse("X", {"1", "0", "1", "0", "0"}, kProductParams),
                           FieldExpr::coordinate(kProductParams, 1)}};
  CHECK_THROWS_AS(build_bislant(f, skew, d2, xi, BiSlantMode::forced, 1), HypothesisError);
  // The angle of xi is undefined.
  const auto with_xi = evaluate_distribution(f, coords("D", kProductParams, {4}));
  CHECK_THROWS_AS(slant_angle(f, with_xi, 1), HypothesisError);
  // A field that is not xi.
  CHECK_THROWS_AS(build_bislant(f, d1, d2, FieldExpr::coordinate(kProductParams, 0),
                                BiSlantMode::forced, 1),
                  HypothesisError);
}

TEST_CASE("invariant and anti-invariant slices") {
  const KenmotsuStructure s(3);
  const auto xi = xi_field(kSliceParams);
  const auto d1 = coords("D1", kSliceParams, {0, 1});
  const auto d2 = coords("D2", kSliceParams, {2, 3});

  // x1 = p, y1 = q, x2 = r, y2 = s: phi-invariant.
  const Immersion inv = slice(3, {"p", "q", "r", "s", "t"});
  const SubmanifoldFrame fi(inv, s, (VectorXd(5) << 0.1, 0.2, 0.3, 0.4, 0.5).finished());
  const auto bi = build_bislant(fi, d1, d2, xi, BiSlantMode::strict, 2);
  CHECK(bi.theta1.theta <= 1e-7);
  CHECK(bi.theta2.theta <= 1e-7);
  CHECK(std::abs(bi.theta1.theta - bi.theta1.spectral_theta) <= 1e-7);
  CHECK(!bi.proper);
  CHECK(bi.qd1.cols() == 0);
  CHECK(bi.qd2.cols() == 0);
  CHECK(bi.nu.cols() == 2);

  // x1 = p, x2 = q, x3 = r: phi maps the tangent directions to normals.
  std::vector<std::string> c(7, "0");
  c[0] = "p";
  c[2] = "q";
  c[4] = "r";
  c[6] = "t";
  const Immersion anti({"p", "q", "r", "t"}, c, Box(4, {-1.0, 1.0}));
  const std::vector<std::string> ap{"p", "q", "r", "t"};
  const SubmanifoldFrame fa(anti, s, (VectorXd(4) << 0.1, 0.2, 0.3, -0.4).finished());
  const auto ba = build_bislant(fa, coords("D1", ap, {0}), coords("D2", ap, {1, 2}),
                                xi_field(ap), BiSlantMode::strict, 2);
  CHECK(ba.theta1.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(ba.theta2.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(ba.qd1.cols() == 1);
  CHECK(ba.qd2.cols() == 2);
  CHECK(ba.nu.cols() == 0);
  const auto r = slant_relations(fa, ba.d2, 0.0);
  CHECK(r.qq <= 1e-12);
  CHECK(r.bq <= 1e-12);
}

TEST_CASE("the example is not bi-slant at generic points") {
  const Immersion chi = chi_example();
  const KenmotsuStructure s(6);
  const auto& params = testing::kChiParams;
  const auto d1 = coords("D1", params, {0, 1});
  const auto d2 = coords("D2", params, {2, 3});
  const auto xi = xi_field(params);

  const SubmanifoldFrame f(chi, s, (VectorXd(5) << 1.2, 0.7, 0.3, -0.5, 0.2).finished());
  CHECK_THROWS_AS(build_bislant(f, d1, d2, xi, BiSlantMode::strict, 9), HypothesisError);
  const auto b = build_bislant(f, d1, d2, xi, BiSlantMode::forced, 9);
  CHECK(!b.bislant());
  CHECK(b.theta1.spread > 1e-3);
  CHECK(b.theta1.spectral_spread > 1e-3);
  CHECK(b.phi_d1_perp > 1e-3);

  // At u = v = 1, theta = phi = 0: D1 is invariant and cos of the D2 angle is 5/9.
  const SubmanifoldFrame f0(chi, s, (VectorXd(5) << 1, 1, 0, 0, 0).finished());
  const auto b0 = build_bislant(f0, d1, d2, xi, BiSlantMode::forced, 9);
  CHECK(b0.theta1.theta <= 1e-7);
  CHECK(b0.slant1);
  CHECK(std::cos(b0.theta2.spectral_theta) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("connection identities on the product cone") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const auto d1 = coords("D1", kProductParams, {0, 1});
  const auto d2 = coords("D2", kProductParams, {2, 3});
  for (const auto& p : random_points(chi.box(), 5, 21)) {
    const SubmanifoldFrame f(chi, s, p);
    const auto b = build_bislant(f, d1, d2, xi_field(kProductParams), BiSlantMode::strict, 3);
    double r34 = 0, r35 = 0, r35xi = 0;
    for (const auto& r : bislant_connection_residuals(f, b)) {
      if (r.eq_ref == "3.4") r34 = std::max(r34, r.residual());
      if (r.eq_ref == "3.5") r35 = std::max(r35, r.residual());
      if (r.eq_ref == "3.5/xi") r35xi = std::max(r35xi, r.residual());
    }
    CAPTURE(p.transpose());
    CHECK(r34 <= 1e-10);
    CHECK(r35 <= 1e-10);
    // At X = xi the left side is -(sin^2 th2 - sin^2 th1) g(Z, W) and the
    // right side is -g(Z, W).
    CHECK(r35xi >= 1e-3);

    const auto fol = foliation_criteria(f, b);
    // The base leaves (a, b fixed) are totally geodesic; the fibres are not.
    CHECK(fol.geometric_d1 <= 1e-10);
    CHECK(fol.geometric_d2 >= 0.1);
  }
}
