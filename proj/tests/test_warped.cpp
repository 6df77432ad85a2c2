#include "doctest.h"

#include "kenmotsu/warped.hpp"
#include "support/immersions.hpp"

#include <cmath>
#include <map>

using namespace kenmotsu;
using testing::chi_example;
using testing::kChiParams;
using testing::product_cone;

namespace {

const std::vector<std::string> kProductParams{"u", "v", "a", "b", "t"};

Distribution coords(const std::string& name, const std::vector<std::string>& params,
                    std::vector<std::size_t> idx) {
  Distribution d{name, {}};
  for (auto i : idx) d.generators.push_back(FieldExpr::coordinate(params, i));
  return d;
}

WarpedModel make_model(const Immersion& chi, const KenmotsuStructure& s,
                       const std::vector<std::string>& params, const std::string& f) {
  WarpedModel m;
  m.immersion = &chi;
  m.structure = &s;
  m.d1 = coords("D1", params, {0, 1});
  m.d2 = coords("D2", params, {2, 3});
  m.xi_field = FieldExpr::coordinate(params, 4);
  m.partition = {{0, 1, 4}, {2, 3}};
  m.f = compile(f, params);
  m.seed = 7;
  return m;
}

std::map<std::string, double> worst_by_tag(const std::vector<LemmaResidual>& rs) {
  std::map<std::string, double> out;
  for (const auto& r : rs) out[r.eq_ref] = std::max(out[r.eq_ref], r.residual());
  return out;
}

}  // namespace

TEST_CASE("the product cone satisfies the warped identities") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const WarpedModel m = make_model(chi, s, kProductParams, "exp(t)");
  for (const auto& p : random_points(chi.box(), 4, 31)) {
    CAPTURE(p.transpose());
    const WarpedPoint w(m, p);
    CHECK(w.ln_f(w.frame().xi()) == doctest::Approx(1.0).epsilon(1e-14));

    for (const auto& c : warp_connection_residuals(w)) CHECK(c.residual <= 1e-10);

    const auto worst = worst_by_tag(warped_identity_residuals(w, warped_identity_tags()));
    CHECK(worst.size() == warped_identity_tags().size());
    for (const auto& [tag, r] : worst) {
      CAPTURE(tag);
      if (tag == "4.19") {
        // The stated sign of the g(∇̄_Z X, P2 W) term is wrong: the residual is
        // 2 (X ln f) g(Z, P2 W), which does not vanish.
        CHECK(r >= 0.1);
      } else {
        CHECK(r <= 1e-8);
      }
    }
    for (double c : warping_gradient_condition(w)) CHECK(std::abs(c) <= 1e-8);

    const auto mt = mixed_tg_diagnostic(w);
    CHECK(mt.hypothesis);
    CHECK(mt.mass <= 1e-12);
    CHECK(mt.branch_ii_holds);
    CHECK(!mt.branch_i_holds);
    CHECK(mt.corollary_holds);

    const auto ch = characterization_check(w, compile("t", kProductParams));
    CHECK(ch.condition <= 1e-10);
    CHECK(ch.leaf_umbilicity <= 1e-10);
    CHECK_THROWS_AS(characterization_check(w, compile("a", kProductParams)), HypothesisError);

    const AdaptedFrame af = build_adapted_frame(w);
    CHECK(af.p == 1);
    CHECK(af.q == 1);
    CHECK(af.orthonormality <= 1e-8);
    const auto in = inequality_61(w, af, mt);
    CHECK(in.asserted);
    CHECK(in.resum_62 <= 1e-10);
    CHECK(in.resum_63 <= 1e-10);
    CHECK(in.lhs == doctest::Approx(second_fundamental_form(w.frame()).squared_norm));
    // Only xi carries ln f, so the bound is zero.
    CHECK(std::abs(in.rhs) <= 1e-12);
    CHECK(in.slack >= 0.0);
  }
}

TEST_CASE("the warped fit of the product cone") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const auto f = compile("exp(t)", kProductParams);
  const auto fit = fit_warped_metric(chi, s, {{0, 1, 4}, {2, 3}}, random_points(chi.box(), 8, 3), &f);
  CHECK(fit.off_diagonal <= 1e-14);
  CHECK(fit.base_dependence <= 1e-12);
  CHECK(fit.conformal <= 1e-12);
  CHECK(!fit.trivial);
  CHECK(*fit.candidate_deviation <= 1e-12);
}

TEST_CASE("the example metric is not a warped product") {
  const Immersion chi = chi_example();
  const KenmotsuStructure s(6);
  const WarpedPartition part{{0, 1, 4}, {2, 3}};

  // At t = 0 the trace of the fiber block reproduces f^2 = u^2 + v^2 + 13.
  auto samples = random_points(chi.box(), 8, 5);
  for (auto& p : samples) p(4) = 0.0;
  const auto f = compile("sqrt(u^2+v^2+13)", kChiParams);
  const auto fit0 = fit_warped_metric(chi, s, part, samples, &f);
  CHECK(fit0.f_squared.front() ==
        doctest::Approx(samples.front()(0) * samples.front()(0) +
                        samples.front()(1) * samples.front()(1) + 13)
            .epsilon(1e-12));
  CHECK(*fit0.candidate_scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*fit0.candidate_deviation <= 1e-8);
  // The off-diagonal entry 12 of the fiber block is not proportional to f^2.
  CHECK(fit0.conformal >= 1e-3);

  // Away from t = 0 every block carries e^{2t}.
  const auto samples_t = random_points(chi.box(), 8, 5);
  const auto fit_t = fit_warped_metric(chi, s, part, samples_t, &f);
  CHECK(*fit_t.candidate_deviation >= 0.1);
  const auto f_t = compile("exp(t)*sqrt(u^2+v^2+13)", kChiParams);
  CHECK(*fit_warped_metric(chi, s, part, samples_t, &f_t).candidate_deviation <= 1e-10);

  // theta and phi are not orthogonal.
  const auto mixed = fit_warped_metric(chi, s, {{0, 1, 2, 4}, {3}}, samples, nullptr);
  CHECK(mixed.off_diagonal >= 0.1);

  CHECK_THROWS_AS(fit_warped_metric(chi, s, {{0, 1}, {2, 3}}, samples, nullptr), ScenarioError);
  CHECK_THROWS_AS(fit_warped_metric(chi, s, {{0, 1, 4}, {2, 3, 4}}, samples, nullptr),
                  ScenarioError);
  CHECK_THROWS_AS(fit_warped_metric(chi, s, {{0, 1, 4}, {2, 7}}, samples, nullptr),
                  ScenarioError);
}

TEST_CASE("warped quantities on the example at the special point") {
  const Immersion chi = chi_example();
  const KenmotsuStructure s(6);
  const WarpedModel m = make_model(chi, s, kChiParams, "sqrt(u^2+v^2+13)");
  const VectorXd p = (VectorXd(5) << 1, 1, 0, 0, 0).finished();
  const WarpedPoint w(m, p);
  CHECK(w.ln_f_differential()(0) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(w.ln_f_differential()(4) == doctest::Approx(0.0));
  // xi ln f vanishes, so the corollary's xi ln f = 1 cannot hold.
  const auto mt = mixed_tg_diagnostic(w);
  CHECK(std::abs(mt.xi_ln_f) <= 1e-14);
  CHECK(!mt.corollary_holds);
  CHECK(!mt.hypothesis);
  CHECK(mt.mass >= 1e-3);

  // The slant angle of D2 matches its finite-difference neighbours.
  const double th = theta2_at(m, p);
  CHECK(std::cos(th) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(std::isfinite(w.theta2_differential().norm()));

  // Each identity is linear in X.
  const auto& base = w.bislant().d1_xi.basis;
  const auto& fib = w.bislant().d2.basis;
  for (const auto& tag : warped_identity_tags()) {
    CAPTURE(tag);
    const IdentityArgs a{base.col(0), base.col(1), fib.col(0), fib.col(1)};
    const IdentityArgs a2{2.0 * base.col(0), base.col(1), fib.col(0), fib.col(1)};
    const auto r1 = warped_identity(w, tag, a);
    const auto r2 = warped_identity(w, tag, a2);
    CHECK(r2.lhs - r2.rhs == doctest::Approx(2.0 * (r1.lhs - r1.rhs)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(warped_identity(w, "9.9", {base.col(0), base.col(1), fib.col(0), fib.col(1)}),
                  std::invalid_argument);

  // The D1 angle is zero here, so no adapted frame exists.
  CHECK_THROWS_AS(build_adapted_frame(w), HypothesisError);
}

TEST_CASE("non-positive warping functions are rejected") {
  const Immersion chi = product_cone();
  const KenmotsuStructure s(5);
  const WarpedModel m = make_model(chi, s, kProductParams, "t");
  CHECK_THROWS_AS(WarpedPoint(m, (VectorXd(5) << 0.1, 0.2, 0.3, 0.4, -0.5).finished()),
                  DomainError);
}
