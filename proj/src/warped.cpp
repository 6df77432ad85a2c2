#include "kenmotsu/warped.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace kenmotsu {

namespace {

constexpr double kProperMargin = 1e-4;

MatrixXd induced_metric_at(const Immersion& immersion, const KenmotsuStructure& structure,
                           const VectorXd& p) {
  const auto jet = immersion.jet(p);
  return jet.jacobian.transpose() * structure.metric(jet.position) * jet.jacobian;
}

MatrixXd block(const MatrixXd& m, const std::vector<Eigen::Index>& rows,
               const std::vector<Eigen::Index>& cols) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    }
  }
  return out;
}

VectorXd with_coords(VectorXd p, const VectorXd& from, const std::vector<Eigen::Index>& idx) {
  for (auto i : idx) p(i) = from(i);
  return p;
}

VectorXd project(const SubmanifoldFrame& frame, const MatrixXd& basis, const VectorXd& x) {
  VectorXd out = VectorXd::Zero(x.size());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out += frame.g(basis.col(j), x) * basis.col(j);
  return out;
}

// Coordinates of P1 X at q, where X is the section of D1 + xi with constant
// coefficients c over its generators.
VectorXd p1_section_coords(const WarpedModel& model, const VectorXd& q, const VectorXd& c) {
  const SubmanifoldFrame frame(*model.immersion, *model.structure, q);
  const DistributionAt base = evaluate_distribution(frame, with_xi(model.d1, model.xi_field));
  const DistributionAt d1 = evaluate_distribution(frame, model.d1);
  VectorXd x_coords = VectorXd::Zero(frame.n());
  for (std::size_t k = 0; k < base.generators.size(); ++k) {
    x_coords += c(static_cast<Eigen::Index>(k)) * base.generators[k].value;
  }
  const VectorXd p1x = project(frame, d1.basis, frame.P(frame.to_ambient(x_coords)));
  return frame.to_coords(p1x);
}

}  // namespace

void validate_partition(const WarpedPartition& partition, Eigen::Index n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto* part : {&partition.base, &partition.fiber}) {
    for (auto i : *part) {
      if (i < 0 || i >= n) {
        throw ScenarioError("partition", "parameter index " + std::to_string(i) + " out of range");
      }
      ++seen[static_cast<std::size_t>(i)];
    }
  }
  if (partition.base.empty()) throw ScenarioError("partition.base", "empty base block");
  if (partition.fiber.empty()) throw ScenarioError("partition.fiber", "empty fiber block");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)] != 1) {
      throw ScenarioError("partition", "parameter " + std::to_string(i) +
                                           " must appear in exactly one block");
    }
  }
}

WarpedFit fit_warped_metric(const Immersion& immersion, const KenmotsuStructure& structure,
                            const WarpedPartition& partition,
                            const std::vector<VectorXd>& samples,
                            const CompiledExpr* candidate_f) {
  validate_partition(partition, immersion.n());
  if (samples.empty()) throw DimensionError("fit_warped_metric: no samples");
  WarpedFit fit;
  fit.partition = partition;
  const auto& base = partition.base;
  const auto& fiber = partition.fiber;
  const VectorXd& p0 = samples.front();
  const double q = static_cast<double>(fiber.size());

  double f2_p0 = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const VectorXd& p = samples[s];
    const MatrixXd k = induced_metric_at(immersion, structure, p);

    for (auto b : base) {
      for (auto f : fiber) {
        const double r = std::abs(k(b, f)) / std::sqrt(k(b, b) * k(f, f));
        if (r > fit.off_diagonal) {
          fit.off_diagonal = r;
          fit.off_diagonal_worst = s;
        }
      }
    }

    const MatrixXd kb = block(k, base, base);
    const MatrixXd kb_moved =
        block(induced_metric_at(immersion, structure, with_coords(p, p0, fiber)), base, base);
    const double base_dev = (kb - kb_moved).cwiseAbs().maxCoeff() / kb.cwiseAbs().maxCoeff();
    if (base_dev > fit.base_dependence) {
      fit.base_dependence = base_dev;
      fit.base_dependence_worst = s;
    }

    const MatrixXd kf = block(k, fiber, fiber);
    const MatrixXd kf_moved =
        block(induced_metric_at(immersion, structure, with_coords(p, p0, base)), fiber, fiber);
    const double ratio = kf.trace() / kf_moved.trace();
    const double conf_dev = (kf - ratio * kf_moved).cwiseAbs().maxCoeff() / kf.cwiseAbs().maxCoeff();
    if (conf_dev > fit.conformal) {
      fit.conformal = conf_dev;
      fit.conformal_worst = s;
    }
    if (s == 0) f2_p0 = kf.trace() / q;
    fit.f_squared.push_back(ratio * f2_p0);
  }

  const auto [lo, hi] = std::minmax_element(fit.f_squared.begin(), fit.f_squared.end());
  fit.trivial = (*hi - *lo) <= 1e-10 * *hi;

  if (candidate_f) {
    const double f0 = (*candidate_f)(p0);
    if (!(f0 > 0.0)) throw DomainError("warping function is not positive", candidate_f->source());
    fit.candidate_scale = fit.f_squared.front() / (f0 * f0);
    double worst = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const double f = (*candidate_f)(samples[s]);
      if (!(f > 0.0)) throw DomainError("warping function is not positive", candidate_f->source());
      const double dev = std::abs(fit.f_squared[s] - *fit.candidate_scale * f * f) / fit.f_squared[s];
      if (dev > worst) {
        worst = dev;
        fit.candidate_worst = s;
      }
    }
    fit.candidate_deviation = worst;
  }
  return fit;
}

double theta2_at(const WarpedModel& model, const VectorXd& p) {
  const SubmanifoldFrame frame(*model.immersion, *model.structure, p);
  return slant_angle(frame, evaluate_distribution(frame, model.d2), model.seed, 0).spectral_theta;
}

WarpedPoint::WarpedPoint(const WarpedModel& model, const VectorXd& p)
    : model_(&model),
      frame_(*model.immersion, *model.structure, p),
      bislant_(build_bislant(frame_, model.d1, model.d2, model.xi_field, model.mode, model.seed)) {
  if (!model.f) throw ScenarioError("warping_function", "no warping function given");
  validate_partition(model.partition, frame_.n());
  const auto f = dual2_eval(*model.f, p);
  if (!(f.value() > 0.0)) throw DomainError("warping function is not positive", model.f->source());
  dlnf_ = f.gradient() / f.value();

  const Eigen::Index n = frame_.n();
  dtheta2_.resize(n);
  const double h = model.theta_step;
  for (Eigen::Index a = 0; a < n; ++a) {
    VectorXd plus = p;
    VectorXd minus = p;
    plus(a) += h;
    minus(a) -= h;
    dtheta2_(a) = (theta2_at(model, plus) - theta2_at(model, minus)) / (2.0 * h);
  }
}

VectorXd WarpedPoint::ln_f_gradient() const {
  return frame_.to_ambient(frame_.induced_metric_inverse() * dlnf_);
}

std::vector<WarpConnectionResidual> warp_connection_residuals(const WarpedPoint& w) {
  const SubmanifoldFrame& frame = w.frame();
  const auto& params = w.model().immersion->parameters();
  const Eigen::Index n = frame.n();
  const MatrixXd zero = MatrixXd::Zero(n, n);
  std::vector<WarpConnectionResidual> out;
  for (auto b : w.model().partition.base) {
    const VectorXd x = VectorXd::Unit(n, b);
    const double xlnf = w.ln_f_differential()(b);
    for (auto u : w.model().partition.fiber) {
      const VectorXd uc = VectorXd::Unit(n, u);
      const VectorXd lhs = frame.nabla(x, uc, zero);
      out.push_back({params[static_cast<std::size_t>(b)], params[static_cast<std::size_t>(u)],
                     frame.norm(lhs - xlnf * frame.to_ambient(uc))});
    }
  }
  return out;
}

namespace {

// Shorthand for the quantities the identities are written in.
struct Terms {
  const WarpedPoint& w;
  const SubmanifoldFrame& f;
  const BiSlantDecomposition& d;
  double c1;
  double c2;
  double th2;

  explicit Terms(const WarpedPoint& wp)
      : w(wp),
        f(wp.frame()),
        d(wp.bislant()),
        c1(wp.bislant().cos2_1()),
        c2(wp.bislant().cos2_2()),
        th2(wp.bislant().theta2.spectral_theta) {}

  double g(const VectorXd& a, const VectorXd& b) const { return f.g(a, b); }
  double hq(const VectorXd& a, const VectorXd& b, const VectorXd& c) const {
    return f.g(f.h(a, b), f.Q(c));
  }
  VectorXd P1(const VectorXd& x) const { return d.P1(f, x); }
  VectorXd P2(const VectorXd& x) const { return d.P2(f, x); }
  double L(const VectorXd& x) const { return w.ln_f(x); }
  double T(const VectorXd& x) const { return w.theta2(x); }
  double eta(const VectorXd& x) const { return f.eta(x); }
  double s(const VectorXd& x) const { return L(x) - eta(x); }

  // g(∇̄_X Z, W) with Z extended as a section of D2.
  double nabla_xz_w(const VectorXd& x, const VectorXd& z, const VectorXd& w_) const {
    return g(f.nabla_bar(f.to_coords(x), d.d2.section_through(f, z)), w_);
  }
};

LemmaResidual make(std::string_view tag, double lhs, double rhs) {
  return LemmaResidual{std::string(tag), lhs, rhs};
}

double signed_residual(const LemmaResidual& r) { return r.lhs - r.rhs; }

LemmaResidual identity_impl(const Terms& t, std::string_view tag, const IdentityArgs& a) {
  const VectorXd& X = a.X;
  const VectorXd& Y = a.Y;
  const VectorXd& Z = a.Z;
  const VectorXd& W = a.W;
  const double sin_t = std::sin(t.th2);
  const double s2 = 1.0 - t.c2;

  if (tag == "4.3") {
    return make(tag, t.hq(X, W, t.P2(Z)) - t.hq(X, t.P2(Z), W), sin_t * t.T(X) * t.g(Z, W));
  }
  if (tag == "4.4") {
    return make(tag, t.hq(X, Z, W) - t.hq(X, W, Z),
                std::tan(t.th2) * t.T(X) * t.g(t.P2(Z), W));
  }
  if (tag == "4.5") return make(tag, t.nabla_xz_w(X, Z, W), t.L(X) * t.g(Z, W));
  if (tag == "4.6") {
    return make(tag, t.nabla_xz_w(X, Z, W),
                t.L(X) * t.g(t.P2(Z), t.P2(W)) + t.hq(X, t.P2(Z), W) + s2 * t.L(X) * t.g(Z, W) +
                    sin_t * t.T(X) * t.g(Z, W) + t.hq(X, W, t.P2(Z)));
  }
  if (tag == "4.7") {
    return make(tag, t.L(X) * t.g(Z, W),
                t.c2 * t.L(X) * t.g(Z, W) + t.hq(X, t.P2(Z), W) + s2 * t.L(X) * t.g(Z, W) +
                    sin_t * t.T(X) * t.g(Z, W) + t.hq(X, W, t.P2(Z)));
  }
  if (tag == "4.8") {
    return make(tag, t.hq(X, W, t.P2(Z)) - t.hq(X, t.P2(Z), W), 2 * t.c2 * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.9") {
    return make(tag, t.hq(X, Z, W),
                -t.L(t.P1(X)) * t.g(Z, W) + t.hq(Z, W, X) + t.s(X) * t.g(t.P2(Z), W));
  }
  if (tag == "4.10") {
    return make(tag, t.hq(X, W, Z),
                -t.L(t.P1(X)) * t.g(W, Z) + t.hq(Z, W, X) + t.s(X) * t.g(t.P2(W), Z));
  }
  if (tag == "4.11") {
    return make(tag, t.hq(X, Z, W) - t.hq(X, W, Z), 2 * t.s(X) * t.g(t.P2(Z), W));
  }
  if (tag == "4.12") {
    return make(tag, 2 * t.c2 * t.s(X) * t.g(Z, W), -std::sin(2 * t.th2) * t.T(X) * t.g(Z, W));
  }
  if (tag == "4.13") return make(tag, t.hq(X, Y, Z), t.hq(X, Z, Y));
  if (tag == "4.14") {
    return make(tag, t.hq(Z, W, X) - t.hq(X, Z, W),
                t.L(t.P1(X)) * t.g(Z, W) + t.s(X) * t.g(Z, t.P2(W)));
  }
  if (tag == "4.15") {
    const VectorXd p1x = t.P1(X);
    return make(tag, t.hq(Z, W, p1x) - t.hq(p1x, Z, W),
                t.L(p1x) * t.g(Z, t.P2(W)) - t.c1 * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.16") {
    const VectorXd p2w = t.P2(W);
    return make(tag, t.hq(Z, p2w, X) - t.hq(X, Z, p2w),
                t.L(t.P1(X)) * t.g(Z, p2w) - t.c2 * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.17") {
    const VectorXd p1x = t.P1(X);
    const VectorXd p2w = t.P2(W);
    return make(tag,
                t.hq(Z, W, p1x) - t.hq(p1x, Z, W) + t.hq(X, Z, p2w) - t.hq(Z, p2w, X),
                (t.c2 - t.c1) * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.18") {
    return make(tag, t.hq(X, Y, Z),
                t.L(X) * t.g(t.P1(Y), Z) + t.hq(X, Z, Y) - t.eta(Y) * t.g(t.P1(X), Z) +
                    t.L(X) * t.g(Y, t.P2(Z)));
  }
  if (tag == "4.19" || tag == "4.19/derived") {
    // Covariant derivative of the field P1 X along Z by central differences
    // of its coordinates; X is extended with constant coefficients.
    const SubmanifoldFrame& f = t.f;
    const WarpedModel& model = t.w.model();
    const VectorXd zc = f.to_coords(Z);
    const VectorXd c = t.d.d1_xi.section_coefficients(f, X);
    const double h = 1e-5;
    const VectorXd& p = f.parameter_point();
    const VectorXd dy = (p1_section_coords(model, p + h * zc, c) -
                         p1_section_coords(model, p - h * zc, c)) / (2 * h);
    const VectorXd y = f.to_coords(t.P1(X));
    const VectorXd nabla_p1x =
        f.nabla_bar(zc, y, MatrixXd::Zero(f.n(), f.n())) + f.to_ambient(dy);
    const VectorXd nabla_x = f.nabla_bar(zc, t.d.d1_xi.section_through(f, X));
    // The derived form carries +g(∇̄_Z X, P2 W).
    const double sign = tag == "4.19" ? -1.0 : 1.0;
    return make(tag, t.hq(Z, W, X),
                sign * t.g(nabla_x, t.P2(W)) + t.g(f.h(Z, X), f.Q(W)) +
                    t.eta(X) * t.g(f.phi(Z), W) + t.g(nabla_p1x, W));
  }
  if (tag == "4.20") {
    const VectorXd p1x = t.P1(X);
    const VectorXd p2w = t.P2(W);
    return make(tag, t.hq(Z, p2w, p1x) - t.hq(p1x, Z, p2w),
                -t.c2 * t.L(p1x) * t.g(Z, W) - t.c1 * t.s(X) * t.g(Z, p2w));
  }
  if (tag == "4.21") {
    const VectorXd p2z = t.P2(Z);
    return make(tag, t.hq(p2z, W, X) - t.hq(X, p2z, W),
                t.L(t.P1(X)) * t.g(p2z, W) + t.c2 * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.22") {
    const VectorXd p1x = t.P1(X);
    const VectorXd p2z = t.P2(Z);
    return make(tag, t.hq(p2z, W, p1x) - t.hq(p1x, p2z, W),
                t.c2 * t.L(p1x) * t.g(Z, W) - t.c1 * t.s(X) * t.g(p2z, W));
  }
  if (tag == "4.23") {
    const VectorXd p2z = t.P2(Z);
    const VectorXd p2w = t.P2(W);
    return make(tag, t.hq(p2z, p2w, X) - t.hq(X, p2z, p2w),
                t.c2 * t.L(t.P1(X)) * t.g(Z, W) - t.c2 * t.s(X) * t.g(p2z, W));
  }
  if (tag == "4.24") {
    const VectorXd p1x = t.P1(X);
    const VectorXd p2z = t.P2(Z);
    const VectorXd p2w = t.P2(W);
    return make(tag, t.hq(p2z, p2w, p1x) - t.hq(p1x, p2z, p2w),
                t.c2 * t.L(p1x) * t.g(Z, p2w) - t.c1 * t.c2 * t.s(X) * t.g(Z, W));
  }
  if (tag == "4.15/subst") {
    const IdentityArgs moved{t.P1(X), Y, Z, W};
    return make(tag, signed_residual(identity_impl(t, "4.14", moved)),
                signed_residual(identity_impl(t, "4.15", a)));
  }
  if (tag == "4.16/subst") {
    const IdentityArgs moved{X, Y, Z, t.P2(W)};
    return make(tag, signed_residual(identity_impl(t, "4.14", moved)),
                signed_residual(identity_impl(t, "4.16", a)));
  }
  throw std::invalid_argument("unknown identity '" + std::string(tag) + "'");
}

bool uses_y(std::string_view tag) { return tag == "4.13" || tag == "4.18"; }

}  // namespace

LemmaResidual warped_identity(const WarpedPoint& w, std::string_view eq_ref,
                              const IdentityArgs& args) {
  return identity_impl(Terms(w), eq_ref, args);
}

const std::vector<std::string>& warped_identity_tags() {
  static const std::vector<std::string> tags{
      "4.3",  "4.4",  "4.5",  "4.6",  "4.7",  "4.8",  "4.9",  "4.10",       "4.11",
      "4.12", "4.13", "4.14", "4.15", "4.16", "4.17", "4.18", "4.19", "4.19/derived", "4.20",
      "4.21", "4.22", "4.23", "4.24", "4.15/subst", "4.16/subst"};
  return tags;
}

std::vector<LemmaResidual> warped_identity_residuals(const WarpedPoint& w,
                                                     const std::vector<std::string>& tags) {
  const Terms t(w);
  const MatrixXd& base = t.d.d1_xi.basis;
  const MatrixXd& fiber = t.d.d2.basis;
  std::vector<LemmaResidual> out;
  for (const auto& tag : tags) {
    for (Eigen::Index i = 0; i < base.cols(); ++i) {
      if (uses_y(tag)) {
        for (Eigen::Index j = 0; j < base.cols(); ++j) {
          for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
            out.push_back(identity_impl(t, tag, {base.col(i), base.col(j), fiber.col(k), {}}));
          }
        }
        continue;
      }
      for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
        for (Eigen::Index l = 0; l < fiber.cols(); ++l) {
          out.push_back(identity_impl(t, tag, {base.col(i), {}, fiber.col(k), fiber.col(l)}));
        }
      }
    }
  }
  return out;
}

std::vector<double> warping_gradient_condition(const WarpedPoint& w) {
  const Terms t(w);
  std::vector<double> out;
  const MatrixXd& base = t.d.d1_xi.basis;
  for (Eigen::Index i = 0; i < base.cols(); ++i) {
    const VectorXd x = base.col(i);
    out.push_back(t.s(x) + std::tan(t.th2) * t.T(x));
  }
  return out;
}

MixedTotallyGeodesic mixed_tg_diagnostic(const WarpedPoint& w) {
  const Terms t(w);
  MixedTotallyGeodesic m;
  const MatrixXd& base = t.d.d1_xi.basis;
  const MatrixXd& fiber = t.d.d2.basis;
  for (Eigen::Index i = 0; i < base.cols(); ++i) {
    for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
      m.mass = std::max(m.mass, t.f.norm(t.f.h(base.col(i), fiber.col(k))));
    }
    m.branch_ii = std::max(m.branch_ii, std::abs(t.s(base.col(i))));
  }
  m.hypothesis = m.mass <= kMixedGeodesicTolerance;
  m.theta2 = t.th2;
  m.xi_ln_f = t.L(t.f.xi());
  m.branch_i_holds = std::abs(m.theta2 - std::numbers::pi / 2) <= 1e-6;
  m.branch_ii_holds = m.branch_ii <= 1e-6;
  m.corollary_holds = std::abs(m.xi_ln_f - 1.0) <= 1e-6;
  return m;
}

Characterization characterization_check(const WarpedPoint& w, const CompiledExpr& mu) {
  const Terms t(w);
  const SubmanifoldFrame& f = t.f;
  const VectorXd dmu = dual2_eval(mu, f.parameter_point()).gradient();
  auto Xmu = [&](const VectorXd& x) { return dmu.dot(f.to_coords(x)); };
  const MatrixXd& base = t.d.d1_xi.basis;
  const MatrixXd& fiber = t.d.d2.basis;

  Characterization c;
  for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
    c.mu_along_fiber = std::max(c.mu_along_fiber, std::abs(Xmu(fiber.col(k))));
  }
  if (c.mu_along_fiber > 1e-8) {
    throw HypothesisError("mu = '" + mu.source() + "' varies along " + t.d.d2.name + " (|W mu| = " +
                          std::to_string(c.mu_along_fiber) + ")");
  }

  auto A = [&](const VectorXd& v, const VectorXd& x) { return f.shape(v, x); };
  for (Eigen::Index i = 0; i < base.cols(); ++i) {
    const VectorXd x = base.col(i);
    const VectorXd p1x = t.P1(x);
    for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
      const VectorXd z = fiber.col(k);
      const VectorXd p2z = t.P2(z);
      const VectorXd lhs = A(f.Q(p1x), z) - A(f.Q(z), p1x) + A(f.Q(p2z), x) - A(f.Q(x), p2z);
      const VectorXd rhs = (t.c2 - t.c1) * (Xmu(x) - f.eta(x)) * z;
      c.condition = std::max(c.condition, f.norm(lhs - rhs));
    }
  }

  const VectorXd grad_mu = f.to_ambient(f.induced_metric_inverse() * dmu);
  for (Eigen::Index k = 0; k < fiber.cols(); ++k) {
    const VectorXd z = fiber.col(k);
    const VectorXd zc = f.to_coords(z);
    for (Eigen::Index l = 0; l < fiber.cols(); ++l) {
      const VectorXd wv = fiber.col(l);
      const VectorXd nabla = f.nabla(zc, t.d.d2.section_through(f, wv));
      const VectorXd h2 = project(f, base, nabla);
      c.leaf_umbilicity = std::max(c.leaf_umbilicity, f.norm(h2 + t.g(z, wv) * grad_mu));
    }
  }
  return c;
}

MatrixXd AdaptedFrame::tangent() const {
  MatrixXd out(base.rows(), base.cols() + fiber.cols());
  out << base, fiber;
  return out;
}

MatrixXd AdaptedFrame::normal() const {
  MatrixXd out(qd1.rows(), qd1.cols() + qd2.cols() + nu.cols());
  out << qd1, qd2, nu;
  return out;
}

namespace {

// e_1..e_k, sec(theta) P_i e_1.. for a slant distribution of dimension 2k.
MatrixXd slant_pairs(const SubmanifoldFrame& f, const MatrixXd& basis, double theta,
                     const std::function<VectorXd(const VectorXd&)>& Pi) {
  const Eigen::Index k = basis.cols() / 2;
  std::vector<VectorXd> firsts;
  std::vector<VectorXd> seconds;
  const double sec = 1.0 / std::cos(theta);
  for (Eigen::Index j = 0; j < basis.cols() && static_cast<Eigen::Index>(firsts.size()) < k; ++j) {
    VectorXd v = basis.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto* set : {&firsts, &seconds}) {
        for (const auto& e : *set) v -= f.g(e, v) * e;
      }
    }
    const double n = f.norm(v);
    if (n <= 1e-6) continue;
    v /= n;
    firsts.push_back(v);
    seconds.push_back(sec * Pi(v));
  }
  if (static_cast<Eigen::Index>(firsts.size()) != k) {
    throw HypothesisError("could not build an adapted frame of the slant distribution");
  }
  MatrixXd out(basis.rows(), 2 * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.col(j) = firsts[static_cast<std::size_t>(j)];
    out.col(k + j) = seconds[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

AdaptedFrame build_adapted_frame(const WarpedPoint& w) {
  const Terms t(w);
  const SubmanifoldFrame& f = t.f;
  const BiSlantDecomposition& d = t.d;
  if (d.d1.dim() % 2 != 0 || d.d2.dim() % 2 != 0) {
    throw HypothesisError("adapted frame needs even-dimensional slant distributions");
  }
  const double th1 = d.theta1.spectral_theta;
  const double th2 = d.theta2.spectral_theta;
  for (double th : {th1, th2}) {
    if (th <= kProperMargin || th >= std::numbers::pi / 2 - kProperMargin) {
      throw HypothesisError("decomposition is not proper (slant angle " + std::to_string(th) + ")");
    }
  }
  AdaptedFrame a;
  a.p = d.d1.dim() / 2;
  a.q = d.d2.dim() / 2;
  const MatrixXd e1 = slant_pairs(f, d.d1.basis, th1, [&](const VectorXd& v) { return t.P1(v); });
  const MatrixXd e2 = slant_pairs(f, d.d2.basis, th2, [&](const VectorXd& v) { return t.P2(v); });
  a.base.resize(f.ambient_dim(), e1.cols() + 1);
  a.base << e1, f.xi();
  a.fiber = e2;
  a.qd1.resize(f.ambient_dim(), e1.cols());
  a.qd2.resize(f.ambient_dim(), e2.cols());
  for (Eigen::Index j = 0; j < e1.cols(); ++j) a.qd1.col(j) = f.Q(e1.col(j)) / std::sin(th1);
  for (Eigen::Index j = 0; j < e2.cols(); ++j) a.qd2.col(j) = f.Q(e2.col(j)) / std::sin(th2);
  a.nu = d.nu;

  MatrixXd all(f.ambient_dim(), a.base.cols() + a.fiber.cols() + a.qd1.cols() + a.qd2.cols() +
                                    a.nu.cols());
  all << a.tangent(), a.normal();
  a.orthonormality = orthonormality_defect(all, f.metric());
  if (all.cols() != f.ambient_dim()) a.orthonormality = std::max(a.orthonormality, 1.0);
  return a;
}

Inequality61 inequality_61(const WarpedPoint& w, const AdaptedFrame& frame,
                           const MixedTotallyGeodesic& mixed) {
  const Terms t(w);
  const SubmanifoldFrame& f = t.f;
  Inequality61 r;
  r.lhs = second_fundamental_form(f).squared_norm;
  r.asserted = mixed.hypothesis;

  const MatrixXd* normals[3] = {&frame.qd1, &frame.qd2, &frame.nu};
  const MatrixXd& base = frame.base;
  const MatrixXd& fiber = frame.fiber;
  auto accumulate = [&](const VectorXd& h, double weight, double* split) {
    double total = 0.0;
    for (int b = 0; b < 3; ++b) {
      for (Eigen::Index k = 0; k < normals[b]->cols(); ++k) {
        const double c = f.g(h, normals[b]->col(k));
        total += weight * c * c;
        if (split) split[b] += weight * c * c;
      }
    }
    return total;
  };
  for (Eigen::Index i = 0; i < base.cols(); ++i) {
    for (Eigen::Index j = 0; j < base.cols(); ++j) {
      r.base_base += accumulate(f.h(base.col(i), base.col(j)), 1.0, r.blocks[0]);
    }
    for (Eigen::Index j = 0; j < fiber.cols(); ++j) {
      r.mixed += accumulate(f.h(base.col(i), fiber.col(j)), 2.0, nullptr);
    }
  }
  for (Eigen::Index i = 0; i < fiber.cols(); ++i) {
    for (Eigen::Index j = 0; j < fiber.cols(); ++j) {
      r.fiber_fiber += accumulate(f.h(fiber.col(i), fiber.col(j)), 1.0, r.blocks[1]);
    }
  }
  auto relative = [&](double v) {
    const double err = std::abs(v - r.lhs);
    return r.lhs > 1e-12 ? err / r.lhs : err;
  };
  r.resum_62 = relative(r.base_base + r.mixed + r.fiber_fiber);
  double blocks = r.mixed;
  for (const auto& row : r.blocks) {
    for (double v : row) blocks += v;
  }
  r.resum_63 = relative(blocks);

  // Right side: 2q csc^2 th1 (cos^2 th1 + cos^2 th2) {‖grad_1 ln f‖² - 1 - sum_{r<=p} (e_r ln f)²}.
  double grad1 = 0.0;
  double first = 0.0;
  for (Eigen::Index j = 0; j < base.cols(); ++j) {
    const double e = t.L(base.col(j));
    grad1 += e * e;
    if (j < frame.p) first += e * e;
  }
  const double th1 = t.d.theta1.spectral_theta;
  const double csc2 = 1.0 / (std::sin(th1) * std::sin(th1));
  r.rhs = 2.0 * static_cast<double>(frame.q) * csc2 * (t.c1 + t.c2) * (grad1 - 1.0 - first);
  r.slack = r.lhs - r.rhs;

  // Equality-case diagnostics.
  auto part = [&](const VectorXd& h, const MatrixXd& block) {
    VectorXd out = VectorXd::Zero(h.size());
    for (Eigen::Index k = 0; k < block.cols(); ++k) out += f.g(h, block.col(k)) * block.col(k);
    return f.norm(out);
  };
  double m11 = 0, m12 = 0, m13 = 0, m14 = 0, m15 = 0, m16 = 0, m17 = 0;
  for (Eigen::Index i = 0; i < base.cols(); ++i) {
    for (Eigen::Index j = 0; j < base.cols(); ++j) {
      const VectorXd h = f.h(base.col(i), base.col(j));
      m11 = std::max(m11, part(h, frame.nu));
      m12 = std::max(m12, part(h, frame.qd1));
      m13 = std::max(m13, part(h, frame.qd2));
      m14 = std::max(m14, f.norm(h));
    }
  }
  for (Eigen::Index i = 0; i < fiber.cols(); ++i) {
    for (Eigen::Index j = 0; j < fiber.cols(); ++j) {
      const VectorXd h = f.h(fiber.col(i), fiber.col(j));
      m15 = std::max(m15, part(h, frame.nu));
      m16 = std::max(m16, part(h, frame.qd2));
      VectorXd in_qd1 = VectorXd::Zero(h.size());
      for (Eigen::Index k = 0; k < frame.qd1.cols(); ++k) {
        in_qd1 += f.g(h, frame.qd1.col(k)) * frame.qd1.col(k);
      }
      m17 = std::max(m17, f.norm(h - in_qd1));
    }
  }
  r.equality = {make("6.11", m11, 0.0), make("6.12", m12, 0.0), make("6.13", m13, 0.0),
                make("6.14", m14, 0.0), make("6.15", m15, 0.0), make("6.16", m16, 0.0),
                make("6.17", m17, 0.0)};

  LemmaResidual w18{"6.18"}, w19{"6.19"}, w20{"6.20"};
  const MatrixXd& b = t.d.d1_xi.basis;
  const MatrixXd& fb = t.d.d2.basis;
  auto keep = [](LemmaResidual& worst, double lhs, double rhs) {
    if (std::abs(lhs - rhs) >= worst.residual()) {
      worst.lhs = lhs;
      worst.rhs = rhs;
    }
  };
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    const VectorXd x = b.col(i);
    const double l1 = t.L(t.P1(x));
    for (Eigen::Index k = 0; k < fb.cols(); ++k) {
      for (Eigen::Index l = 0; l < fb.cols(); ++l) {
        const VectorXd z = fb.col(k);
        const VectorXd wv = fb.col(l);
        const double lhs = t.hq(z, wv, x);
        keep(w18, lhs, l1 * t.g(z, wv) + t.s(x) * t.g(z, t.P2(wv)));
        keep(w19, lhs, l1 * t.g(z, wv) + t.s(x) * t.g(wv, t.P2(z)));
        keep(w20, lhs, l1 * t.g(z, wv));
      }
    }
  }
  r.equality.push_back(w18);
  r.equality.push_back(w19);
  r.equality.push_back(w20);
  return r;
}

}  // namespace kenmotsu
