#include "kenmotsu/slant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kenmotsu {

namespace {

constexpr double kStructuralTolerance = 1e-8;
constexpr double kProperMargin = 1e-4;

// Orthonormal frame for the span of `candidates`, appended to `existing`,
// dropping residuals with g-norm at or below abs_tol.  Returns only the
// new columns.
MatrixXd span_frame(const MatrixXd& existing, const MatrixXd& candidates, const MatrixXd& g,
                    double abs_tol) {
  std::vector<VectorXd> cols;
  for (Eigen::Index j = 0; j < existing.cols(); ++j) cols.push_back(existing.col(j));
  const auto start = cols.size();
  for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
    VectorXd v = candidates.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) v -= inner(g, c, v) * c;
    }
    const double n = norm(g, v);
    if (n > abs_tol) cols.push_back(v / n);
  }
  MatrixXd out(candidates.rows(), static_cast<Eigen::Index>(cols.size() - start));
  for (std::size_t k = start; k < cols.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k - start)) = cols[k];
  }
  return out;
}

VectorXd project(const SubmanifoldFrame& frame, const MatrixXd& basis, const VectorXd& x) {
  VectorXd out = VectorXd::Zero(x.size());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out += frame.g(basis.col(j), x) * basis.col(j);
  return out;
}

double clamp_unit(double c) { return std::clamp(c, 0.0, 1.0); }

}  // namespace

DistributionAt evaluate_distribution(const SubmanifoldFrame& frame, const Distribution& d) {
  if (d.generators.empty()) throw HypothesisError("distribution '" + d.name + "' is empty");
  DistributionAt out;
  out.name = d.name;
  MatrixXd ambient(frame.ambient_dim(), static_cast<Eigen::Index>(d.generators.size()));
  for (std::size_t k = 0; k < d.generators.size(); ++k) {
    if (static_cast<Eigen::Index>(d.generators[k].coefficients.size()) != frame.n()) {
      throw DimensionError("generator '" + d.generators[k].label + "' of '" + d.name + "' has " +
                           std::to_string(d.generators[k].coefficients.size()) +
                           " coefficients");
    }
    out.generators.push_back(field_jet(d.generators[k], frame.parameter_point()));
    ambient.col(static_cast<Eigen::Index>(k)) = frame.to_ambient(out.generators.back().value);
  }
  try {
    out.basis = gram_schmidt(ambient, frame.metric(), {1e-10});
  } catch (const RankDeficiencyError&) {
    throw HypothesisError("generators of '" + d.name + "' are linearly dependent here");
  }
  return out;
}

VectorXd DistributionAt::section_coefficients(const SubmanifoldFrame& frame,
                                              const VectorXd& v) const {
  const auto k = static_cast<Eigen::Index>(generators.size());
  MatrixXd values(frame.n(), k);
  for (Eigen::Index j = 0; j < k; ++j) values.col(j) = generators[static_cast<std::size_t>(j)].value;
  return solve(values, frame.to_coords(v));
}

FieldJet DistributionAt::section_through(const SubmanifoldFrame& frame,
                                         const VectorXd& v) const {
  const Eigen::Index n = frame.n();
  const auto k = static_cast<Eigen::Index>(generators.size());
  const VectorXd c = section_coefficients(frame, v);
  FieldJet out{VectorXd::Zero(n), MatrixXd::Zero(n, n)};
  for (Eigen::Index j = 0; j < k; ++j) {
    out.value += c(j) * generators[static_cast<std::size_t>(j)].value;
    out.jacobian += c(j) * generators[static_cast<std::size_t>(j)].jacobian;
  }
  return out;
}

SlantAngle slant_angle(const SubmanifoldFrame& frame, const DistributionAt& d,
                       std::uint64_t seed, int random_probes) {
  std::vector<VectorXd> probes;
  for (const auto& gen : d.generators) {
    const VectorXd v = frame.to_ambient(gen.value);
    probes.push_back(v / frame.norm(v));
  }
  Rng rng(seed);
  for (int k = 0; k < random_probes; ++k) {
    const VectorXd c = rng.uniform_vector(d.dim(), -1.0, 1.0);
    const VectorXd v = d.basis * c;
    probes.push_back(v / frame.norm(v));
  }

  SlantAngle out;
  for (const auto& x : probes) {
    const double phi_norm = frame.norm(frame.phi(x));
    if (phi_norm <= 1e-8) {
      throw HypothesisError("slant angle of '" + d.name + "' is undefined: a probe is parallel to xi");
    }
    out.per_vector.push_back(std::acos(clamp_unit(frame.norm(frame.P(x)) / phi_norm)));
  }
  const auto [lo, hi] = std::minmax_element(out.per_vector.begin(), out.per_vector.end());
  out.spread = *hi - *lo;
  double sum = 0.0;
  for (double a : out.per_vector) sum += a;
  out.theta = sum / static_cast<double>(out.per_vector.size());

  const Eigen::Index k = d.dim();
  MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const VectorXd pi = frame.P(d.basis.col(i));
    for (Eigen::Index j = 0; j <= i; ++j) {
      m(i, j) = m(j, i) = frame.g(pi, frame.P(d.basis.col(j)));
    }
  }
  out.spectrum = sym_eigen(m).values;
  out.spectral_spread = out.spectrum(k - 1) - out.spectrum(0);
  out.spectral_theta = std::acos(std::sqrt(clamp_unit(out.spectrum.mean())));
  return out;
}

SlantRelations slant_relations(const SubmanifoldFrame& frame, const DistributionAt& d,
                               double cos2) {
  const double sin2 = 1.0 - cos2;
  SlantRelations r;
  const MatrixXd& e = d.basis;
  for (Eigen::Index i = 0; i < e.cols(); ++i) {
    const VectorXd x = e.col(i);
    const VectorXd horizontal = x - frame.eta(x) * frame.xi();
    const VectorXd px = frame.P(x);
    const VectorXd qx = frame.Q(x);
    r.p_squared = std::max(r.p_squared, frame.norm(frame.P(px) + cos2 * horizontal));
    r.bq = std::max(r.bq, frame.norm(frame.b(qx) + sin2 * horizontal));
    r.cq = std::max(r.cq, frame.norm(frame.c(qx) + frame.Q(px)));
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      const VectorXd y = e.col(j);
      const double base = frame.g(x, y) - frame.eta(x) * frame.eta(y);
      r.pp = std::max(r.pp, std::abs(frame.g(px, frame.P(y)) - cos2 * base));
      r.qq = std::max(r.qq, std::abs(frame.g(qx, frame.Q(y)) - sin2 * base));
    }
  }
  return r;
}

VectorXd BiSlantDecomposition::T1(const SubmanifoldFrame& frame, const VectorXd& x) const {
  return project(frame, d1.basis, x);
}

VectorXd BiSlantDecomposition::T2(const SubmanifoldFrame& frame, const VectorXd& x) const {
  return project(frame, d2.basis, x);
}

Distribution with_xi(const Distribution& d, const FieldExpr& xi_field) {
  Distribution out = d;
  out.name = d.name + "+xi";
  out.generators.push_back(xi_field);
  return out;
}

BiSlantDecomposition build_bislant(const SubmanifoldFrame& frame, const Distribution& d1,
                                   const Distribution& d2, const FieldExpr& xi_field,
                                   BiSlantMode mode, std::uint64_t seed) {
  if (!frame.xi_column()) {
    throw HypothesisError("xi is not tangent (normal part " +
                          std::to_string(frame.xi_normal_part()) + ")");
  }
  const VectorXd& xi = frame.xi();
  const FieldJet xi_jet = field_jet(xi_field, frame.parameter_point());
  const double xi_defect = frame.norm(frame.to_ambient(xi_jet.value) - xi);
  if (xi_defect > kStructuralTolerance) {
    throw HypothesisError("field '" + xi_field.label + "' differs from xi by " +
                          std::to_string(xi_defect));
  }

  BiSlantDecomposition d;
  d.d1 = evaluate_distribution(frame, d1);
  d.d2 = evaluate_distribution(frame, d2);
  d.d1_xi = evaluate_distribution(frame, with_xi(d1, xi_field));

  if (d.d1.dim() + d.d2.dim() + 1 != frame.n()) {
    throw HypothesisError("dim " + d1.name + " + dim " + d2.name + " + 1 = " +
                          std::to_string(d.d1.dim() + d.d2.dim() + 1) + " but the submanifold has dimension " +
                          std::to_string(frame.n()));
  }
  for (Eigen::Index i = 0; i < d.d1.dim(); ++i) {
    d.orthogonality = std::max(d.orthogonality, std::abs(frame.g(d.d1.basis.col(i), xi)));
    for (Eigen::Index j = 0; j < d.d2.dim(); ++j) {
      d.orthogonality =
          std::max(d.orthogonality, std::abs(frame.g(d.d1.basis.col(i), d.d2.basis.col(j))));
    }
  }
  for (Eigen::Index j = 0; j < d.d2.dim(); ++j) {
    d.orthogonality = std::max(d.orthogonality, std::abs(frame.g(d.d2.basis.col(j), xi)));
  }
  if (d.orthogonality > kStructuralTolerance) {
    throw HypothesisError(d1.name + ", " + d2.name + " and xi are not orthogonal (defect " +
                          std::to_string(d.orthogonality) + ")");
  }
  for (Eigen::Index j = 0; j < frame.tangent_frame().cols(); ++j) {
    const VectorXd v = frame.tangent_frame().col(j);
    const VectorXd rest = v - d.T1(frame, v) - d.T2(frame, v) - frame.g(v, xi) * xi;
    d.complementarity = std::max(d.complementarity, frame.norm(rest));
  }
  if (d.complementarity > kStructuralTolerance) {
    throw HypothesisError(d1.name + " + " + d2.name + " + xi does not span the tangent space");
  }

  d.theta1 = slant_angle(frame, d.d1, seed);
  d.theta2 = slant_angle(frame, d.d2, seed + 1);
  d.slant1 = d.theta1.spread <= kSlantConstancyTolerance;
  d.slant2 = d.theta2.spread <= kSlantConstancyTolerance;

  for (Eigen::Index i = 0; i < d.d1.dim(); ++i) {
    const VectorXd px = frame.phi(d.d1.basis.col(i));
    d.phi_d1_perp = std::max(d.phi_d1_perp, std::abs(frame.g(px, xi)));
    for (Eigen::Index j = 0; j < d.d2.dim(); ++j) {
      d.phi_d1_perp = std::max(d.phi_d1_perp, std::abs(frame.g(px, d.d2.basis.col(j))));
    }
  }

  if (mode == BiSlantMode::strict) {
    if (!d.slant1) {
      throw HypothesisError(d1.name + " is not pointwise slant (angle spread " +
                            std::to_string(d.theta1.spread) + " rad)");
    }
    if (!d.slant2) {
      throw HypothesisError(d2.name + " is not pointwise slant (angle spread " +
                            std::to_string(d.theta2.spread) + " rad)");
    }
    if (d.phi_d1_perp > kStructuralTolerance) {
      throw HypothesisError("phi(" + d1.name + ") is not orthogonal to " + d2.name +
                            " + xi (defect " + std::to_string(d.phi_d1_perp) + ")");
    }
  }

  auto in_range = [](double th) {
    return th > kProperMargin && th < std::numbers::pi / 2 - kProperMargin;
  };
  d.proper = in_range(d.theta1.spectral_theta) && in_range(d.theta2.spectral_theta);

  // Normal bundle: Q D1, Q D2 and the complement nu.
  const MatrixXd& g = frame.metric();
  const Eigen::Index N = frame.ambient_dim();
  MatrixXd q1(N, d.d1.dim());
  MatrixXd q2(N, d.d2.dim());
  for (Eigen::Index i = 0; i < d.d1.dim(); ++i) q1.col(i) = frame.Q(d.d1.basis.col(i));
  for (Eigen::Index j = 0; j < d.d2.dim(); ++j) q2.col(j) = frame.Q(d.d2.basis.col(j));
  constexpr double kNormalSkip = 1e-7;
  d.qd1 = span_frame(MatrixXd(N, 0), q1, g, kNormalSkip);
  d.qd2 = span_frame(MatrixXd(N, 0), q2, g, kNormalSkip);
  for (Eigen::Index i = 0; i < d.qd1.cols(); ++i) {
    for (Eigen::Index j = 0; j < d.qd2.cols(); ++j) {
      d.qd_orthogonality =
          std::max(d.qd_orthogonality, std::abs(frame.g(d.qd1.col(i), d.qd2.col(j))));
    }
  }
  MatrixXd q12(N, d.qd1.cols() + d.qd2.cols());
  q12 << d.qd1, d.qd2;
  const MatrixXd joint = span_frame(MatrixXd(N, 0), q12, g, kNormalSkip);
  d.nu = span_frame(joint, frame.normal_frame(), g, kNormalSkip);
  for (Eigen::Index r = 0; r < d.nu.cols(); ++r) {
    const VectorXd pv = frame.phi(d.nu.col(r));
    d.nu_invariance = std::max(d.nu_invariance, frame.norm(pv - project(frame, d.nu, pv)));
  }

  const DistributionAt* parts[2] = {&d.d1, &d.d2};
  const double cos2[2] = {d.cos2_1(), d.cos2_2()};
  for (int i = 0; i < 2; ++i) {
    const MatrixXd& e = parts[i]->basis;
    auto Ti = [&](const VectorXd& v) { return project(frame, e, v); };
    for (Eigen::Index k = 0; k < e.cols(); ++k) {
      const VectorXd x = e.col(k);
      const VectorXd pix = Ti(frame.P(x));
      const VectorXd lhs = Ti(frame.P(pix));
      d.p3_3[i] = std::max(d.p3_3[i],
                           frame.norm(lhs + cos2[i] * (x - frame.eta(x) * xi)));
    }
  }

  double trace = 0.0;
  for (Eigen::Index j = 0; j < frame.tangent_frame().cols(); ++j) {
    if (j == *frame.xi_column()) continue;
    const VectorXd pe = frame.P(frame.tangent_frame().col(j));
    trace += frame.g(pe, pe);
  }
  d.trace_bookkeeping = std::abs(cos2[0] * static_cast<double>(d.d1.dim()) +
                                 cos2[1] * static_cast<double>(d.d2.dim()) - trace);
  return d;
}

std::vector<LemmaResidual> bislant_connection_residuals(const SubmanifoldFrame& frame,
                                             const BiSlantDecomposition& d) {
  std::vector<LemmaResidual> out;
  auto A = [&](const VectorXd& v, const VectorXd& x) { return frame.shape(v, x); };
  auto Q = [&](const VectorXd& x) { return frame.Q(x); };
  const double s1 = d.sin2_1();
  const double s2 = d.sin2_2();

  const MatrixXd& e1x = d.d1_xi.basis;
  const MatrixXd& e2 = d.d2.basis;
  for (Eigen::Index i = 0; i < e1x.cols(); ++i) {
    const VectorXd x = e1x.col(i);
    const VectorXd x_coords = frame.to_coords(x);
    for (Eigen::Index j = 0; j < e1x.cols(); ++j) {
      const VectorXd y = e1x.col(j);
      const VectorXd nabla_xy = frame.nabla(x_coords, d.d1_xi.section_through(frame, y));
      const VectorXd p1y = d.P1(frame, y);
      for (Eigen::Index k = 0; k < e2.cols(); ++k) {
        const VectorXd z = e2.col(k);
        const VectorXd p2z = d.P2(frame, z);
        LemmaResidual r{"3.4"};
        r.lhs = (s1 - s2) * frame.g(nabla_xy, z);
        r.rhs = frame.g(A(Q(p2z), y) - A(Q(z), p1y), x) + frame.g(A(Q(p1y), z) - A(Q(y), p2z), x);
        out.push_back(r);
      }
    }
  }

  std::vector<std::pair<std::string, VectorXd>> xs;
  for (Eigen::Index i = 0; i < d.d1.dim(); ++i) xs.emplace_back("3.5", d.d1.basis.col(i));
  xs.emplace_back("3.5/xi", frame.xi());
  for (Eigen::Index a = 0; a < e2.cols(); ++a) {
    const VectorXd z = e2.col(a);
    const VectorXd z_coords = frame.to_coords(z);
    for (Eigen::Index b = 0; b < e2.cols(); ++b) {
      const VectorXd w = e2.col(b);
      const VectorXd nabla_zw = frame.nabla(z_coords, d.d2.section_through(frame, w));
      const VectorXd p2w = d.P2(frame, w);
      for (const auto& [tag, x] : xs) {
        const VectorXd p1x = d.P1(frame, x);
        LemmaResidual r{tag};
        r.lhs = (s2 - s1) * frame.g(nabla_zw, x);
        r.rhs = frame.g(A(Q(p2w), x) - A(Q(w), p1x), z) + frame.g(A(Q(p1x), w) - A(Q(x), p2w), z) -
                frame.eta(x) * frame.g(z, w);
        out.push_back(r);
      }
    }
  }
  return out;
}

FoliationCriteria foliation_criteria(const SubmanifoldFrame& frame,
                                     const BiSlantDecomposition& d) {
  FoliationCriteria f;
  auto A = [&](const VectorXd& v, const VectorXd& x) { return frame.shape(v, x); };
  auto Q = [&](const VectorXd& x) { return frame.Q(x); };
  const MatrixXd& e1x = d.d1_xi.basis;
  const MatrixXd& e2 = d.d2.basis;

  for (Eigen::Index i = 0; i < e1x.cols(); ++i) {
    const VectorXd x = e1x.col(i);
    const VectorXd x_coords = frame.to_coords(x);
    const VectorXd p1x = d.P1(frame, x);
    for (Eigen::Index j = 0; j < e1x.cols(); ++j) {
      const VectorXd y = e1x.col(j);
      const VectorXd nabla_xy = frame.nabla(x_coords, d.d1_xi.section_through(frame, y));
      const VectorXd p1y = d.P1(frame, y);
      for (Eigen::Index k = 0; k < e2.cols(); ++k) {
        const VectorXd z = e2.col(k);
        const VectorXd p2z = d.P2(frame, z);
        const double c = frame.g(A(Q(p2z), x) - A(Q(z), p1x) + A(Q(p1y), z) - A(Q(y), p2z), y);
        f.criterion_d1 = std::max(f.criterion_d1, std::abs(c));
        f.geometric_d1 = std::max(f.geometric_d1, std::abs(frame.g(nabla_xy, z)));
      }
    }
  }

  for (Eigen::Index a = 0; a < e2.cols(); ++a) {
    const VectorXd z = e2.col(a);
    const VectorXd z_coords = frame.to_coords(z);
    for (Eigen::Index b = 0; b < e2.cols(); ++b) {
      const VectorXd w = e2.col(b);
      const VectorXd nabla_zw = frame.nabla(z_coords, d.d2.section_through(frame, w));
      const VectorXd p2w = d.P2(frame, w);
      for (Eigen::Index i = 0; i < e1x.cols(); ++i) {
        const VectorXd x = e1x.col(i);
        const VectorXd p1x = d.P1(frame, x);
        const double c = frame.g(A(Q(p2w), x) - A(Q(w), p1x), z) +
                         frame.g(A(Q(p1x), w) - A(Q(x), p2w), z) - frame.eta(x) * frame.g(z, w);
        const double geo = frame.g(nabla_zw, x);
        f.criterion_d2 = std::max(f.criterion_d2, std::abs(c));
        f.geometric_d2 = std::max(f.geometric_d2, std::abs(geo));
        if (std::abs(frame.eta(x)) <= kStructuralTolerance) {
          f.criterion_d2_on_d1 = std::max(f.criterion_d2_on_d1, std::abs(c));
          f.geometric_d2_on_d1 = std::max(f.geometric_d2_on_d1, std::abs(geo));
        }
      }
    }
  }
  return f;
}

VectorXd slant_spectrum(const SubmanifoldFrame& frame) {
  const MatrixXd& t = frame.tangent_frame();
  const VectorXd& xi = frame.xi();
  MatrixXd horizontal(t.rows(), t.cols());
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    horizontal.col(j) = frame.tangential(t.col(j) - frame.g(t.col(j), xi) * xi);
  }
  const MatrixXd e = span_frame(MatrixXd(t.rows(), 0), horizontal, frame.metric(), 1e-8);
  MatrixXd m(e.cols(), e.cols());
  for (Eigen::Index i = 0; i < e.cols(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = frame.g(frame.P(e.col(i)), frame.P(e.col(j)));
  }
  return sym_eigen(0.5 * (m + m.transpose())).values;
}

}  // namespace kenmotsu
