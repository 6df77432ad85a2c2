#include "kenmotsu/submanifold.hpp"

#include <algorithm>
#include <cmath>

namespace kenmotsu {

Immersion::Immersion(std::vector<std::string> parameters,
                     const std::vector<std::string>& components, Box box)
    : parameters_(std::move(parameters)), box_(std::move(box)) {
  if (box_.size() != parameters_.size()) {
    throw DimensionError("immersion box has " + std::to_string(box_.size()) +
                         " intervals for " + std::to_string(parameters_.size()) +
                         " parameters");
  }
  components_.reserve(components.size());
  for (const auto& c : components) components_.push_back(compile(c, parameters_));
}

VectorXd Immersion::position(const VectorXd& p) const {
  VectorXd x(ambient_dim());
  for (Eigen::Index k = 0; k < ambient_dim(); ++k) {
    x(k) = components_[static_cast<std::size_t>(k)](p);
  }
  return x;
}

Immersion::Jet Immersion::jet(const VectorXd& p) const {
  Jet j;
  j.position.resize(ambient_dim());
  j.jacobian.resize(ambient_dim(), n());
  j.hessian.reserve(components_.size());
  for (Eigen::Index k = 0; k < ambient_dim(); ++k) {
    const auto d = dual2_eval(components_[static_cast<std::size_t>(k)], p);
    j.position(k) = d.value();
    j.jacobian.row(k) = d.gradient().transpose();
    j.hessian.push_back(d.hessian());
  }
  return j;
}

FieldExpr FieldExpr::coordinate(const std::vector<std::string>& parameters, std::size_t index) {
  std::vector<std::string> src(parameters.size(), "0");
  src.at(index) = "1";
  return parse("d/d" + parameters[index], src, parameters);
}

FieldExpr FieldExpr::parse(const std::string& label, const std::vector<std::string>& sources,
                           const std::vector<std::string>& parameters) {
  if (sources.size() != parameters.size()) {
    throw DimensionError("field '" + label + "' has " + std::to_string(sources.size()) +
                         " coefficients for " + std::to_string(parameters.size()) +
                         " parameters");
  }
  FieldExpr f;
  f.label = label;
  for (const auto& s : sources) f.coefficients.push_back(compile(s, parameters));
  return f;
}

FieldJet field_jet(const FieldExpr& field, const VectorXd& p) {
  const auto n = static_cast<Eigen::Index>(field.coefficients.size());
  FieldJet j{VectorXd(n), MatrixXd(n, p.size())};
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto d = dual2_eval(field.coefficients[static_cast<std::size_t>(a)], p);
    j.value(a) = d.value();
    j.jacobian.row(a) = d.gradient().transpose();
  }
  return j;
}

SubmanifoldFrame::SubmanifoldFrame(const Immersion& immersion,
                                   const KenmotsuStructure& structure, const VectorXd& p)
    : structure_(&structure), p_(p) {
  if (immersion.ambient_dim() != structure.dim()) {
    throw DimensionError("immersion has " + std::to_string(immersion.ambient_dim()) +
                         " components but the ambient space has dimension " +
                         std::to_string(structure.dim()));
  }
  if (p.size() != immersion.n()) {
    throw DimensionError("parameter point has " + std::to_string(p.size()) +
                         " entries, expected " + std::to_string(immersion.n()));
  }
  auto jet = immersion.jet(p);
  x_ = std::move(jet.position);
  jacobian_ = std::move(jet.jacobian);
  hessians_ = std::move(jet.hessian);
  const Eigen::Index n = jacobian_.cols();
  const Eigen::Index N = jacobian_.rows();

  g_ = structure.metric(x_);
  connection_ = christoffel(structure, x_);
  induced_ = jacobian_.transpose() * g_ * jacobian_;

  // Rank test on the induced metric: singular values of J under g are the
  // square roots of its eigenvalues.
  const VectorXd ev = sym_eigen(induced_).values;
  if (!(ev(0) > 1e-16 * ev(n - 1))) {
    throw RankDeficiencyError("immersion jacobian is rank deficient at this point (condition " +
                              std::to_string(std::sqrt(ev(n - 1) / std::max(ev(0), 0.0))) +
                              ")");
  }
  induced_inv_ = induced_.inverse();
  proj_t_ = jacobian_ * induced_inv_ * jacobian_.transpose() * g_;
  proj_n_ = MatrixXd::Identity(N, N) - proj_t_;

  const VectorXd& xi = structure.xi();
  xi_normal_part_ = kenmotsu::norm(g_, proj_n_ * xi);
  if (xi_normal_part_ <= 1e-8) {
    xi_column_ = 0;
    tangent_ = extend_orthonormal(xi, jacobian_, g_, n);
  } else {
    tangent_ = gram_schmidt(jacobian_, g_);
  }
  const MatrixXd full = extend_orthonormal(tangent_, MatrixXd::Identity(N, N), g_, N);
  normal_ = full.rightCols(N - n);

  coord_nabla_.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      VectorXd second(N);
      for (Eigen::Index k = 0; k < N; ++k) second(k) = hessians_[static_cast<std::size_t>(k)](a, b);
      coord_nabla_[static_cast<std::size_t>(a * n + b)] =
          second + connection_.contract(jacobian_.col(a), jacobian_.col(b));
    }
  }
}

VectorXd SubmanifoldFrame::to_coords(const VectorXd& tangent) const {
  return induced_inv_ * (jacobian_.transpose() * (g_ * tangent));
}

MatrixXd SubmanifoldFrame::P_coords() const {
  return induced_inv_ * jacobian_.transpose() * g_ * structure_->phi() * jacobian_;
}

VectorXd SubmanifoldFrame::h(const VectorXd& x, const VectorXd& y) const {
  const VectorXd a = to_coords(x);
  const VectorXd b = to_coords(y);
  VectorXd acc = VectorXd::Zero(ambient_dim());
  for (Eigen::Index i = 0; i < n(); ++i) {
    for (Eigen::Index j = 0; j < n(); ++j) {
      const double w = a(i) * b(j);
      if (w != 0.0) acc += w * coordinate_derivative(i, j);
    }
  }
  return normal(acc);
}

VectorXd SubmanifoldFrame::shape(const VectorXd& v, const VectorXd& x) const {
  // S(a, b) = g(h(d_a, d_b), v); A_v in coordinates solves G_ind A = S.
  MatrixXd s(n(), n());
  for (Eigen::Index a = 0; a < n(); ++a) {
    for (Eigen::Index b = 0; b < n(); ++b) s(a, b) = g(normal(coordinate_derivative(a, b)), v);
  }
  const MatrixXd a = solve(induced_, s);
  return to_ambient(a * to_coords(x));
}

VectorXd SubmanifoldFrame::nabla_bar(const VectorXd& x_coords, const VectorXd& y,
                                     const MatrixXd& dy) const {
  VectorXd acc = jacobian_ * (dy * x_coords);
  for (Eigen::Index a = 0; a < n(); ++a) {
    for (Eigen::Index b = 0; b < n(); ++b) {
      const double w = y(a) * x_coords(b);
      if (w != 0.0) acc += w * coordinate_derivative(b, a);
    }
  }
  return acc;
}

std::vector<MatrixXd> SubmanifoldFrame::induced_christoffel() const {
  std::vector<MatrixXd> out(static_cast<std::size_t>(n()), MatrixXd(n(), n()));
  for (Eigen::Index a = 0; a < n(); ++a) {
    for (Eigen::Index b = 0; b < n(); ++b) {
      const VectorXd c = to_coords(coordinate_derivative(a, b));
      for (Eigen::Index k = 0; k < n(); ++k) out[static_cast<std::size_t>(k)](a, b) = c(k);
    }
  }
  return out;
}

SubmanifoldFrame build_frame(const Immersion& immersion, const KenmotsuStructure& structure,
                             const VectorXd& p) {
  return SubmanifoldFrame(immersion, structure, p);
}

SecondFundamentalData second_fundamental_form(const SubmanifoldFrame& frame) {
  const Eigen::Index n = frame.n();
  const MatrixXd& e = frame.tangent_frame();
  const MatrixXd& nu = frame.normal_frame();
  SecondFundamentalData d;
  d.h.resize(static_cast<std::size_t>(n * n));
  d.mean_curvature = VectorXd::Zero(frame.ambient_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      d.h[static_cast<std::size_t>(i * n + j)] = frame.h(e.col(i), e.col(j));
    }
    d.mean_curvature += d.at(i, i, n);
  }
  d.mean_curvature /= static_cast<double>(n);
  for (Eigen::Index r = 0; r < nu.cols(); ++r) {
    MatrixXd coeff(n, n);
    MatrixXd shape(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const VectorXd ae = frame.shape(nu.col(r), e.col(i));
      for (Eigen::Index j = 0; j < n; ++j) {
        coeff(i, j) = frame.g(d.at(i, j, n), nu.col(r));
        shape(i, j) = frame.g(ae, e.col(j));
      }
    }
    d.squared_norm += coeff.squaredNorm();
    d.coefficients.push_back(std::move(coeff));
    d.shape.push_back(std::move(shape));
  }
  return d;
}

Gradient gradient(const SubmanifoldFrame& frame, const CompiledExpr& scalar) {
  const auto d = dual2_eval(scalar, frame.parameter_point());
  Gradient grad;
  grad.vector = frame.to_ambient(frame.induced_metric_inverse() * d.gradient());
  const MatrixXd& e = frame.tangent_frame();
  grad.frame_derivatives.resize(e.cols());
  for (Eigen::Index i = 0; i < e.cols(); ++i) {
    grad.frame_derivatives(i) = d.gradient().dot(frame.to_coords(e.col(i)));
  }
  grad.squared_norm = grad.frame_derivatives.squaredNorm();
  return grad;
}

LieBracket lie_bracket(const SubmanifoldFrame& frame, const FieldExpr& x, const FieldExpr& y) {
  const FieldJet jx = field_jet(x, frame.parameter_point());
  const FieldJet jy = field_jet(y, frame.parameter_point());
  LieBracket lb;
  lb.bracket = frame.to_ambient(jy.jacobian * jx.value - jx.jacobian * jy.value);
  lb.torsion_free_form = frame.nabla(jx.value, jy) - frame.nabla(jy.value, jx);
  return lb;
}

double weingarten_residual(const SubmanifoldFrame& frame, const VectorXd& w, Eigen::Index a) {
  const Eigen::Index n = frame.n();
  const Eigen::Index N = frame.ambient_dim();
  const MatrixXd& J = frame.jacobian();
  const MatrixXd& G = frame.metric();
  const MatrixXd& K = frame.induced_metric_inverse();

  // d/dp_a of J and of G(chi(p)).
  MatrixXd dJ(N, n);
  for (Eigen::Index k = 0; k < N; ++k) {
    for (Eigen::Index b = 0; b < n; ++b) dJ(k, b) = frame.component_hessians()[static_cast<std::size_t>(k)](b, a);
  }
  const auto dg = metric_derivatives(frame.structure(), frame.ambient_point());
  MatrixXd dG = MatrixXd::Zero(N, N);
  for (Eigen::Index k = 0; k < N; ++k) dG += dg[static_cast<std::size_t>(k)] * J(k, a);

  const MatrixXd dInd = dJ.transpose() * G * J + J.transpose() * dG * J + J.transpose() * G * dJ;
  const MatrixXd dK = -K * dInd * K;

  // Tangential part of w as u^b d_b, and the derivative of u along d_a.
  const VectorXd u = K * J.transpose() * G * w;
  const VectorXd du = dK * J.transpose() * G * w + K * dJ.transpose() * G * w +
                      K * J.transpose() * dG * w;

  const VectorXd ea = VectorXd::Unit(n, a);
  const VectorXd v = w - J * u;
  // ∇̄_a v = Γ(d_a, w) - ∇̄_a (u^b d_b)
  MatrixXd du_mat = MatrixXd::Zero(n, n);
  du_mat.col(a) = du;
  const VectorXd nv = frame.connection().contract(J.col(a), w) - frame.nabla_bar(ea, u, du_mat);
  const VectorXd residual = frame.tangential(nv) + frame.shape(v, J.col(a));
  return frame.norm(residual);
}

VectorXd normal_part_of_constant(const Immersion& immersion, const KenmotsuStructure& structure,
                                 const VectorXd& p, const VectorXd& w) {
  const SubmanifoldFrame f(immersion, structure, p);
  return f.normal(w);
}

std::vector<Residual> frame_checks(const SubmanifoldFrame& frame,
                                   const SecondFundamentalData& sff) {
  const Eigen::Index n = frame.n();
  const Eigen::Index N = frame.ambient_dim();
  const MatrixXd& G = frame.metric();
  const MatrixXd& pt = frame.tangential_projector();
  const MatrixXd& pn = frame.normal_projector();
  const MatrixXd& e = frame.tangent_frame();
  const MatrixXd& nu = frame.normal_frame();
  std::vector<Residual> out;

  // Self-adjointness under g: G Π is symmetric.
  const MatrixXd gp = G * pt;
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  out.push_back({"projector_idempotent",
                 std::max((pt * pt - pt).cwiseAbs().maxCoeff(), (pn * pn - pn).cwiseAbs().maxCoeff())});
  out.push_back({"projector_self_adjoint", (gp - gp.transpose()).cwiseAbs().maxCoeff() / scale});
  out.push_back({"projector_complementary",
                 std::max((pt + pn - MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff(),
                          (pt * pn).cwiseAbs().maxCoeff())});
  out.push_back({"tangent_orthonormal", orthonormality_defect(e, G)});
  out.push_back({"normal_orthonormal", orthonormality_defect(nu, G)});
  out.push_back({"tangent_normal_orthogonal",
                 nu.cols() == 0 ? 0.0 : (e.transpose() * G * nu).cwiseAbs().maxCoeff()});
  out.push_back({"frame_spans_tangent_space", (pt * e - e).cwiseAbs().maxCoeff()});

  double hsym = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      hsym = std::max(hsym, frame.norm(sff.at(i, j, n) - sff.at(j, i, n)));
    }
  }
  out.push_back({"h_symmetric", hsym});

  double duality = 0.0;
  for (std::size_t r = 0; r < sff.coefficients.size(); ++r) {
    duality = std::max(duality, (sff.coefficients[r] - sff.shape[r]).cwiseAbs().maxCoeff());
  }
  out.push_back({"shape_operator_duality", duality});

  double hnorm = 0.0;
  for (const auto& v : sff.h) hnorm += frame.g(v, v);
  out.push_back({"h_squared_norm_sum",
                 std::abs(hnorm - sff.squared_norm) / std::max(1.0, sff.squared_norm)});

  double skew = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      skew = std::max(skew, std::abs(frame.g(frame.P(e.col(i)), e.col(j)) +
                                     frame.g(e.col(i), frame.P(e.col(j)))));
    }
  }
  out.push_back({"P_skew_adjoint", skew});

  double split = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd x = e.col(i);
    split = std::max(split, frame.norm(frame.P(x) + frame.Q(x) - frame.phi(x)));
    split = std::max(split, std::abs(frame.g(frame.P(x), frame.Q(x))));
  }
  for (Eigen::Index r = 0; r < nu.cols(); ++r) {
    const VectorXd v = nu.col(r);
    split = std::max(split, frame.norm(frame.b(v) + frame.c(v) - frame.phi(v)));
  }
  out.push_back({"phi_split", split});

  double weingarten = 0.0;
  for (Eigen::Index r = 0; r < N; ++r) {
    const VectorXd w = VectorXd::Unit(N, r);
    for (Eigen::Index a = 0; a < n; ++a) {
      weingarten = std::max(weingarten, weingarten_residual(frame, w, a));
    }
  }
  out.push_back({"weingarten", weingarten});

  // Induced connection against the Koszul formula on the induced metric is
  // left to the tests; here the torsion-free symmetry of ∇̄_{d_a} d_b.
  double sym = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      sym = std::max(sym, frame.norm(frame.coordinate_derivative(a, b) -
                                     frame.coordinate_derivative(b, a)));
    }
  }
  out.push_back({"gauss_symmetric", sym});
  return out;
}

}  // namespace kenmotsu
