#pragma once

// Induced geometry of a parametric immersion chi: box in R^n -> R^{2m+1}.
//
// Tangent vectors are handled in two forms: ambient components (length
// 2m+1) and parameter coordinates (length n, coefficients on d chi / d p_a).
// Vector fields on the submanifold are given by their parameter-coordinate
// coefficients as expressions, which is enough to differentiate them.

#include "kenmotsu/ambient.hpp"
#include "kenmotsu/expr.hpp"
#include "kenmotsu/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kenmotsu {

class Immersion {
 public:
  Immersion(std::vector<std::string> parameters, const std::vector<std::string>& components,
            Box box);

  Eigen::Index n() const { return static_cast<Eigen::Index>(parameters_.size()); }
  Eigen::Index ambient_dim() const { return static_cast<Eigen::Index>(components_.size()); }
  const std::vector<std::string>& parameters() const { return parameters_; }
  const std::vector<CompiledExpr>& components() const { return components_; }
  const Box& box() const { return box_; }

  struct Jet {
    VectorXd position;              // chi(p)
    MatrixXd jacobian;              // (2m+1) x n
    std::vector<MatrixXd> hessian;  // per component, n x n
  };

  VectorXd position(const VectorXd& p) const;
  Jet jet(const VectorXd& p) const;

 private:
  std::vector<std::string> parameters_;
  std::vector<CompiledExpr> components_;
  Box box_;
};

// A tangent vector field sum_a c_a(p) d/dp_a.
struct FieldExpr {
  std::string label;
  std::vector<CompiledExpr> coefficients;

  static FieldExpr coordinate(const std::vector<std::string>& parameters, std::size_t index);
  static FieldExpr parse(const std::string& label, const std::vector<std::string>& sources,
                         const std::vector<std::string>& parameters);
};

struct FieldJet {
  VectorXd value;     // coefficients at p
  MatrixXd jacobian;  // (a, b) = d c_a / d p_b
};

FieldJet field_jet(const FieldExpr& field, const VectorXd& p);

class SubmanifoldFrame {
 public:
  SubmanifoldFrame(const Immersion& immersion, const KenmotsuStructure& structure,
                   const VectorXd& p);

  // Sizes.
  Eigen::Index n() const { return jacobian_.cols(); }
  Eigen::Index ambient_dim() const { return jacobian_.rows(); }

  const VectorXd& parameter_point() const { return p_; }
  const VectorXd& ambient_point() const { return x_; }
  const MatrixXd& jacobian() const { return jacobian_; }
  const std::vector<MatrixXd>& component_hessians() const { return hessians_; }
  const MatrixXd& metric() const { return g_; }
  const MatrixXd& induced_metric() const { return induced_; }
  const MatrixXd& induced_metric_inverse() const { return induced_inv_; }
  const Christoffel& connection() const { return connection_; }
  const KenmotsuStructure& structure() const { return *structure_; }

  // Orthonormal frames (columns, ambient components).
  const MatrixXd& tangent_frame() const { return tangent_; }
  const MatrixXd& normal_frame() const { return normal_; }
  // Column of tangent_frame() equal to xi, if xi is tangent.
  std::optional<Eigen::Index> xi_column() const { return xi_column_; }
  // g-norm of the normal part of xi.
  double xi_normal_part() const { return xi_normal_part_; }

  const MatrixXd& tangential_projector() const { return proj_t_; }
  const MatrixXd& normal_projector() const { return proj_n_; }

  double g(const VectorXd& u, const VectorXd& v) const { return inner(g_, u, v); }
  double norm(const VectorXd& v) const { return kenmotsu::norm(g_, v); }
  double eta(const VectorXd& v) const { return structure_->eta().dot(v); }
  const VectorXd& xi() const { return structure_->xi(); }

  VectorXd to_ambient(const VectorXd& coords) const { return jacobian_ * coords; }
  VectorXd to_coords(const VectorXd& tangent) const;

  VectorXd tangential(const VectorXd& v) const { return proj_t_ * v; }
  VectorXd normal(const VectorXd& v) const { return proj_n_ * v; }
  VectorXd phi(const VectorXd& v) const { return structure_->phi() * v; }

  VectorXd P(const VectorXd& x) const { return tangential(phi(x)); }
  VectorXd Q(const VectorXd& x) const { return normal(phi(x)); }
  VectorXd b(const VectorXd& v) const { return tangential(phi(v)); }
  VectorXd c(const VectorXd& v) const { return normal(phi(v)); }

  // P in parameter coordinates: phi(J x) = J (P_coords x) + normal part.
  MatrixXd P_coords() const;

  // ∇̄_{d_a} d_b = d^2 chi_ab + Γ(d_a chi, d_b chi).
  const VectorXd& coordinate_derivative(Eigen::Index a, Eigen::Index b) const {
    return coord_nabla_[static_cast<std::size_t>(a * n() + b)];
  }

  // Second fundamental form and shape operator on ambient tangent vectors.
  VectorXd h(const VectorXd& x, const VectorXd& y) const;
  VectorXd shape(const VectorXd& v, const VectorXd& x) const;

  // ∇̄_X Y for a field Y with coefficients y and coefficient jacobian dy at p.
  // X is given in parameter coordinates.
  VectorXd nabla_bar(const VectorXd& x_coords, const VectorXd& y, const MatrixXd& dy) const;
  VectorXd nabla(const VectorXd& x_coords, const VectorXd& y, const MatrixXd& dy) const {
    return tangential(nabla_bar(x_coords, y, dy));
  }
  VectorXd nabla_bar(const VectorXd& x_coords, const FieldJet& y) const {
    return nabla_bar(x_coords, y.value, y.jacobian);
  }
  VectorXd nabla(const VectorXd& x_coords, const FieldJet& y) const {
    return nabla(x_coords, y.value, y.jacobian);
  }

  // Induced Christoffel symbols: gamma[c](a, b).
  std::vector<MatrixXd> induced_christoffel() const;

 private:
  const KenmotsuStructure* structure_;
  VectorXd p_;
  VectorXd x_;
  MatrixXd jacobian_;
  std::vector<MatrixXd> hessians_;
  MatrixXd g_;
  Christoffel connection_;
  MatrixXd induced_;
  MatrixXd induced_inv_;
  MatrixXd tangent_;
  MatrixXd normal_;
  std::optional<Eigen::Index> xi_column_;
  double xi_normal_part_ = 0.0;
  MatrixXd proj_t_;
  MatrixXd proj_n_;
  std::vector<VectorXd> coord_nabla_;
};

// Throws RankDeficiencyError at degenerate points.
SubmanifoldFrame build_frame(const Immersion& immersion, const KenmotsuStructure& structure,
                             const VectorXd& p);

struct SecondFundamentalData {
  std::vector<VectorXd> h;         // h(e_i, e_j) at index i * n + j
  std::vector<MatrixXd> coefficients;  // per normal frame vector r: h^r_ij
  std::vector<MatrixXd> shape;     // per normal frame vector r: g(A_{e_r} e_i, e_j)
  VectorXd mean_curvature;
  double squared_norm = 0.0;

  const VectorXd& at(Eigen::Index i, Eigen::Index j, Eigen::Index n) const {
    return h[static_cast<std::size_t>(i * n + j)];
  }
};

SecondFundamentalData second_fundamental_form(const SubmanifoldFrame& frame);

struct Gradient {
  VectorXd vector;  // ambient components
  double squared_norm = 0.0;
  VectorXd frame_derivatives;  // e_i(f)
};

Gradient gradient(const SubmanifoldFrame& frame, const CompiledExpr& scalar);

// [X, Y] and ∇_X Y - ∇_Y X, both as ambient vectors.
struct LieBracket {
  VectorXd bracket;
  VectorXd torsion_free_form;
};

LieBracket lie_bracket(const SubmanifoldFrame& frame, const FieldExpr& x, const FieldExpr& y);

// Named residual with the sample it was worst at.
struct Residual {
  std::string name;
  double value = 0.0;
};

// Pointwise consistency of the frame and second fundamental form: projector
// algebra, orthonormality, h symmetry, h/A duality, P skew-adjointness and
// the Weingarten formula for normal parts of constant ambient fields.
std::vector<Residual> frame_checks(const SubmanifoldFrame& frame,
                                   const SecondFundamentalData& sff);

// Tangential part of ∇̄_X V + A_V X for V = normal part of the constant
// ambient field w, with X = the coordinate field d/dp_a.
double weingarten_residual(const SubmanifoldFrame& frame, const VectorXd& w, Eigen::Index a);

// The normal field p -> normal part of w at chi(p), for finite-difference tests.
VectorXd normal_part_of_constant(const Immersion& immersion, const KenmotsuStructure& structure,
                                 const VectorXd& p, const VectorXd& w);

}  // namespace kenmotsu
