#pragma once

// The model Kenmotsu space R^{2m+1} with coordinates (x1, y1, ..., xm, ym, t):
//
//   g = dt^2 + e^{2t} sum_i (dx_i^2 + dy_i^2),   xi = d/dt,   eta = dt,
//   phi(d/dx_i) = d/dy_i,  phi(d/dy_i) = -d/dx_i,  phi(d/dt) = 0.
//
// The cosymplectic model drops the e^{2t} factor; it is an almost contact
// metric structure that is not Kenmotsu and serves as a negative control.

#include "kenmotsu/dual2.hpp"
#include "kenmotsu/errors.hpp"
#include "kenmotsu/linalg.hpp"

#include <string>
#include <vector>

namespace kenmotsu {

enum class MetricModel { kenmotsu, cosymplectic };

// standard: d/dx -> +d/dy.  opposite: d/dx -> -d/dy.
enum class PhiConvention { standard, opposite };

class KenmotsuStructure {
 public:
  explicit KenmotsuStructure(int m, MetricModel model = MetricModel::kenmotsu,
                             PhiConvention convention = PhiConvention::standard);

  int m() const { return m_; }
  Eigen::Index dim() const { return 2 * m_ + 1; }
  Eigen::Index t_index() const { return 2 * m_; }
  MetricModel model() const { return model_; }
  PhiConvention convention() const { return convention_; }

  // Metric components g_ij at a point, over any scalar with exp().
  template <typename T>
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> metric(
      const std::vector<T>& point) const;

  MatrixXd metric(const VectorXd& point) const;

  const MatrixXd& phi() const { return phi_; }
  const VectorXd& xi() const { return xi_; }
  const VectorXd& eta() const { return eta_; }

  VectorXd apply_phi(const VectorXd& point, const VectorXd& v) const;
  double metric_eval(const VectorXd& point, const VectorXd& u, const VectorXd& v) const;

 private:
  void check_point(const VectorXd& point) const;

  int m_;
  MetricModel model_;
  PhiConvention convention_;
  MatrixXd phi_;
  VectorXd xi_;
  VectorXd eta_;
};

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> KenmotsuStructure::metric(
    const std::vector<T>& point) const {
  using std::exp;
  const T& t = point[static_cast<std::size_t>(t_index())];
  const T zero = t * 0.0;
  const T scale = model_ == MetricModel::kenmotsu ? exp(t * 2.0) : zero + 1.0;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> g(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    for (Eigen::Index j = 0; j < dim(); ++j) g(i, j) = zero;
  }
  for (Eigen::Index i = 0; i < t_index(); ++i) g(i, i) = scale;
  g(t_index(), t_index()) = zero + 1.0;
  return g;
}

// Levi-Civita connection coefficients at a point: gamma[k](i, j) = Γ^k_ij.
struct Christoffel {
  std::vector<MatrixXd> gamma;

  // Σ_ij Γ^k_ij u^i v^j, i.e. ∇̄_u v for a field with constant components v.
  VectorXd contract(const VectorXd& u, const VectorXd& v) const;
};

// Koszul formula with metric derivatives from forward-mode duals.
Christoffel christoffel(const KenmotsuStructure& structure, const VectorXd& point);

// Metric derivatives ∂_k g_ij as dg[k](i, j).
std::vector<MatrixXd> metric_derivatives(const KenmotsuStructure& structure,
                                         const VectorXd& point);

// ∇̄_direction Y where Y has value `field` at the point and its ordinary
// component derivative along `direction` is `field_derivative`.
VectorXd ambient_covariant_derivative(const Christoffel& connection, const VectorXd& field,
                                      const VectorXd& field_derivative,
                                      const VectorXd& direction);

struct AxiomResidual {
  std::string eq_ref;
  std::string name;
  double max_residual = 0.0;
  std::size_t worst_sample = 0;
};

struct AxiomReport {
  std::vector<AxiomResidual> residuals;
  std::vector<VectorXd> points;

  const AxiomResidual& find(const std::string& name) const;
  double max_for(const std::string& eq_ref) const;
};

// Residuals of the almost contact metric and Kenmotsu axioms at each point,
// using `probes` random vector pairs per point (deterministic given seed).
AxiomReport check_kenmotsu_axioms(const KenmotsuStructure& structure,
                                  const std::vector<VectorXd>& points, unsigned long long seed,
                                  int probes = 4);

}  // namespace kenmotsu
