#include "kenmotsu/ambient.hpp"

#include "kenmotsu/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace kenmotsu {

KenmotsuStructure::KenmotsuStructure(int m, MetricModel model, PhiConvention convention)
    : m_(m), model_(model), convention_(convention) {
  if (m < 1) throw DimensionError("ambient m must be at least 1, got " + std::to_string(m));
  const Eigen::Index n = dim();
  const double s = convention == PhiConvention::standard ? 1.0 : -1.0;
  phi_ = MatrixXd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    const Eigen::Index x = 2 * i;
    const Eigen::Index y = 2 * i + 1;
    phi_(y, x) = s;   // d/dx -> s d/dy
    phi_(x, y) = -s;  // d/dy -> -s d/dx
  }
  xi_ = VectorXd::Unit(n, t_index());
  eta_ = VectorXd::Unit(n, t_index());
}

void KenmotsuStructure::check_point(const VectorXd& point) const {
  if (point.size() != dim()) {
    throw DimensionError("ambient point has " + std::to_string(point.size()) +
                         " coordinates, expected " + std::to_string(dim()));
  }
}

MatrixXd KenmotsuStructure::metric(const VectorXd& point) const {
  check_point(point);
  return metric(std::vector<double>(point.data(), point.data() + point.size()));
}

VectorXd KenmotsuStructure::apply_phi(const VectorXd& point, const VectorXd& v) const {
  check_point(point);
  if (v.size() != dim()) throw DimensionError("apply_phi: vector dimension mismatch");
  return phi_ * v;
}

double KenmotsuStructure::metric_eval(const VectorXd& point, const VectorXd& u,
                                      const VectorXd& v) const {
  if (u.size() != dim() || v.size() != dim()) {
    throw DimensionError("metric_eval: vector dimension mismatch");
  }
  return inner(metric(point), u, v);
}

VectorXd Christoffel::contract(const VectorXd& u, const VectorXd& v) const {
  VectorXd out(static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = u.dot(gamma[k] * v);
  }
  return out;
}

std::vector<MatrixXd> metric_derivatives(const KenmotsuStructure& structure,
                                         const VectorXd& point) {
  const Eigen::Index n = structure.dim();
  if (point.size() != n) throw DimensionError("metric_derivatives: point dimension mismatch");
  std::vector<Dual2<double>> x;
  x.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) x.push_back(Dual2<double>::variable(point(i), i, n));
  const auto g = structure.metric(x);
  std::vector<MatrixXd> dg(static_cast<std::size_t>(n), MatrixXd(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& grad = g(i, j).gradient();
      for (Eigen::Index k = 0; k < n; ++k) dg[static_cast<std::size_t>(k)](i, j) = grad(k);
    }
  }
  return dg;
}

Christoffel christoffel(const KenmotsuStructure& structure, const VectorXd& point) {
  const Eigen::Index n = structure.dim();
  const auto dg = metric_derivatives(structure, point);
  const MatrixXd ginv = structure.metric(point).inverse();
  // Lowered symbols Γ_lij = (∂_i g_lj + ∂_j g_li - ∂_l g_ij) / 2.
  Christoffel c;
  c.gamma.assign(static_cast<std::size_t>(n), MatrixXd::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      VectorXd lowered(n);
      for (Eigen::Index l = 0; l < n; ++l) {
        lowered(l) = 0.5 * (dg[static_cast<std::size_t>(i)](l, j) +
                            dg[static_cast<std::size_t>(j)](l, i) -
                            dg[static_cast<std::size_t>(l)](i, j));
      }
      const VectorXd raised = ginv * lowered;
      for (Eigen::Index k = 0; k < n; ++k) c.gamma[static_cast<std::size_t>(k)](i, j) = raised(k);
    }
  }
  return c;
}

VectorXd ambient_covariant_derivative(const Christoffel& connection, const VectorXd& field,
                                      const VectorXd& field_derivative,
                                      const VectorXd& direction) {
  const auto n = static_cast<Eigen::Index>(connection.gamma.size());
  if (field_derivative.size() == 0) {
    throw DimensionError("covariant derivative needs the field's directional derivative");
  }
  if (field.size() != n || field_derivative.size() != n || direction.size() != n) {
    throw DimensionError("covariant derivative: dimension mismatch");
  }
  return field_derivative + connection.contract(direction, field);
}

const AxiomResidual& AxiomReport::find(const std::string& name) const {
  for (const auto& r : residuals) {
    if (r.name == name) return r;
  }
  throw Error("no axiom residual named " + name);
}

double AxiomReport::max_for(const std::string& eq_ref) const {
  double worst = 0.0;
  for (const auto& r : residuals) {
    if (r.eq_ref == eq_ref) worst = std::max(worst, r.max_residual);
  }
  return worst;
}

namespace {

class Accumulator {
 public:
  void add(const std::string& eq_ref, const std::string& name) {
    entries_.push_back({eq_ref, name, 0.0, 0});
  }
  void record(std::size_t entry, double residual, std::size_t sample) {
    auto& e = entries_[entry];
    if (!(residual <= e.max_residual)) {
      e.max_residual = residual;
      e.worst_sample = sample;
    }
  }
  std::vector<AxiomResidual> take() { return std::move(entries_); }

 private:
  std::vector<AxiomResidual> entries_;
};

}  // namespace

AxiomReport check_kenmotsu_axioms(const KenmotsuStructure& structure,
                                  const std::vector<VectorXd>& points, unsigned long long seed,
                                  int probes) {
  const Eigen::Index n = structure.dim();
  const MatrixXd& phi = structure.phi();
  const VectorXd& xi = structure.xi();
  const VectorXd& eta = structure.eta();

  enum : std::size_t {
    phi_xi, eta_phi, phi_squared, phi_skew, eta_metric, eta_xi, phi_isometry, nabla_xi,
    nabla_phi, symmetry, compatibility
  };
  Accumulator acc;
  acc.add("2.1", "phi_xi");
  acc.add("2.1", "eta_phi");
  acc.add("2.1", "phi_squared");
  acc.add("2.2", "phi_skew");
  acc.add("2.2", "eta_metric");
  acc.add("2.2", "eta_xi");
  acc.add("2.3", "phi_isometry");
  acc.add("2.4", "nabla_xi");
  acc.add("2.5", "nabla_phi");
  acc.add("connection", "symmetry");
  acc.add("connection", "metric_compatibility");

  // Structure tensors are constant in the model, so the algebraic axioms
  // do not depend on the point.
  const MatrixXd phi2_residual = phi * phi + MatrixXd::Identity(n, n) - xi * eta.transpose();

  Rng rng(seed);
  for (std::size_t s = 0; s < points.size(); ++s) {
    const VectorXd& p = points[s];
    const MatrixXd g = structure.metric(p);
    const Christoffel c = christoffel(structure, p);
    const auto dg = metric_derivatives(structure, p);

    acc.record(phi_xi, (phi * xi).cwiseAbs().maxCoeff(), s);
    acc.record(eta_phi, (eta.transpose() * phi).cwiseAbs().maxCoeff(), s);
    acc.record(phi_squared, phi2_residual.cwiseAbs().maxCoeff(), s);
    acc.record(eta_xi, std::abs(eta.dot(xi) - 1.0), s);

    // Random probes plus the coordinate directions.
    std::vector<VectorXd> vs;
    for (int k = 0; k < probes; ++k) vs.push_back(rng.uniform_vector(n, -1.0, 1.0));
    for (Eigen::Index i = 0; i < n; ++i) vs.push_back(VectorXd::Unit(n, i));

    for (std::size_t a = 0; a < vs.size(); ++a) {
      const VectorXd& X = vs[a];
      const VectorXd& Y = vs[(a + 1) % vs.size()];
      const double ex = eta.dot(X);
      const double ey = eta.dot(Y);
      acc.record(phi_skew, std::abs(inner(g, phi * X, Y) + inner(g, X, phi * Y)), s);
      acc.record(eta_metric, std::abs(ex - inner(g, X, xi)), s);
      acc.record(phi_isometry, std::abs(inner(g, phi * X, phi * Y) - inner(g, X, Y) + ex * ey),
                 s);

      // ξ and φY have constant components, so their covariant derivatives
      // are pure connection terms.
      const VectorXd nx = c.contract(X, xi) - X + ex * xi;
      acc.record(nabla_xi, norm(g, nx), s);
      const VectorXd nphi = c.contract(X, phi * Y) - phi * c.contract(X, Y);
      const VectorXd rhs = inner(g, phi * X, Y) * xi - ey * (phi * X);
      acc.record(nabla_phi, norm(g, nphi - rhs), s);
    }

    double asym = 0.0;
    for (const auto& gk : c.gamma) asym = std::max(asym, (gk - gk.transpose()).cwiseAbs().maxCoeff());
    acc.record(symmetry, asym, s);

    double compat = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      // ∂_k g_ij - Γ^l_ki g_lj - Γ^l_kj g_il
      MatrixXd gk_lower(n, n);  // (Γ_k)^l_i = Γ^l_ki as a matrix (l, i)
      for (Eigen::Index l = 0; l < n; ++l) {
        gk_lower.row(l) = c.gamma[static_cast<std::size_t>(l)].row(k);
      }
      const MatrixXd term = gk_lower.transpose() * g;
      const MatrixXd r = dg[static_cast<std::size_t>(k)] - term - term.transpose();
      compat = std::max(compat, r.cwiseAbs().maxCoeff());
    }
    acc.record(compatibility, compat, s);
  }

  AxiomReport report;
  report.residuals = acc.take();
  report.points = points;
  return report;
}

}  // namespace kenmotsu
