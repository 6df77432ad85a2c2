#pragma once

// Pointwise slant and bi-slant analysis on top of a SubmanifoldFrame.

#include "kenmotsu/submanifold.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace kenmotsu {

struct Distribution {
  std::string name;
  std::vector<FieldExpr> generators;
};

// A distribution evaluated at one point.
struct DistributionAt {
  std::string name;
  std::vector<FieldJet> generators;  // parameter-coordinate jets
  MatrixXd basis;                    // orthonormal, ambient components

  Eigen::Index dim() const { return basis.cols(); }

  // The section sum_k c_k G_k with constant c_k chosen so that it passes
  // through the tangent vector v (which must lie in the distribution).
  FieldJet section_through(const SubmanifoldFrame& frame, const VectorXd& v) const;
  // The constant coefficients c_k of that section.
  VectorXd section_coefficients(const SubmanifoldFrame& frame, const VectorXd& v) const;
};

DistributionAt evaluate_distribution(const SubmanifoldFrame& frame, const Distribution& d);

struct SlantAngle {
  double theta = 0.0;             // mean of per-vector angles
  double spread = 0.0;            // max - min of per-vector angles (radians)
  std::vector<double> per_vector;
  VectorXd spectrum;              // eigenvalues of g(P e_i, P e_j) on the basis
  double spectral_theta = 0.0;    // arccos(sqrt(mean eigenvalue))
  double spectral_spread = 0.0;   // max - min eigenvalue

  double cos2() const { return std::cos(spectral_theta) * std::cos(spectral_theta); }
};

// Angles arccos(|PX| / |phi X|) over the generators and `random_probes`
// seeded random unit vectors of the distribution, plus the spectral oracle.
// Throws HypothesisError if some probe is proportional to xi.
SlantAngle slant_angle(const SubmanifoldFrame& frame, const DistributionAt& d,
                       std::uint64_t seed, int random_probes = 8);

inline constexpr double kSlantConstancyTolerance = 1e-6;

struct SlantRelations {
  double p_squared = 0.0;  // max |P^2 X + cos^2(X - eta(X) xi)|
  double pp = 0.0;         // g(PX,PY) relation
  double qq = 0.0;         // g(QX,QY) relation
  double bq = 0.0;         // bQX relation
  double cq = 0.0;         // cQX + QPX
};

// Residuals of the P^2 characterization and its consequences on the
// distribution for the given cos^2.
SlantRelations slant_relations(const SubmanifoldFrame& frame, const DistributionAt& d,
                               double cos2);

enum class BiSlantMode { strict, forced };

struct BiSlantDecomposition {
  DistributionAt d1;
  DistributionAt d2;
  DistributionAt d1_xi;  // D1 plus the xi field
  SlantAngle theta1;
  SlantAngle theta2;

  MatrixXd qd1;  // orthonormal frame of Q D1
  MatrixXd qd2;
  MatrixXd nu;

  // Structural diagnostics.
  double orthogonality = 0.0;        // max |g(D1, D2)|, |g(Di, xi)|
  double complementarity = 0.0;      // tangent vectors not in D1 + D2 + xi
  double phi_d1_perp = 0.0;          // max |g(phi D1, D2 + xi)|
  double qd_orthogonality = 0.0;     // max |g(Q D1, Q D2)|
  double nu_invariance = 0.0;        // part of phi(nu) outside nu
  double p3_3[2] = {0.0, 0.0};       // P_i^2 relation on D_i
  double trace_bookkeeping = 0.0;    // cos^2 th1 dim D1 + cos^2 th2 dim D2 - tr(-P^2 | ker eta)
  bool slant1 = false;
  bool slant2 = false;
  bool proper = false;

  VectorXd T1(const SubmanifoldFrame& frame, const VectorXd& x) const;
  VectorXd T2(const SubmanifoldFrame& frame, const VectorXd& x) const;
  VectorXd P1(const SubmanifoldFrame& frame, const VectorXd& x) const {
    return T1(frame, frame.P(x));
  }
  VectorXd P2(const SubmanifoldFrame& frame, const VectorXd& x) const {
    return T2(frame, frame.P(x));
  }
  double cos2_1() const { return theta1.cos2(); }
  double cos2_2() const { return theta2.cos2(); }
  double sin2_1() const { return 1.0 - cos2_1(); }
  double sin2_2() const { return 1.0 - cos2_2(); }
  bool bislant() const { return slant1 && slant2 && phi_d1_perp <= 1e-8; }
};

// Structural failures (non-orthogonal or non-complementary distributions,
// xi not tangent) always throw HypothesisError.  In strict mode a failed
// slant or phi(D1) orthogonality condition also throws; in forced mode the
// decomposition is built anyway and the flags record the failure.
// d plus the xi field as an extra generator.
Distribution with_xi(const Distribution& d, const FieldExpr& xi_field);

BiSlantDecomposition build_bislant(const SubmanifoldFrame& frame, const Distribution& d1,
                                   const Distribution& d2, const FieldExpr& xi_field,
                                   BiSlantMode mode, std::uint64_t seed);

struct LemmaResidual {
  std::string eq_ref;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

// Both sides of the two bi-slant connection identities over basis vectors:
// X, Y in D1 + xi and Z in D2 for the first; X in D1 (and separately X = xi)
// with Z, W in D2 for the second.  Tags "3.4", "3.5" and "3.5/xi".
std::vector<LemmaResidual> bislant_connection_residuals(const SubmanifoldFrame& frame,
                                             const BiSlantDecomposition& d);

struct FoliationCriteria {
  double criterion_d1 = 0.0;  // max |shape-operator expression| for D1 + xi
  double geometric_d1 = 0.0;  // max |g(∇_X Y, Z)|
  double criterion_d2 = 0.0;
  double geometric_d2 = 0.0;  // max |g(∇_Z W, X)|
  // The same two quantities with X restricted to D1.
  double criterion_d2_on_d1 = 0.0;
  double geometric_d2_on_d1 = 0.0;
  bool d1_totally_geodesic(double tol) const { return geometric_d1 <= tol; }
  bool d2_totally_geodesic(double tol) const { return geometric_d2 <= tol; }
};

FoliationCriteria foliation_criteria(const SubmanifoldFrame& frame,
                                     const BiSlantDecomposition& d);

// Diagnostic only: eigenvalues of the compression of -P^2 to the orthogonal
// complement of xi in the tangent space, ascending.
VectorXd slant_spectrum(const SubmanifoldFrame& frame);

}  // namespace kenmotsu
