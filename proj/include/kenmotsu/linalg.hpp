#pragma once

// Small dense linear algebra on top of Eigen: orthonormalization under an
// arbitrary positive definite form, symmetric eigen-decomposition and the
// bilinear helpers used everywhere else.

#include <Eigen/Dense>

#include <cmath>

namespace kenmotsu {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double inner(const MatrixXd& form, const VectorXd& u, const VectorXd& v) {
  return u.dot(form * v);
}

inline double norm(const MatrixXd& form, const VectorXd& v) { return std::sqrt(inner(form, v, v)); }

struct GramSchmidtOptions {
  // A residual below this norm (before normalization) is a rank deficiency.
  double rank_tolerance = 1e-12;
};

// Modified Gram-Schmidt with one reorthogonalization pass.  Columns of
// `vectors` are orthonormalized against `form`; the result has the same
// column count and spans the same space.  Throws RankDeficiencyError.
MatrixXd gram_schmidt(const MatrixXd& vectors, const MatrixXd& form,
                      const GramSchmidtOptions& options = {});

// Extend an orthonormal set `basis` by the columns of `candidates`, skipping
// any candidate whose residual relative to its own norm is below
// `relative_skip`, until `target` columns are collected.  Throws
// RankDeficiencyError if fewer than `target` columns result.
MatrixXd extend_orthonormal(const MatrixXd& basis, const MatrixXd& candidates,
                            const MatrixXd& form, Eigen::Index target,
                            double relative_skip = 1e-8);

// Max-norm deviation of the Gram matrix of `frame` from the identity.
double orthonormality_defect(const MatrixXd& frame, const MatrixXd& form);

struct SymEigen {
  VectorXd values;   // ascending
  MatrixXd vectors;  // columns, orthonormal
};

// Eigen-decomposition of a symmetric matrix.  Rejects input whose
// asymmetry exceeds 1e-10 * max(1, |m|) with NotSymmetricError.
SymEigen sym_eigen(const MatrixXd& m);

// Solve a small dense system with a column-pivoting QR.
MatrixXd solve(const MatrixXd& a, const MatrixXd& b);

}  // namespace kenmotsu
