#include "kenmotsu/linalg.hpp"

#include "kenmotsu/errors.hpp"

#include <cmath>
#include <string>

namespace kenmotsu {

namespace {

// Remove the components of v along the first `count` columns of q, twice.
void orthogonalize(VectorXd& v, const MatrixXd& q, Eigen::Index count, const MatrixXd& form) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < count; ++j) {
      v -= inner(form, q.col(j), v) * q.col(j);
    }
  }
}

}  // namespace

MatrixXd gram_schmidt(const MatrixXd& vectors, const MatrixXd& form,
                      const GramSchmidtOptions& options) {
  if (form.rows() != vectors.rows() || form.cols() != vectors.rows()) {
    throw DimensionError("gram_schmidt: form is " + std::to_string(form.rows()) + "x" +
                         std::to_string(form.cols()) + " but vectors have " +
                         std::to_string(vectors.rows()) + " rows");
  }
  MatrixXd q(vectors.rows(), vectors.cols());
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    VectorXd v = vectors.col(j);
    orthogonalize(v, q, j, form);
    const double n = norm(form, v);
    if (!(n >= options.rank_tolerance)) {
      throw RankDeficiencyError("gram_schmidt: residual norm " + std::to_string(n) +
                                " of vector " + std::to_string(j) + " below tolerance");
    }
    q.col(j) = v / n;
  }
  return q;
}

MatrixXd extend_orthonormal(const MatrixXd& basis, const MatrixXd& candidates,
                            const MatrixXd& form, Eigen::Index target, double relative_skip) {
  MatrixXd q(candidates.rows(), target);
  Eigen::Index count = 0;
  for (; count < basis.cols() && count < target; ++count) q.col(count) = basis.col(count);
  for (Eigen::Index j = 0; j < candidates.cols() && count < target; ++j) {
    VectorXd v = candidates.col(j);
    const double original = norm(form, v);
    if (original == 0.0) continue;
    orthogonalize(v, q, count, form);
    const double n = norm(form, v);
    if (n <= relative_skip * original || n < 1e-12) continue;
    q.col(count++) = v / n;
  }
  if (count < target) {
    throw RankDeficiencyError("extend_orthonormal: collected " + std::to_string(count) +
                              " of " + std::to_string(target) + " vectors");
  }
  return q;
}

double orthonormality_defect(const MatrixXd& frame, const MatrixXd& form) {
  if (frame.cols() == 0) return 0.0;
  const MatrixXd gram = frame.transpose() * form * frame;
  return (gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

SymEigen sym_eigen(const MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("sym_eigen: matrix is not square");
  if (m.size() == 0) return {VectorXd(), MatrixXd()};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw NotSymmetricError("sym_eigen: asymmetry " + std::to_string(asym));
  }
  const MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

MatrixXd solve(const MatrixXd& a, const MatrixXd& b) {
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace kenmotsu
