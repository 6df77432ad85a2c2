#pragma once

// Warped-product structure on top of a bi-slant decomposition: metric block
// fit, the warped connection property, the shape-operator identities of the
// base/fiber split, the characterization condition and the inequality for
// ‖h‖² with its equality diagnostics.

#include "kenmotsu/slant.hpp"

#include <optional>
#include <string_view>

namespace kenmotsu {

struct WarpedPartition {
  std::vector<Eigen::Index> base;
  std::vector<Eigen::Index> fiber;
};

// Throws ScenarioError("partition", ...) unless base and fiber split 0..n-1.
void validate_partition(const WarpedPartition& partition, Eigen::Index n);

struct WarpedFit {
  WarpedPartition partition;
  // Max |g(d_base, d_fiber)| / sqrt(g_bb g_ff).
  double off_diagonal = 0.0;
  std::size_t off_diagonal_worst = 0;
  // Max relative change of the base block when the fiber coordinates are
  // moved to those of the first sample.
  double base_dependence = 0.0;
  std::size_t base_dependence_worst = 0;
  // Max relative deviation of the fiber block from c(p)/c(p') times the
  // block at p' = p with base coordinates moved to those of the first sample.
  double conformal = 0.0;
  std::size_t conformal_worst = 0;
  // Extracted f^2 per sample: tr(fiber block at p) / tr(fiber block at p'),
  // scaled so that f(p0)^2 = tr(fiber block at p0) / dim fiber.
  std::vector<double> f_squared;
  bool trivial = false;
  // With a candidate f: kappa = f_squared(p0) / f(p0)^2 and
  // max |f_squared - kappa f^2| / f_squared.
  std::optional<double> candidate_scale;
  std::optional<double> candidate_deviation;
  std::size_t candidate_worst = 0;
};

WarpedFit fit_warped_metric(const Immersion& immersion, const KenmotsuStructure& structure,
                            const WarpedPartition& partition,
                            const std::vector<VectorXd>& samples,
                            const CompiledExpr* candidate_f = nullptr);

// Everything needed to evaluate the warped identities at sample points.
struct WarpedModel {
  const Immersion* immersion = nullptr;
  const KenmotsuStructure* structure = nullptr;
  Distribution d1;
  Distribution d2;
  FieldExpr xi_field;
  WarpedPartition partition;
  std::optional<CompiledExpr> f;
  std::uint64_t seed = 0;
  BiSlantMode mode = BiSlantMode::forced;
  double theta_step = 1e-5;
};

class WarpedPoint {
 public:
  WarpedPoint(const WarpedModel& model, const VectorXd& p);

  const WarpedModel& model() const { return *model_; }
  const SubmanifoldFrame& frame() const { return frame_; }
  const BiSlantDecomposition& bislant() const { return bislant_; }

  // X ln f and X(theta_2) for an ambient tangent vector X.
  double ln_f(const VectorXd& x) const { return dlnf_.dot(frame_.to_coords(x)); }
  double theta2(const VectorXd& x) const { return dtheta2_.dot(frame_.to_coords(x)); }
  // Gradient of ln f on M (ambient components).
  VectorXd ln_f_gradient() const;

  // Coordinate differentials: d ln f exactly, d theta_2 by central differences.
  const VectorXd& ln_f_differential() const { return dlnf_; }
  const VectorXd& theta2_differential() const { return dtheta2_; }

 private:
  const WarpedModel* model_;
  SubmanifoldFrame frame_;
  BiSlantDecomposition bislant_;
  VectorXd dlnf_;
  VectorXd dtheta2_;
};

// Oracle slant angle of D2 (spectral) at a parameter point.
double theta2_at(const WarpedModel& model, const VectorXd& p);

struct WarpConnectionResidual {
  std::string base;
  std::string fiber;
  double residual = 0.0;
};

// ‖tan(∇̄_X U) - (X ln f) U‖ for the coordinate lifts X of base parameters
// and U of fiber parameters.
std::vector<WarpConnectionResidual> warp_connection_residuals(const WarpedPoint& w);

// Arguments of a single identity evaluation.  X, Y lie in D1 + xi; Z, W in D2.
struct IdentityArgs {
  VectorXd X;
  VectorXd Y;
  VectorXd Z;
  VectorXd W;
};

// Both sides of one identity, selected by its eq_ref label (see
// warped_identity_tags()).  The "/subst" labels compare the signed residual
// of the "4.14" identity at P1 X (or at P2 W) with the signed residual of the
// "4.15" (or "4.16") identity at X, W.  "4.19/derived" is "4.19" with the
// sign of its g(∇̄_Z X, P2 W) term reversed.  Throws std::invalid_argument for
// unknown labels.
LemmaResidual warped_identity(const WarpedPoint& w, std::string_view eq_ref,
                              const IdentityArgs& args);

// All tags handled by warped_identity, in report order.
const std::vector<std::string>& warped_identity_tags();

// warped_identity over orthonormal bases of D1 + xi and D2.
std::vector<LemmaResidual> warped_identity_residuals(const WarpedPoint& w,
                                                     const std::vector<std::string>& tags);

// (X ln f) - eta(X) + tan(theta_2) X(theta_2) for each basis vector X of D1 + xi.
std::vector<double> warping_gradient_condition(const WarpedPoint& w);

struct MixedTotallyGeodesic {
  double mass = 0.0;  // max ‖h(X, Z)‖ over orthonormal X in D1 + xi, Z in D2
  bool hypothesis = false;
  double theta2 = 0.0;
  double xi_ln_f = 0.0;
  double branch_ii = 0.0;  // max |(X ln f) - eta(X)|
  bool branch_i_holds = false;
  bool branch_ii_holds = false;
  bool corollary_holds = false;
};

inline constexpr double kMixedGeodesicTolerance = 1e-8;

MixedTotallyGeodesic mixed_tg_diagnostic(const WarpedPoint& w);

struct Characterization {
  double mu_along_fiber = 0.0;  // max |W mu| over orthonormal W in D2
  double condition = 0.0;       // max vector residual of the shape-operator condition
  double leaf_umbilicity = 0.0; // max ‖h2(Z, W) + grad(mu) g(Z, W)‖
};

// Throws HypothesisError if mu varies along D2 by more than 1e-8.
Characterization characterization_check(const WarpedPoint& w, const CompiledExpr& mu);

struct AdaptedFrame {
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  MatrixXd base;   // e_1..e_p, sec P1 e_1.., xi
  MatrixXd fiber;  // e*_1..e*_q, sec P2 e*_1..
  MatrixXd qd1;    // csc Q e_r, csc sec Q P1 e_r
  MatrixXd qd2;
  MatrixXd nu;
  double orthonormality = 0.0;  // of the whole (2m+1)-frame

  MatrixXd tangent() const;
  MatrixXd normal() const;
};

// Throws HypothesisError for odd distribution dimensions or a non-proper
// decomposition (an angle within 1e-4 of 0 or pi/2).
AdaptedFrame build_adapted_frame(const WarpedPoint& w);

struct Inequality61 {
  double lhs = 0.0;  // ‖h‖² (direct)
  double rhs = 0.0;
  double slack = 0.0;
  bool asserted = false;  // gated on the mixed totally geodesic hypothesis
  // Block sums in the adapted frame: base/base, mixed (with factor 2), fiber/fiber,
  // and the base/base and fiber/fiber sums split over QD1, QD2 and nu.
  double base_base = 0.0;
  double mixed = 0.0;
  double fiber_fiber = 0.0;
  double blocks[2][3] = {{0, 0, 0}, {0, 0, 0}};
  double resum_62 = 0.0;  // relative
  double resum_63 = 0.0;  // relative
  std::vector<LemmaResidual> equality;  // equality-case diagnostics
};

Inequality61 inequality_61(const WarpedPoint& w, const AdaptedFrame& frame,
                           const MixedTotallyGeodesic& mixed);

}  // namespace kenmotsu
