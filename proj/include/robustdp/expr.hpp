#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustdp/common.hpp"

namespace robustdp {

// Nondecreasing concave usc utility, bounded above. The piecewise-linear kind
// doubles as the carrier for utility horizon transforms: every horizon of a
// supported utility is again expressible here.
struct Utility {
  enum class Kind { Exponential, CappedLinear, PiecewiseLinear };

  Kind kind = Kind::Exponential;
  double gamma = 1.0;  // Exponential: U(y) = -exp(-gamma*y), gamma > 0
  double cap = 0.0;    // CappedLinear: U(y) = min(y, cap)

  // PiecewiseLinear: breakpoints b_1 < ... < b_k, slopes s_0..s_k on the
  // segments (-inf,b_1], [b_1,b_2], ..., [b_k,inf). Slopes are nonincreasing,
  // nonnegative, s_k == 0 (bounded above). s_0 == +inf encodes a domain cutoff
  // at b_1: U = -inf strictly below b_1. value_at_first_break pins the level.
  std::vector<double> breaks;
  std::vector<double> slopes;
  double value_at_first_break = 0.0;

  static Utility exponential(double gamma);
  static Utility capped_linear(double cap);
  static Utility piecewise_linear(std::vector<double> breaks,
                                  std::vector<double> slopes,
                                  double value_at_first_break);

  double value(double y) const;   // may return -inf (domain cutoff)
  double upper_bound() const;     // the constant C with U <= C
  Utility horizon() const;        // directional growth rates, again a Utility
  bool is_indicator_horizon() const;  // 0 on [0,inf), -inf below
};

// One node of a certified-concave expression tree over z in R^n. Fields are
// public for the cone-extraction machinery; construction goes through the
// ConcaveExpr builders which enforce the grammar's invariants.
struct ExprNode {
  enum class Op { Affine, NegAbsAffine, NegQuadratic, Sum, Min, ScaleNonneg, Compose };

  Op op;
  int dim = 0;

  // Affine / NegAbsAffine: a·z + b  resp.  -|a·z + b|
  std::vector<double> a;
  double b = 0.0;

  // NegQuadratic: -z'Qz with Q symmetric PSD (validated, then clamped).
  Eigen::MatrixXd Q;

  std::vector<std::shared_ptr<const ExprNode>> kids;

  double scale = 1.0;  // ScaleNonneg
  Utility utility;     // Compose: utility(kids[0])
};

using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable concave usc function R^n -> R ∪ {-inf}, concave by construction.
class ConcaveExpr {
 public:
  ConcaveExpr() = default;

  static ConcaveExpr affine(std::vector<double> a, double b);
  static ConcaveExpr neg_abs_affine(std::vector<double> a, double b);
  // Validates Q (eigenvalue floor -1e-10), symmetrizes and clamps to PSD.
  static ConcaveExpr neg_quadratic(Eigen::MatrixXd Q);
  static ConcaveExpr sum(std::vector<ConcaveExpr> kids);
  static ConcaveExpr min_of(std::vector<ConcaveExpr> kids);
  static ConcaveExpr scale_nonneg(double lambda, ConcaveExpr kid);
  static ConcaveExpr compose(Utility u, ConcaveExpr kid);

  int dim() const { return root_ ? root_->dim : 0; }
  const ExprNode& root() const { return *root_; }
  ExprPtr root_ptr() const { return root_; }
  bool valid() const { return root_ != nullptr; }

  double evaluate(std::span<const double> z) const;

  // Structural horizon (recession) transform. The result is again in the
  // grammar and evaluates the directional growth rate at infinity.
  ConcaveExpr horizon() const;

  // Fixes the first n_drop coordinates to zero, returning an expression over
  // the remaining dim()-n_drop coordinates.
  ConcaveExpr substitute_prefix_zero(int n_drop) const;

  std::optional<double> upper_bound() const;
  bool bounded_above() const { return upper_bound().has_value(); }

 private:
  explicit ConcaveExpr(ExprPtr r) : root_(std::move(r)) {}
  ExprPtr root_;
};

// Kernel basis helpers for NegQuadratic horizons: rows spanning (ker Q)^perp,
// using a relative cutoff of 1e-10 * lambda_max on the eigenvalues.
Eigen::MatrixXd kernel_complement_rows(const Eigen::MatrixXd& Q);

}  // namespace robustdp
