#include "robustdp/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robustdp {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Utility

Utility Utility::exponential(double gamma) {
  require(gamma > 0.0, "exponential utility requires gamma > 0");
  Utility u;
  u.kind = Kind::Exponential;
  u.gamma = gamma;
  return u;
}

Utility Utility::capped_linear(double cap) {
  Utility u;
  u.kind = Kind::CappedLinear;
  u.cap = cap;
  return u;
}

Utility Utility::piecewise_linear(std::vector<double> breaks,
                                  std::vector<double> slopes,
                                  double value_at_first_break) {
  require(!breaks.empty(), "piecewise-linear utility needs at least one breakpoint");
  require(slopes.size() == breaks.size() + 1,
          "piecewise-linear utility needs one slope per segment (breaks+1)");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    require(breaks[i] > breaks[i - 1], "breakpoints must be strictly increasing");
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    require(slopes[i] >= 0.0, "slopes must be nonnegative (utility nondecreasing)");
    if (i > 0) {
      require(slopes[i] != kPosInf, "only the leftmost slope may be +inf");
      require(slopes[i] <= slopes[i - 1] + 1e-15, "slopes must be nonincreasing");
    }
  }
  require(slopes.back() == 0.0, "terminal slope must be 0 (utility bounded above)");
  Utility u;
  u.kind = Kind::PiecewiseLinear;
  u.breaks = std::move(breaks);
  u.slopes = std::move(slopes);
  u.value_at_first_break = value_at_first_break;
  return u;
}

double Utility::value(double y) const {
  switch (kind) {
    case Kind::Exponential:
      return -std::exp(-gamma * y);
    case Kind::CappedLinear:
      return std::min(y, cap);
    case Kind::PiecewiseLinear: {
      if (y < breaks.front()) {
        if (slopes.front() == kPosInf) return kNegInf;
        return value_at_first_break + slopes.front() * (y - breaks.front());
      }
      double v = value_at_first_break;
      double anchor = breaks.front();
      for (std::size_t i = 1; i <= breaks.size(); ++i) {
        const double seg_end = (i < breaks.size()) ? breaks[i] : kPosInf;
        if (y <= seg_end) return v + slopes[i] * (y - anchor);
        v += slopes[i] * (seg_end - anchor);
        anchor = seg_end;
      }
      return v;
    }
  }
  return kNegInf;
}

double Utility::upper_bound() const {
  switch (kind) {
    case Kind::Exponential:
      return 0.0;
    case Kind::CappedLinear:
      return cap;
    case Kind::PiecewiseLinear: {
      double v = value_at_first_break;
      for (std::size_t i = 1; i < breaks.size(); ++i)
        v += slopes[i] * (breaks[i] - breaks[i - 1]);
      return v;  // terminal slope is 0
    }
  }
  return 0.0;
}

Utility Utility::horizon() const {
  // Growth rates at infinity: 0 on rays y >= 0 (bounded above), on y < 0 the
  // leftmost slope rules (+inf slope or exponential decay kill the ray).
  Utility h;
  h.kind = Kind::PiecewiseLinear;
  h.breaks = {0.0};
  h.value_at_first_break = 0.0;
  switch (kind) {
    case Kind::Exponential:
      h.slopes = {kPosInf, 0.0};
      break;
    case Kind::CappedLinear:
      h.slopes = {1.0, 0.0};
      break;
    case Kind::PiecewiseLinear:
      h.slopes = {slopes.front(), 0.0};
      break;
  }
  return h;
}

bool Utility::is_indicator_horizon() const {
  return kind == Kind::PiecewiseLinear && breaks.size() == 1 && breaks[0] == 0.0 &&
         value_at_first_break == 0.0 && slopes.front() == kPosInf && slopes.back() == 0.0;
}

// ---------------------------------------------------------------------------
// ConcaveExpr builders

ConcaveExpr ConcaveExpr::affine(std::vector<double> a, double b) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::Affine;
  n->dim = static_cast<int>(a.size());
  n->a = std::move(a);
  n->b = b;
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::neg_abs_affine(std::vector<double> a, double b) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::NegAbsAffine;
  n->dim = static_cast<int>(a.size());
  n->a = std::move(a);
  n->b = b;
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::neg_quadratic(Eigen::MatrixXd Q) {
  require(Q.rows() == Q.cols(), "NegQuadratic requires a square matrix");
  Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  require(es.info() == Eigen::Success, "eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  require(ev.minCoeff() >= -1e-10, "NegQuadratic matrix is not positive semidefinite");
  // Clamp tiny negative eigenvalues to zero so the form is exactly PSD.
  Eigen::VectorXd clamped = ev.cwiseMax(0.0);
  Eigen::MatrixXd P = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::NegQuadratic;
  n->dim = static_cast<int>(P.rows());
  n->Q = std::move(P);
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::sum(std::vector<ConcaveExpr> kids) {
  require(!kids.empty(), "Sum of an empty list");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::Sum;
  n->dim = kids.front().dim();
  for (const auto& k : kids) {
    require(k.valid(), "Sum over an invalid expression");
    require(k.dim() == n->dim, "Sum over mismatched dimensions");
    n->kids.push_back(k.root_ptr());
  }
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::min_of(std::vector<ConcaveExpr> kids) {
  require(!kids.empty(), "Min of an empty list");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::Min;
  n->dim = kids.front().dim();
  for (const auto& k : kids) {
    require(k.valid(), "Min over an invalid expression");
    require(k.dim() == n->dim, "Min over mismatched dimensions");
    n->kids.push_back(k.root_ptr());
  }
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::scale_nonneg(double lambda, ConcaveExpr kid) {
  require(lambda >= 0.0, "ScaleNonneg requires lambda >= 0");
  require(kid.valid(), "ScaleNonneg over an invalid expression");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::ScaleNonneg;
  n->dim = kid.dim();
  n->scale = lambda;
  n->kids.push_back(kid.root_ptr());
  return ConcaveExpr(std::move(n));
}

ConcaveExpr ConcaveExpr::compose(Utility u, ConcaveExpr kid) {
  require(kid.valid(), "Compose over an invalid expression");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprNode::Op::Compose;
  n->dim = kid.dim();
  n->utility = std::move(u);
  n->kids.push_back(kid.root_ptr());
  return ConcaveExpr(std::move(n));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const ExprNode& n, std::span<const double> z) {
  switch (n.op) {
    case ExprNode::Op::Affine: {
      double v = n.b;
      for (int i = 0; i < n.dim; ++i) v += n.a[i] * z[i];
      return v;
    }
    case ExprNode::Op::NegAbsAffine: {
      double v = n.b;
      for (int i = 0; i < n.dim; ++i) v += n.a[i] * z[i];
      return -std::abs(v);
    }
    case ExprNode::Op::NegQuadratic: {
      double v = 0.0;
      for (int i = 0; i < n.dim; ++i) {
        double row = 0.0;
        for (int j = 0; j < n.dim; ++j) row += n.Q(i, j) * z[j];
        v += z[i] * row;
      }
      return -v;
    }
    case ExprNode::Op::Sum: {
      double v = 0.0;
      for (const auto& k : n.kids) {
        const double kv = eval_node(*k, z);
        if (is_neg_inf(kv)) return kNegInf;
        v += kv;
      }
      return v;
    }
    case ExprNode::Op::Min: {
      double v = kPosInf;
      for (const auto& k : n.kids) v = std::min(v, eval_node(*k, z));
      return v;
    }
    case ExprNode::Op::ScaleNonneg: {
      if (n.scale == 0.0) return 0.0;
      const double kv = eval_node(*n.kids.front(), z);
      return is_neg_inf(kv) ? kNegInf : n.scale * kv;
    }
    case ExprNode::Op::Compose: {
      const double kv = eval_node(*n.kids.front(), z);
      return is_neg_inf(kv) ? kNegInf : n.utility.value(kv);
    }
  }
  return kNegInf;
}

}  // namespace

double ConcaveExpr::evaluate(std::span<const double> z) const {
  require(valid(), "evaluating an empty expression");
  require(static_cast<int>(z.size()) == dim(),
          "dimension mismatch: expression over R^" + std::to_string(dim()) +
              " evaluated at a vector of length " + std::to_string(z.size()));
  return eval_node(*root_, z);
}

// ---------------------------------------------------------------------------
// Horizon transform

Eigen::MatrixXd kernel_complement_rows(const Eigen::MatrixXd& Q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = 1e-10 * std::max(0.0, ev.maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff && ev(i) > 0.0) keep.push_back(i);
  Eigen::MatrixXd rows(static_cast<int>(keep.size()), Q.rows());
  for (std::size_t r = 0; r < keep.size(); ++r)
    rows.row(static_cast<int>(r)) = es.eigenvectors().col(keep[r]).transpose();
  return rows;
}

namespace {

ConcaveExpr horizon_node(const ExprNode& n) {
  switch (n.op) {
    case ExprNode::Op::Affine:
      return ConcaveExpr::affine(n.a, 0.0);
    case ExprNode::Op::NegAbsAffine:
      return ConcaveExpr::neg_abs_affine(n.a, 0.0);
    case ExprNode::Op::NegQuadratic: {
      // 0 on ker Q, -inf off it: guard the kernel equations through an
      // indicator utility over a min of paired affine constraints.
      const Eigen::MatrixXd rows = kernel_complement_rows(n.Q);
      if (rows.rows() == 0)
        return ConcaveExpr::affine(std::vector<double>(n.dim, 0.0), 0.0);
      std::vector<ConcaveExpr> parts;
      for (int r = 0; r < rows.rows(); ++r) {
        std::vector<double> pos(n.dim), neg(n.dim);
        for (int j = 0; j < n.dim; ++j) {
          pos[j] = rows(r, j);
          neg[j] = -rows(r, j);
        }
        parts.push_back(ConcaveExpr::affine(std::move(pos), 0.0));
        parts.push_back(ConcaveExpr::affine(std::move(neg), 0.0));
      }
      Utility ind = Utility::piecewise_linear({0.0}, {kPosInf, 0.0}, 0.0);
      return ConcaveExpr::compose(ind, ConcaveExpr::min_of(std::move(parts)));
    }
    case ExprNode::Op::Sum: {
      std::vector<ConcaveExpr> kids;
      for (const auto& k : n.kids) kids.push_back(horizon_node(*k));
      return ConcaveExpr::sum(std::move(kids));
    }
    case ExprNode::Op::Min: {
      std::vector<ConcaveExpr> kids;
      for (const auto& k : n.kids) kids.push_back(horizon_node(*k));
      return ConcaveExpr::min_of(std::move(kids));
    }
    case ExprNode::Op::ScaleNonneg:
      return ConcaveExpr::scale_nonneg(n.scale, horizon_node(*n.kids.front()));
    case ExprNode::Op::Compose:
      return ConcaveExpr::compose(n.utility.horizon(), horizon_node(*n.kids.front()));
  }
  throw std::logic_error("unknown expression node");
}

}  // namespace

ConcaveExpr ConcaveExpr::horizon() const {
  require(valid(), "horizon of an empty expression");
  return horizon_node(*root_);
}

// ---------------------------------------------------------------------------
// Prefix substitution

namespace {

ConcaveExpr substitute_node(const ExprNode& n, int n_drop) {
  const int m = n.dim - n_drop;
  switch (n.op) {
    case ExprNode::Op::Affine:
      return ConcaveExpr::affine(
          std::vector<double>(n.a.begin() + n_drop, n.a.end()), n.b);
    case ExprNode::Op::NegAbsAffine:
      return ConcaveExpr::neg_abs_affine(
          std::vector<double>(n.a.begin() + n_drop, n.a.end()), n.b);
    case ExprNode::Op::NegQuadratic:
      return ConcaveExpr::neg_quadratic(n.Q.bottomRightCorner(m, m));
    case ExprNode::Op::Sum: {
      std::vector<ConcaveExpr> kids;
      for (const auto& k : n.kids) kids.push_back(substitute_node(*k, n_drop));
      return ConcaveExpr::sum(std::move(kids));
    }
    case ExprNode::Op::Min: {
      std::vector<ConcaveExpr> kids;
      for (const auto& k : n.kids) kids.push_back(substitute_node(*k, n_drop));
      return ConcaveExpr::min_of(std::move(kids));
    }
    case ExprNode::Op::ScaleNonneg:
      return ConcaveExpr::scale_nonneg(n.scale, substitute_node(*n.kids.front(), n_drop));
    case ExprNode::Op::Compose:
      return ConcaveExpr::compose(n.utility, substitute_node(*n.kids.front(), n_drop));
  }
  throw std::logic_error("unknown expression node");
}

}  // namespace

ConcaveExpr ConcaveExpr::substitute_prefix_zero(int n_drop) const {
  require(valid(), "substituting into an empty expression");
  require(n_drop >= 0 && n_drop <= dim(), "substitute_prefix_zero: bad prefix length");
  if (n_drop == 0) return *this;
  return substitute_node(*root_, n_drop);
}

// ---------------------------------------------------------------------------
// Upper bound

namespace {

std::optional<double> bound_node(const ExprNode& n) {
  switch (n.op) {
    case ExprNode::Op::Affine: {
      for (double c : n.a)
        if (c != 0.0) return std::nullopt;
      return n.b;
    }
    case ExprNode::Op::NegAbsAffine:
      return 0.0;
    case ExprNode::Op::NegQuadratic:
      return 0.0;
    case ExprNode::Op::Sum: {
      double total = 0.0;
      for (const auto& k : n.kids) {
        auto b = bound_node(*k);
        if (!b) return std::nullopt;
        total += *b;
      }
      return total;
    }
    case ExprNode::Op::Min: {
      std::optional<double> best;
      for (const auto& k : n.kids) {
        auto b = bound_node(*k);
        if (b && (!best || *b < *best)) best = b;
      }
      return best;
    }
    case ExprNode::Op::ScaleNonneg: {
      if (n.scale == 0.0) return 0.0;
      auto b = bound_node(*n.kids.front());
      if (!b) return std::nullopt;
      return n.scale * *b;
    }
    case ExprNode::Op::Compose:
      return n.utility.upper_bound();
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> ConcaveExpr::upper_bound() const {
  if (!valid()) return std::nullopt;
  return bound_node(*root_);
}

}  // namespace robustdp
