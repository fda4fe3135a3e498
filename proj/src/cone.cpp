#include "robustdp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "robustdp/simplex.hpp"

namespace robustdp {

namespace {

constexpr double kMemberTol = 1e-9;
constexpr int kSignPatternCap = 12;     // NegAbs atoms per branch
constexpr int kBranchCap = 4096;        // Min branches after distribution
constexpr int kRowCap = 1 << 15;

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Halfspace {
  Eigen::VectorXd a;
  double c = 0.0;  // a·z + c >= 0
};

// One branch of a piecewise-linear normal form:
//   value = lin·z + cst + sum_j coef_j * (-|a_j·z + b_j|),  guards hold
//   value = -inf otherwise.
// The function is the min over branches; guards act conjunctively.
struct PlBranch {
  Eigen::VectorXd lin;
  double cst = 0.0;
  std::vector<std::tuple<double, Eigen::VectorXd, double>> negabs;
  std::vector<Halfspace> guards;
};

std::vector<PlBranch> normalize_pl(const ExprNode& n, double shift);
std::vector<Halfspace> domain_constraints(const ExprNode& n);

std::vector<Halfspace> expand_branch(const PlBranch& br) {
  const int k = static_cast<int>(br.negabs.size());
  if (k > kSignPatternCap)
    throw ExtractionError("sign-pattern cap exceeded: " + std::to_string(k) +
                          " absolute-value atoms in one branch");
  std::vector<Halfspace> out = br.guards;
  for (int mask = 0; mask < (1 << k); ++mask) {
    Halfspace hs;
    hs.a = br.lin;
    hs.c = br.cst;
    for (int j = 0; j < k; ++j) {
      const double sign = (mask >> j) & 1 ? 1.0 : -1.0;
      const auto& [coef, a, b] = br.negabs[j];
      hs.a -= sign * coef * a;
      hs.c -= sign * coef * b;
    }
    out.push_back(std::move(hs));
  }
  if (out.size() > kRowCap) throw ExtractionError("half-space cap exceeded");
  return out;
}

// Constraints equivalent to { z : expr(z) >= shift } for piecewise-linear
// expressions (exact; absolute values expand over sign patterns).
std::vector<Halfspace> constraints_at_least(const ExprNode& n, double shift) {
  std::vector<Halfspace> out;
  for (const PlBranch& br : normalize_pl(n, shift)) {
    auto rows = expand_branch(br);
    out.insert(out.end(), rows.begin(), rows.end());
    if (out.size() > kRowCap) throw ExtractionError("half-space cap exceeded");
  }
  return out;
}

std::vector<PlBranch> combine_sum(const std::vector<PlBranch>& A,
                                  const std::vector<PlBranch>& B) {
  if (A.size() * B.size() > kBranchCap)
    throw ExtractionError("branch cap exceeded while distributing a sum over minima");
  std::vector<PlBranch> out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A)
    for (const auto& b : B) {
      PlBranch c;
      c.lin = a.lin + b.lin;
      c.cst = a.cst + b.cst;
      c.negabs = a.negabs;
      c.negabs.insert(c.negabs.end(), b.negabs.begin(), b.negabs.end());
      c.guards = a.guards;
      c.guards.insert(c.guards.end(), b.guards.begin(), b.guards.end());
      out.push_back(std::move(c));
    }
  return out;
}

// Normal form of expr - shift. NegQuadratic and curved utilities have no
// piecewise-linear form and raise ExtractionError; callers fall back to the
// membership oracle.
std::vector<PlBranch> normalize_pl(const ExprNode& n, double shift) {
  switch (n.op) {
    case ExprNode::Op::Affine: {
      PlBranch br;
      br.lin = Eigen::Map<const Eigen::VectorXd>(n.a.data(), n.dim);
      br.cst = n.b - shift;
      return {std::move(br)};
    }
    case ExprNode::Op::NegAbsAffine: {
      PlBranch br;
      br.lin = Eigen::VectorXd::Zero(n.dim);
      br.cst = -shift;
      br.negabs.emplace_back(1.0, Eigen::Map<const Eigen::VectorXd>(n.a.data(), n.dim), n.b);
      return {std::move(br)};
    }
    case ExprNode::Op::NegQuadratic:
      throw ExtractionError("quadratic atom has no piecewise-linear form");
    case ExprNode::Op::Sum: {
      std::vector<PlBranch> acc = normalize_pl(*n.kids.front(), shift);
      for (std::size_t i = 1; i < n.kids.size(); ++i)
        acc = combine_sum(acc, normalize_pl(*n.kids[i], 0.0));
      return acc;
    }
    case ExprNode::Op::Min: {
      std::vector<PlBranch> acc;
      for (const auto& k : n.kids) {
        auto part = normalize_pl(*k, shift);
        acc.insert(acc.end(), part.begin(), part.end());
        if (acc.size() > kBranchCap) throw ExtractionError("branch cap exceeded");
      }
      return acc;
    }
    case ExprNode::Op::ScaleNonneg: {
      if (n.scale == 0.0) {
        PlBranch br;
        br.lin = Eigen::VectorXd::Zero(n.dim);
        br.cst = -shift;
        return {std::move(br)};
      }
      auto kids = normalize_pl(*n.kids.front(), 0.0);
      for (auto& br : kids) {
        br.lin *= n.scale;
        br.cst = br.cst * n.scale - shift;
        for (auto& [coef, a, b] : br.negabs) coef *= n.scale;
      }
      return kids;
    }
    case ExprNode::Op::Compose: {
      const Utility& u = n.utility;
      if (u.kind == Utility::Kind::Exponential)
        throw ExtractionError("exponential composition has no piecewise-linear form");
      // Concave piecewise-linear utility: min over segment lines, plus a
      // domain guard when the leftmost slope is +inf.
      std::vector<double> breaks;
      std::vector<double> slopes;
      double v1;
      if (u.kind == Utility::Kind::CappedLinear) {
        breaks = {u.cap};
        slopes = {1.0, 0.0};
        v1 = u.cap;
      } else {
        breaks = u.breaks;
        slopes = u.slopes;
        v1 = u.value_at_first_break;
      }
      const auto inner = normalize_pl(*n.kids.front(), 0.0);
      std::vector<Halfspace> cutoff;
      if (slopes.front() == kPosInf)
        cutoff = constraints_at_least(*n.kids.front(), breaks.front());
      auto inner_domain = domain_constraints(*n.kids.front());
      cutoff.insert(cutoff.end(), inner_domain.begin(), inner_domain.end());

      // Segment values at the breakpoints.
      std::vector<double> vals(breaks.size());
      vals[0] = v1;
      for (std::size_t i = 1; i < breaks.size(); ++i)
        vals[i] = vals[i - 1] + slopes[i] * (breaks[i] - breaks[i - 1]);

      std::vector<PlBranch> out;
      for (std::size_t seg = 0; seg < slopes.size(); ++seg) {
        const double s = slopes[seg];
        if (s == kPosInf) continue;  // handled by the cutoff guard
        // Line through (breaks[anchor], vals[anchor]) with slope s.
        const std::size_t anchor = seg == 0 ? 0 : seg - 1;
        const double q = vals[anchor] - s * breaks[anchor];
        if (s == 0.0) {
          PlBranch br;
          br.lin = Eigen::VectorXd::Zero(n.dim);
          br.cst = q - shift;
          br.guards = cutoff;
          out.push_back(std::move(br));
          continue;
        }
        for (const auto& ib : inner) {
          PlBranch br;
          br.lin = s * ib.lin;
          br.cst = s * ib.cst + q - shift;
          br.negabs = ib.negabs;
          for (auto& [coef, a, b] : br.negabs) coef *= s;
          br.guards = ib.guards;
          br.guards.insert(br.guards.end(), cutoff.begin(), cutoff.end());
          out.push_back(std::move(br));
        }
        if (out.size() > kBranchCap) throw ExtractionError("branch cap exceeded");
      }
      return out;
    }
  }
  throw std::logic_error("unknown expression node");
}

// Half-spaces describing { z : expr(z) > -inf }.
std::vector<Halfspace> domain_constraints(const ExprNode& n) {
  switch (n.op) {
    case ExprNode::Op::Affine:
    case ExprNode::Op::NegAbsAffine:
    case ExprNode::Op::NegQuadratic:
      return {};
    case ExprNode::Op::Sum:
    case ExprNode::Op::Min: {
      std::vector<Halfspace> out;
      for (const auto& k : n.kids) {
        auto part = domain_constraints(*k);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case ExprNode::Op::ScaleNonneg:
      return n.scale == 0.0 ? std::vector<Halfspace>{} : domain_constraints(*n.kids.front());
    case ExprNode::Op::Compose: {
      auto out = domain_constraints(*n.kids.front());
      const Utility& u = n.utility;
      if (u.kind == Utility::Kind::PiecewiseLinear && u.slopes.front() == kPosInf) {
        auto cut = constraints_at_least(*n.kids.front(), u.breaks.front());
        out.insert(out.end(), cut.begin(), cut.end());
      }
      return out;
    }
  }
  throw std::logic_error("unknown expression node");
}

Eigen::MatrixXd stack_homogeneous(const std::vector<Halfspace>& rows, int dim) {
  Eigen::MatrixXd A(static_cast<int>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].c) > 1e-9)
      throw ExtractionError("non-homogeneous constraint in a horizon extraction");
    A.row(static_cast<int>(i)) = rows[i].a.transpose();
  }
  return A;
}

Eigen::MatrixXd dedup_rows(const Eigen::MatrixXd& A) {
  std::vector<Eigen::VectorXd> kept;
  for (int i = 0; i < A.rows(); ++i) {
    Eigen::VectorXd r = A.row(i).transpose();
    const double norm = r.norm();
    if (norm < 1e-14) continue;
    r /= norm;
    bool dup = false;
    for (const auto& k : kept)
      if ((k - r).lpNorm<Eigen::Infinity>() < 1e-12) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(r));
  }
  Eigen::MatrixXd out(static_cast<int>(kept.size()), A.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) out.row(static_cast<int>(i)) = kept[i];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RestrictedHorizon / Cone

double RestrictedHorizon::evaluate(std::span<const double> h) const {
  if (expr) return expr->evaluate(h);
  return nonneg(h) ? 0.0 : kNegInf;
}

bool RestrictedHorizon::nonneg(std::span<const double> h) const {
  const double scale = [&] {
    double s = 1.0;
    for (double v : h) s = std::max(s, std::abs(v));
    return s;
  }();
  if (expr) return expr->evaluate(h) >= -kMemberTol * scale;
  const auto& sys = *subtree;
  if (sys.Ah.rows() == 0) return true;
  Eigen::VectorXd rhs = sys.Ah * Eigen::Map<const Eigen::VectorXd>(h.data(), h.size());
  rhs.array() += kMemberTol * scale;
  return lp_feasible_point(-sys.Ap, rhs).has_value();
}

bool Cone::member_via_horizons(std::span<const double> h) const {
  for (const auto& rh : horizons)
    if (!rh.nonneg(h)) return false;
  return true;
}

bool Cone::member(std::span<const double> h) const {
  if (rows) {
    const double scale = [&] {
      double s = 1.0;
      for (double v : h) s = std::max(s, std::abs(v));
      return s;
    }();
    const Eigen::VectorXd v = *rows * Eigen::Map<const Eigen::VectorXd>(h.data(), h.size());
    return v.minCoeff() >= -kMemberTol * scale;
  }
  return member_via_horizons(h);
}

// ---------------------------------------------------------------------------
// Restricted horizons per node

std::vector<RestrictedHorizon> restricted_child_horizons(
    const ScenarioTree& tree, const std::vector<ConcaveExpr>& leaf_horizons, int node,
    int d) {
  const int t = tree.node(node).depth;
  const int T = tree.depth();

  // Leaf index lookup aligned with tree.leaves().
  std::map<int, int> leaf_slot;
  for (std::size_t i = 0; i < tree.leaves().size(); ++i)
    leaf_slot[tree.leaves()[i]] = static_cast<int>(i);

  std::vector<RestrictedHorizon> out;
  for (int pos : union_support(tree, node)) {
    const int child = tree.node(node).children[pos];
    RestrictedHorizon rh;
    if (tree.is_terminal(child)) {
      rh.expr = leaf_horizons[leaf_slot.at(child)].substitute_prefix_zero(d * t);
    } else {
      // Collect supported leaves of the child's subtree along with the
      // interior nodes carrying continuation decisions.
      std::vector<int> stack{child};
      std::vector<int> sub_leaves;
      std::map<int, int> plan_offset;  // interior node -> column block
      int plan_dims = 0;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (tree.is_terminal(u)) {
          sub_leaves.push_back(u);
          continue;
        }
        if (!plan_offset.count(u)) {
          plan_offset[u] = plan_dims;
          plan_dims += d;
        }
        for (int p : union_support(tree, u)) stack.push_back(tree.node(u).children[p]);
      }

      std::vector<Halfspace> rows;
      for (int leaf : sub_leaves) {
        const ConcaveExpr restricted =
            leaf_horizons[leaf_slot.at(leaf)].substitute_prefix_zero(d * t);
        auto cs = constraints_at_least(restricted.root(), 0.0);
        rows.insert(rows.end(), cs.begin(), cs.end());
        if (rows.size() > kRowCap)
          throw CapExceeded("horizon constraint system exceeds the row cap at node '" +
                            tree.node(node).id + "'");
      }
      // Scatter reduced coordinates (block 0 = query h, later blocks = the
      // path node's plan columns) into (Ah | Ap).
      RestrictedHorizon::Subtree sys;
      sys.Ah = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), d);
      sys.Ap = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), plan_dims);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (std::abs(rows[r].c) > 1e-9)
          throw SolveError("internal: non-homogeneous horizon constraint");
      }
      int row_at = 0;
      for (int leaf : sub_leaves) {
        const ConcaveExpr restricted =
            leaf_horizons[leaf_slot.at(leaf)].substitute_prefix_zero(d * t);
        const auto cs = constraints_at_least(restricted.root(), 0.0);
        const std::vector<int> path = tree.path_to(leaf);
        for (const auto& hs : cs) {
          for (int s_rel = 0; s_rel < T - t; ++s_rel) {
            const int depth = t + s_rel;
            for (int j = 0; j < d; ++j) {
              const double coef = hs.a(s_rel * d + j);
              if (coef == 0.0) continue;
              if (s_rel == 0)
                sys.Ah(row_at, j) += coef;
              else
                sys.Ap(row_at, plan_offset.at(path[depth]) + j) += coef;
            }
          }
          ++row_at;
        }
      }
      rh.subtree = std::move(sys);
    }
    out.push_back(std::move(rh));
  }
  return out;
}

// ---------------------------------------------------------------------------
// local_cone / is_linear

Cone local_cone(int d, std::vector<RestrictedHorizon> child_horizons) {
  Cone cone;
  cone.dim = d;
  bool all_leaf = true;
  for (const auto& rh : child_horizons)
    if (!rh.expr) all_leaf = false;

  if (all_leaf) {
    try {
      std::vector<Halfspace> rows;
      for (const auto& rh : child_horizons) {
        auto cs = constraints_at_least(rh.expr->root(), 0.0);
        rows.insert(rows.end(), cs.begin(), cs.end());
        if (rows.size() > kRowCap) throw ExtractionError("half-space cap exceeded");
      }
      cone.rows = dedup_rows(stack_homogeneous(rows, d));
    } catch (const ExtractionError&) {
      cone.extraction_fell_back = true;  // membership oracle remains exact
    }
  }
  cone.horizons = std::move(child_horizons);
  return cone;
}

std::vector<std::vector<double>> sphere_directions(int d, int count) {
  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  if (d == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * M_PI * k / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  if (d == 3) {
    // Fibonacci spiral on the sphere.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double y = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      const double th = golden * k;
      dirs.push_back({r * std::cos(th), y, r * std::sin(th)});
    }
    return dirs;
  }
  auto rng = rng_for(7777);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < count; ++k) {
    std::vector<double> v(d);
    double norm2 = 0.0;
    for (double& vi : v) {
      vi = gauss(rng);
      norm2 += vi * vi;
    }
    const double norm = std::sqrt(std::max(norm2, 1e-300));
    for (double& vi : v) vi /= norm;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

LinearityResult is_linear(const Cone& cone) {
  LinearityResult res;
  if (cone.polyhedral()) {
    const Eigen::MatrixXd R = dedup_rows(*cone.rows);
    const int d = cone.dim;
    if (R.rows() == 0) {
      res.linear = true;  // whole space
      return res;
    }
    // The cone {h : Rh >= 0} is a subspace iff no row can be made strictly
    // positive over it; each row gives one small LP over the unit box.
    Eigen::MatrixXd A(R.rows() + 2 * d, d);
    Eigen::VectorXd b(R.rows() + 2 * d);
    A.topRows(R.rows()) = -R;
    b.head(R.rows()).setZero();
    A.middleRows(R.rows(), d) = Eigen::MatrixXd::Identity(d, d);
    A.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
    b.tail(2 * d).setOnes();
    for (int i = 0; i < R.rows(); ++i) {
      const LpResult lp = lp_max(R.row(i).transpose(), A, b);
      if (lp.status == LpStatus::PivotLimit)
        throw SolveError("simplex pivot guard tripped in the linearity test");
      if (lp.status != LpStatus::Optimal)
        throw SolveError("linearity LP unexpectedly " +
                         std::string(lp.status == LpStatus::Infeasible ? "infeasible"
                                                                       : "unbounded"));
      if (lp.objective > 1e-9) {
        res.linear = false;
        res.certificate = lp.x;
        return res;
      }
    }
    res.linear = true;
    return res;
  }

  if (cone.dim == 1) {
    const bool plus = cone.member(std::vector<double>{1.0});
    const bool minus = cone.member(std::vector<double>{-1.0});
    res.linear = plus == minus;
    if (!res.linear) res.certificate = std::vector<double>{plus ? 1.0 : -1.0};
    return res;
  }

  // Sampled verdict for non-polyhedral cones in d >= 2: sound certificates,
  // non-exact "linear" conclusions.
  for (const auto& u : sphere_directions(cone.dim, 10000)) {
    if (cone.member(u)) {
      std::vector<double> neg(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) neg[i] = -u[i];
      if (!cone.member(neg)) {
        res.linear = false;
        res.exact = true;
        res.certificate = u;
        return res;
      }
    }
  }
  res.linear = true;
  res.exact = false;
  return res;
}

Eigen::MatrixXd lineality_basis(const Cone& cone, const LinearityResult& lin) {
  const int d = cone.dim;
  if (!lin.linear) throw std::invalid_argument("lineality basis of a nonlinear cone");
  if (cone.polyhedral()) {
    const Eigen::MatrixXd R = dedup_rows(*cone.rows);
    if (R.rows() == 0) return Eigen::MatrixXd::Identity(d, d);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd ker = lu.kernel();
    if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd(d, 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ker);
    Eigen::MatrixXd q = qr.householderQ();
    return q.leftCols(ker.cols());
  }
  if (d == 1) {
    if (cone.member(std::vector<double>{1.0}) && cone.member(std::vector<double>{-1.0}))
      return Eigen::MatrixXd::Identity(1, 1);
    return Eigen::MatrixXd(1, 0);
  }
  // Collect sampled two-sided member directions and orthonormalize.
  std::vector<Eigen::VectorXd> members;
  for (const auto& u : sphere_directions(d, 2000)) {
    std::vector<double> neg(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) neg[i] = -u[i];
    if (cone.member(u) && cone.member(neg))
      members.push_back(Eigen::Map<const Eigen::VectorXd>(u.data(), d));
  }
  if (members.empty()) return Eigen::MatrixXd(d, 0);
  Eigen::MatrixXd M(d, static_cast<int>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) M.col(static_cast<int>(i)) = members[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * svd.singularValues()(0)) ++rank;
  Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
  // Keep only directions that verify as two-sided members.
  std::vector<int> ok;
  for (int i = 0; i < basis.cols(); ++i) {
    std::vector<double> v(basis.col(i).data(), basis.col(i).data() + d);
    std::vector<double> nv(d);
    for (int j = 0; j < d; ++j) nv[j] = -v[j];
    if (cone.member(v) && cone.member(nv)) ok.push_back(i);
  }
  Eigen::MatrixXd out(d, static_cast<int>(ok.size()));
  for (std::size_t i = 0; i < ok.size(); ++i) out.col(static_cast<int>(i)) = basis.col(ok[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Global check

NAContext analyze_na(const ScenarioTree& tree, const ModelSpec& model, int jobs) {
  std::vector<ConcaveExpr> horizons;
  for (const ConcaveExpr& e : compile_all_leaves(model, tree)) horizons.push_back(e.horizon());

  const auto& nodes = tree.non_terminal();
  std::vector<NodeCheck> checks(nodes.size());
  std::vector<Cone> cones(nodes.size());
  std::vector<LinearityResult> lins(nodes.size());

  const auto work = [&](std::size_t i) {
    const int node = nodes[i];
    Cone cone = local_cone(
        model.d, restricted_child_horizons(tree, horizons, node, model.d));
    LinearityResult lin = is_linear(cone);
    if (!lin.linear && lin.certificate) {
      // Certificates must re-verify against the child horizons directly.
      const auto& cert = *lin.certificate;
      std::vector<double> neg(cert.size());
      for (std::size_t k = 0; k < cert.size(); ++k) neg[k] = -cert[k];
      if (!cone.member_via_horizons(cert) || cone.member_via_horizons(neg))
        throw SolveError("internal: arbitrage certificate failed re-verification at node '" +
                         tree.node(node).id + "'");
    }
    checks[i] = NodeCheck{node, lin.linear, lin.exact, lin.certificate};
    cones[i] = std::move(cone);
    lins[i] = std::move(lin);
  };

  if (jobs > 1 && nodes.size() > 1) {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const int n_threads = std::min<std::size_t>(jobs, nodes.size());
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < nodes.size(); i = next.fetch_add(1))
          work(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i) work(i);
  }

  NAContext ctx;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ctx.report.nodes.push_back(checks[i]);
    ctx.report.pass = ctx.report.pass && checks[i].linear;
    ctx.report.all_exact = ctx.report.all_exact && checks[i].exact;
    if (lins[i].linear) ctx.lineality[nodes[i]] = lineality_basis(cones[i], lins[i]);
    ctx.linres[nodes[i]] = lins[i];
    ctx.cones[nodes[i]] = std::move(cones[i]);
  }
  return ctx;
}

NAReport check_global_na(const ScenarioTree& tree, const ModelSpec& model, int jobs) {
  return analyze_na(tree, model, jobs).report;
}

}  // namespace robustdp
