#include "robustdp/simplex.hpp"

#include <cmath>

namespace robustdp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kPhase1Tol = 1e-8;

struct Tableau {
  Eigen::MatrixXd M;        // m x (cols+1), last column is the rhs
  std::vector<int> basis;   // basic column per row
};

void pivot(Tableau& t, int row, int col) {
  t.M.row(row) /= t.M(row, col);
  for (int i = 0; i < t.M.rows(); ++i) {
    if (i == row) continue;
    const double f = t.M(i, col);
    if (f != 0.0) t.M.row(i) -= f * t.M.row(row);
  }
  t.basis[row] = col;
}

// Minimizes cost over the columns marked eligible, starting from the current
// basic feasible solution. Bland's rule: lowest-index entering column, lowest
// basic-variable index on ratio ties.
LpStatus run_phase(Tableau& t, const Eigen::VectorXd& cost,
                   const std::vector<bool>& eligible, long& pivots, long cap) {
  const int m = static_cast<int>(t.M.rows());
  const int ncols = static_cast<int>(t.M.cols()) - 1;
  while (true) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (!eligible[j]) continue;
      double r = cost(j);
      for (int i = 0; i < m; ++i) r -= cost(t.basis[i]) * t.M(i, j);
      if (r < -kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    int leave = -1;
    double best = kPosInf;
    for (int i = 0; i < m; ++i) {
      if (t.M(i, enter) > kPivotTol) {
        const double ratio = t.M(i, ncols) / t.M(i, enter);
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && (leave < 0 || t.basis[i] < t.basis[leave]))) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
    }
    if (leave < 0) return LpStatus::Unbounded;
    pivot(t, leave, enter);
    if (++pivots > cap) return LpStatus::PivotLimit;
  }
}

double phase_objective(const Tableau& t, const Eigen::VectorXd& cost) {
  double v = 0.0;
  const int rhs = static_cast<int>(t.M.cols()) - 1;
  for (int i = 0; i < t.M.rows(); ++i) v += cost(t.basis[i]) * t.M(i, rhs);
  return v;
}

}  // namespace

LpResult lp_max(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b, long pivot_cap) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());
  LpResult res;
  if (m == 0) {
    // No constraints: bounded only if c == 0.
    res.status = c.isZero(0.0) ? LpStatus::Optimal : LpStatus::Unbounded;
    res.x.assign(n, 0.0);
    return res;
  }

  // Standard form: [A, -A, I] y = b, y >= 0, with x = y_pos - y_neg. Rows with
  // negative rhs are flipped (their slack becomes -1) and receive artificials.
  const int n_struct = 2 * n + m;
  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (b(i) < 0.0) art_of_row[i] = n_art++;
  const int total = n_struct + n_art;

  Tableau t;
  t.M = Eigen::MatrixXd::Zero(m, total + 1);
  t.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      t.M(i, j) = sign * A(i, j);
      t.M(i, n + j) = -sign * A(i, j);
    }
    t.M(i, 2 * n + i) = sign;  // slack
    t.M(i, total) = sign * b(i);
    if (art_of_row[i] >= 0) {
      t.M(i, n_struct + art_of_row[i]) = 1.0;
      t.basis[i] = n_struct + art_of_row[i];
    } else {
      t.basis[i] = 2 * n + i;
    }
  }

  long pivots = 0;
  std::vector<bool> eligible(total, true);

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    for (int k = 0; k < n_art; ++k) phase1(n_struct + k) = 1.0;
    const LpStatus st = run_phase(t, phase1, eligible, pivots, pivot_cap);
    if (st == LpStatus::PivotLimit) {
      res.status = st;
      return res;
    }
    if (phase_objective(t, phase1) > kPhase1Tol) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive any basic artificial out (it sits at level ~0) or drop is not
    // needed: forbidding artificials from entering keeps them at zero.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= n_struct) {
        for (int j = 0; j < n_struct; ++j) {
          if (std::abs(t.M(i, j)) > kPivotTol) {
            pivot(t, i, j);
            break;
          }
        }
      }
    }
    for (int k = 0; k < n_art; ++k) eligible[n_struct + k] = false;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  for (int j = 0; j < n; ++j) {
    cost(j) = -c(j);      // maximize c·x == minimize -c·x
    cost(n + j) = c(j);
  }
  const LpStatus st = run_phase(t, cost, eligible, pivots, pivot_cap);
  res.status = st;
  if (st != LpStatus::Optimal) return res;

  res.x.assign(n, 0.0);
  const int rhs = total;
  for (int i = 0; i < m; ++i) {
    const int bcol = t.basis[i];
    if (bcol < n)
      res.x[bcol] += t.M(i, rhs);
    else if (bcol < 2 * n)
      res.x[bcol - n] -= t.M(i, rhs);
  }
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += c(j) * res.x[j];
  return res;
}

std::optional<std::vector<double>> lp_feasible_point(const Eigen::MatrixXd& A,
                                                     const Eigen::VectorXd& b,
                                                     long pivot_cap) {
  const LpResult r = lp_max(Eigen::VectorXd::Zero(A.cols()), A, b, pivot_cap);
  if (r.status == LpStatus::Optimal) return r.x;
  if (r.status == LpStatus::PivotLimit)
    throw SolveError("simplex pivot guard tripped during feasibility check");
  return std::nullopt;
}

}  // namespace robustdp
