#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "robustdp/common.hpp"

namespace robustdp {

enum class LpStatus { Optimal, Infeasible, Unbounded, PivotLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Maximizes c·x over { x in R^n : A x <= b } with free x, via a dense
// two-phase tableau simplex using Bland's anti-cycling rule. Problem sizes
// here are tiny (a handful of columns); the pivot cap is a defensive guard.
LpResult lp_max(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b, long pivot_cap = 100000);

// Feasibility of { x : A x <= b }; returns a point when one exists.
std::optional<std::vector<double>> lp_feasible_point(const Eigen::MatrixXd& A,
                                                     const Eigen::VectorXd& b,
                                                     long pivot_cap = 100000);

}  // namespace robustdp
