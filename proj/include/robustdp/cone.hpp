#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "robustdp/payoff.hpp"
#include "robustdp/scenario.hpp"

namespace robustdp {

// Horizon of a child's value function restricted to the parent's decision
// block h in R^d (earlier blocks fixed at zero). For leaf children this is a
// symbolic expression; for interior children the growth rate is nonnegative
// exactly when some continuation plan keeps every supported leaf's horizon
// payoff nonnegative, which is a linear feasibility system.
struct RestrictedHorizon {
  std::optional<ConcaveExpr> expr;  // leaf child: horizon over R^d

  struct Subtree {
    Eigen::MatrixXd Ah;  // rows x d
    Eigen::MatrixXd Ap;  // rows x plan_dims; feasibility: Ah h + Ap p >= 0
  };
  std::optional<Subtree> subtree;

  // Horizon evaluation: exact for leaf children; for interior children the
  // cone indicator (0 when a feasible continuation exists, -inf otherwise).
  double evaluate(std::span<const double> h) const;
  bool nonneg(std::span<const double> h) const;
};

// Local cone K_t(node): directions whose one-step horizon payoff is >= 0 at
// every supported child. Polyhedral form carries homogeneous rows a_i·h >= 0.
struct Cone {
  int dim = 0;
  std::optional<Eigen::MatrixXd> rows;
  std::vector<RestrictedHorizon> horizons;
  bool extraction_fell_back = false;  // sign-pattern cap forced the oracle form

  bool polyhedral() const { return rows.has_value(); }
  bool member(std::span<const double> h) const;
  // Membership decided from the child horizons, ignoring any polyhedral rows;
  // used to re-verify certificates independently of the representation.
  bool member_via_horizons(std::span<const double> h) const;
};

struct LinearityResult {
  bool linear = false;
  bool exact = true;  // false only for sampled verdicts (oracle form, d >= 2)
  std::optional<std::vector<double>> certificate;
};

struct NodeCheck {
  int node = -1;
  bool linear = false;
  bool exact = true;
  std::optional<std::vector<double>> certificate;
};

struct NAReport {
  bool pass = true;
  bool all_exact = true;
  std::vector<NodeCheck> nodes;
};

struct NoArbitrageError : SolveError {
  explicit NoArbitrageError(NAReport r)
      : SolveError("no-arbitrage condition failed"), report(std::move(r)) {}
  NAReport report;
};

// Builds the restricted child horizons for one node; supported children only,
// aligned with union_support(tree, node).
std::vector<RestrictedHorizon> restricted_child_horizons(
    const ScenarioTree& tree, const std::vector<ConcaveExpr>& leaf_horizons, int node,
    int d);

Cone local_cone(int d, std::vector<RestrictedHorizon> child_horizons);

LinearityResult is_linear(const Cone& cone);

// Orthonormal columns spanning the lineality space of a cone already decided
// linear. For sampled verdicts the basis is assembled from verified member
// directions.
Eigen::MatrixXd lineality_basis(const Cone& cone, const LinearityResult& lin);

// Quasi-uniform unit directions (deterministic spiral in low dimension).
std::vector<std::vector<double>> sphere_directions(int d, int count);

struct NAContext {
  NAReport report;
  std::map<int, Cone> cones;               // per non-terminal node
  std::map<int, LinearityResult> linres;
  std::map<int, Eigen::MatrixXd> lineality;
};

NAContext analyze_na(const ScenarioTree& tree, const ModelSpec& model, int jobs = 1);

// Runs the local cone + linearity check at every reachable non-terminal node.
NAReport check_global_na(const ScenarioTree& tree, const ModelSpec& model, int jobs = 1);

}  // namespace robustdp
