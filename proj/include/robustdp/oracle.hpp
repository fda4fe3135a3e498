#pragma once

#include "robustdp/dp.hpp"

namespace robustdp {

struct GridSpec {
  double lo = -10.0;
  double hi = 10.0;
  double step = 0.05;
  int refine = 2;  // passes shrinking the step by 0.01 around the incumbent
};

struct OracleResult {
  double value = kNegInf;
  Policy policy;
  std::uint64_t evaluations = 0;
};

// Exact maximization over the finite grid of adapted policies (one lattice
// point per non-terminal node) of the exact min over all product measures of
// the expected payoff; then `refine` local passes around the incumbent.
OracleResult brute_force_value(const ScenarioTree& tree, const ModelSpec& model,
                               const GridSpec& grid,
                               std::uint64_t assignment_cap = 100'000'000);

struct DiffRecord {
  double value_gap = 0.0;        // |dp value - oracle value|
  double policy_phi_gap = 0.0;   // |wc(dp policy) - wc(oracle policy)|
  std::map<int, double> node_distance;  // informational L2 per node
  bool pass = false;
};

// Value-based comparison; maximizers need not be unique, so policies are
// compared through their worst-case values rather than their arguments.
DiffRecord compare(const SolveReport& dp, const OracleResult& oracle,
                   const ScenarioTree& tree, const ModelSpec& model, double tol);

}  // namespace robustdp
