#pragma once

#include <vector>

#include "robustdp/scenario.hpp"

namespace robustdp {

// Compiles the payoff Psi(leaf, ·) over z in R^{dT} for the model's preset.
// Blocks of z are the decisions h_0..h_{T-1}; prices are read along the
// root-to-leaf path.
ConcaveExpr compile_leaf(const ModelSpec& model, const ScenarioTree& tree, int leaf);
ConcaveExpr compile_preset(const ModelSpec& model, const ScenarioTree& tree,
                           const PathPrefix& leaf);

// All leaves in tree.leaves() order.
std::vector<ConcaveExpr> compile_all_leaves(const ModelSpec& model, const ScenarioTree& tree);

// Test-only style independent check: straight-line wealth V(H) computed from
// the preset formulas without going through the expression tree.
double direct_wealth(const ModelSpec& model, const ScenarioTree& tree, int leaf,
                     std::span<const double> z);

// Builds the interiority certificate (h°, eps, c) for the built-in presets
// from their closed-form constructions, or returns the user-supplied one for
// custom expressions. Validates by sampling 1000 points of the closed eps-ball
// (seed 42) against every leaf payoff.
InteriorityCertificate check_interiority(const ModelSpec& model, const ScenarioTree& tree);

// Worst sampled margin min over samples and leaves of Psi(z) - (-c); negative
// means the certificate is violated.
double certificate_margin(const InteriorityCertificate& cert, const ModelSpec& model,
                          const ScenarioTree& tree, int samples = 1000);

}  // namespace robustdp
