#pragma once

#include <functional>
#include <span>
#include <vector>

#include "robustdp/cone.hpp"

namespace robustdp {

// One-period robust problem sup_h inf_P E^P[psi(h)] over finitely many
// children and measures. Evaluators are pure functions of h.
struct OneStepProblem {
  int d = 1;
  std::vector<std::function<double(std::span<const double>)>> psi;      // per child
  std::vector<std::function<double(std::span<const double>)>> psi_inf;  // horizons
  std::vector<std::vector<double>> measures;  // probability rows over the children
  std::optional<double> upper_bound;          // the constant C when known
};

// inf over measures of the expected child value; children with zero weight do
// not contribute (0 * (-inf) = 0).
double phi(const OneStepProblem& p, std::span<const double> h);

// Same with the horizon evaluators; -inf absorbs on charged children.
double phi_inf(const OneStepProblem& p, std::span<const double> h);

struct NonlinearConeError : SolveError {
  NonlinearConeError(std::vector<double> cert, std::string node)
      : SolveError("one-step cone is not linear at node '" + node + "'"),
        certificate(std::move(cert)),
        node_id(std::move(node)) {}
  std::vector<double> certificate;
  std::string node_id;
};

struct OneStepSolution {
  double value = kNegInf;
  std::vector<double> h;
  std::vector<int> worst_measures;  // measure indices attaining the inf at h
  long iterations = 0;
  double achieved_tol = 0.0;
  double bracket_halfwidth = 0.0;   // of the final search box, full space
};

struct MaximizeOptions {
  double tol = 1e-7;
  double unbounded_guard = 1e9;  // bracket expansion limit
  int restarts = 20;
  std::uint64_t seed = 13;
  std::string node_id = "?";     // for error messages
};

// Maximizes phi. Requires the local cone {h : phi_inf(h) >= 0} linear (the
// caller supplies the cone and its verdict); phi is constant along lineality
// directions and coercive on their complement, so a bracketed golden-section
// (cyclic over coordinates for d >= 2, with random restarts) converges.
OneStepSolution robust_maximize(const OneStepProblem& p, const Cone& cone,
                                const LinearityResult& lin,
                                std::span<const double> h_center,
                                const MaximizeOptions& opt = {});

}  // namespace robustdp
