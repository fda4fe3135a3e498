#pragma once

#include <map>
#include <optional>
#include <string>

#include "robustdp/one_step.hpp"

namespace robustdp {

struct SolveOptions {
  double tol = 1e-7;
  bool use_memo = true;
  std::uint64_t memo_cap = 10'000'000;
  double memo_quantum = 1e-6;  // per-coordinate quantization of memo keys
  bool full_policy = false;    // also record decisions inside polar subtrees
  int jobs = 1;
};

struct Policy {
  std::map<int, std::vector<double>> decisions;  // node index -> h_t
};

struct SolveStats {
  long one_step_solves = 0;
  long memo_hits = 0;
  long leaf_evals = 0;
};

struct VerifyRecord {
  bool pass = true;
  // (a) every enumerated product measure pays at least value - eps.
  double margin_measures = kPosInf;   // min over P of E^P[Psi(H)] - (value - eps)
  std::vector<int> worst_measure_choice;
  bool measures_sampled = false;      // true when the 256-sample fallback ran
  // (b) no sampled alternative policy beats value + eps in the worst case.
  double margin_alternatives = kPosInf;  // min over alts of (value + eps) - wc(alt)
  int worst_alternative = -1;
  double eps = 0.0;
};

struct SolveReport {
  double value = kNegInf;       // robust value at the root
  Policy policy;
  std::map<int, int> worst_measure;  // node -> measure index along the policy
  std::map<int, double> bracket_halfwidth;
  NAReport na;
  InteriorityCertificate certificate;
  double certificate_value = kNegInf;  // worst-case value of the constant-h° policy
  SolveStats stats;
  double tol = 1e-7;
  std::optional<VerifyRecord> verify;
};

struct VerificationError : SolveError {
  VerificationError(std::string msg, VerifyRecord r)
      : SolveError(std::move(msg)), record(std::move(r)) {}
  VerifyRecord record;
};

// Backward recursion: leaf payoffs, inf-expectation across each node's
// ambiguity set, robust one-step maximization per decision block. The value
// function is evaluated lazily at the argument points the parent's optimizer
// requests, memoized on quantized prefixes.
SolveReport backward_solve(const ScenarioTree& tree, const ModelSpec& model,
                           const SolveOptions& opt = {});

// Exact worst-case (min over all product measures) expected payoff of a fixed
// adapted policy, computed by the nested per-node backward min.
double worst_case_policy_value(const ScenarioTree& tree, const ModelSpec& model,
                               const Policy& policy);

// Measure indices attaining the inf at the policy's arguments, per node.
std::map<int, int> worst_case_measures(const ScenarioTree& tree, const ModelSpec& model,
                                       const Policy& policy);

// Verifies the attainment inequalities: (a) every product measure pays at
// least value - eps under the reported policy, (b) no sampled alternative
// adapted policy exceeds value + eps in the worst case.
VerifyRecord forward_verify(const ScenarioTree& tree, const ModelSpec& model,
                            const SolveReport& report, double eps);

}  // namespace robustdp
