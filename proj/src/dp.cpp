#include "robustdp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace robustdp {

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<int, std::vector<long long>>& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(k.first));
    for (long long q : k.second) mix(static_cast<std::uint64_t>(q));
    return static_cast<std::size_t>(h);
  }
};

struct MemoEntry {
  double value;
  std::vector<double> h;
  std::vector<int> worst;
  double bracket_halfwidth;
};

// Lazily evaluated value functions over decision prefixes.
class Engine {
 public:
  Engine(const ScenarioTree& tree, const ModelSpec& model, const NAContext& na,
         const InteriorityCertificate& cert, const SolveOptions& opt)
      : tree_(tree), model_(model), na_(na), cert_(cert), opt_(opt) {
    exprs_ = compile_all_leaves(model, tree);
    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
      leaf_slot_[tree.leaves()[i]] = static_cast<int>(i);
    for (int n : tree.non_terminal()) support_[n] = union_support(tree, n);
    ub_ = model.utility.upper_bound();
  }

  double value(int node, const std::vector<double>& prefix) {
    if (tree_.is_terminal(node)) {
      ++stats_.leaf_evals;
      return exprs_[leaf_slot_.at(node)].evaluate(prefix);
    }
    return solve_at(node, prefix).value;
  }

  MemoEntry solve_at(int node, const std::vector<double>& prefix) {
    if (!opt_.use_memo) return solve_fresh(node, prefix);
    const auto key = std::make_pair(node, quantize(prefix));
    const auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    if (memo_.size() >= opt_.memo_cap)
      throw CapExceeded("memo table exceeds cap of " + std::to_string(opt_.memo_cap) +
                        " entries");
    MemoEntry entry = solve_fresh(node, prefix);
    memo_.emplace(key, entry);
    return entry;
  }

  const SolveStats& stats() const { return stats_; }

 private:
  std::vector<long long> quantize(const std::vector<double>& x) const {
    std::vector<long long> q(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      q[i] = std::llround(x[i] / opt_.memo_quantum);
    return q;
  }

  MemoEntry solve_fresh(int node, const std::vector<double>& prefix) {
    ++stats_.one_step_solves;
    const int d = model_.d;
    const int t = tree_.node(node).depth;
    const auto& sup = support_.at(node);

    OneStepProblem p;
    p.d = d;
    p.upper_bound = ub_;
    for (int pos : sup) {
      const int child = tree_.node(node).children[pos];
      p.psi.push_back([this, child, prefix](std::span<const double> h) {
        std::vector<double> x = prefix;
        x.insert(x.end(), h.begin(), h.end());
        return value(child, x);
      });
    }
    // Horizon evaluators mirror the cone's child horizons (same order).
    const Cone& cone = na_.cones.at(node);
    for (std::size_t i = 0; i < sup.size(); ++i) {
      const RestrictedHorizon* rh = &cone.horizons[i];
      p.psi_inf.push_back(
          [rh](std::span<const double> h) { return rh->evaluate(h); });
    }
    // Restrict measures to the supported children.
    for (const auto& m : tree_.node(node).measures) {
      std::vector<double> row;
      row.reserve(sup.size());
      for (int pos : sup) row.push_back(m[pos]);
      p.measures.push_back(std::move(row));
    }

    MaximizeOptions mo;
    mo.tol = opt_.tol;
    mo.node_id = tree_.node(node).id;
    const std::span<const double> center(cert_.h0.data() + d * t, d);
    const OneStepSolution sol =
        robust_maximize(p, cone, na_.linres.at(node), center, mo);
    return MemoEntry{sol.value, sol.h, sol.worst_measures, sol.bracket_halfwidth};
  }

  const ScenarioTree& tree_;
  const ModelSpec& model_;
  const NAContext& na_;
  const InteriorityCertificate& cert_;
  const SolveOptions& opt_;
  std::vector<ConcaveExpr> exprs_;
  std::map<int, int> leaf_slot_;
  std::map<int, std::vector<int>> support_;
  std::optional<double> ub_;
  std::unordered_map<std::pair<int, std::vector<long long>>, MemoEntry, KeyHash> memo_;
  SolveStats stats_;
};

std::vector<double> policy_prefix(const ScenarioTree& tree, const Policy& policy,
                                  int node, int d) {
  std::vector<double> x;
  const std::vector<int> path = tree.path_to(node);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto it = policy.decisions.find(path[i]);
    if (it == policy.decisions.end())
      throw SolveError("policy missing at node '" + tree.node(path[i]).id + "'");
    x.insert(x.end(), it->second.begin(), it->second.end());
  }
  (void)d;
  return x;
}

// Worst-case value of a fixed policy below `node` given the decisions already
// taken along the way; exact nested min over the ambiguity sets.
double policy_backward_min(const ScenarioTree& tree, const ModelSpec& model,
                           const std::vector<ConcaveExpr>& exprs,
                           const std::map<int, int>& leaf_slot, const Policy& policy,
                           int node, std::vector<double>& x) {
  if (tree.is_terminal(node)) return exprs[leaf_slot.at(node)].evaluate(x);
  const auto it = policy.decisions.find(node);
  if (it == policy.decisions.end())
    throw SolveError("policy missing at node '" + tree.node(node).id + "'");
  const std::size_t mark = x.size();
  x.insert(x.end(), it->second.begin(), it->second.end());
  const TreeNode& n = tree.node(node);
  std::vector<double> child_vals(n.children.size(), 0.0);
  std::vector<bool> have(n.children.size(), false);
  double best = kPosInf;
  for (const auto& m : n.measures) {
    double v = 0.0;
    for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
      if (m[pos] == 0.0) continue;
      if (!have[pos]) {
        child_vals[pos] =
            policy_backward_min(tree, model, exprs, leaf_slot, policy, n.children[pos], x);
        have[pos] = true;
      }
      if (is_neg_inf(child_vals[pos])) {
        v = kNegInf;
        break;
      }
      v += m[pos] * child_vals[pos];
    }
    best = std::min(best, v);
  }
  x.resize(mark);
  return best;
}

}  // namespace

double worst_case_policy_value(const ScenarioTree& tree, const ModelSpec& model,
                               const Policy& policy) {
  const auto exprs = compile_all_leaves(model, tree);
  std::map<int, int> leaf_slot;
  for (std::size_t i = 0; i < tree.leaves().size(); ++i)
    leaf_slot[tree.leaves()[i]] = static_cast<int>(i);
  std::vector<double> x;
  return policy_backward_min(tree, model, exprs, leaf_slot, policy, tree.root(), x);
}

std::map<int, int> worst_case_measures(const ScenarioTree& tree, const ModelSpec& model,
                                       const Policy& policy) {
  const auto exprs = compile_all_leaves(model, tree);
  std::map<int, int> leaf_slot;
  for (std::size_t i = 0; i < tree.leaves().size(); ++i)
    leaf_slot[tree.leaves()[i]] = static_cast<int>(i);

  std::map<int, int> out;
  for (int node : tree.non_terminal()) {
    if (!policy.decisions.count(node)) continue;  // polar subtree, no decision
    std::vector<double> x = policy_prefix(tree, policy, node, model.d);
    const auto it = policy.decisions.find(node);
    x.insert(x.end(), it->second.begin(), it->second.end());
    const TreeNode& n = tree.node(node);
    // Exact continuation value per child (worst case below the child).
    double best = kPosInf;
    int best_idx = 0;
    for (std::size_t mi = 0; mi < n.measures.size(); ++mi) {
      double v = 0.0;
      for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
        const double w = n.measures[mi][pos];
        if (w == 0.0) continue;
        std::vector<double> xc = x;
        const double cv = policy_backward_min(tree, model, exprs, leaf_slot, policy,
                                              n.children[pos], xc);
        if (is_neg_inf(cv)) {
          v = kNegInf;
          break;
        }
        v += w * cv;
      }
      if (v < best - 1e-15) {  // ties broken by lowest index
        best = v;
        best_idx = static_cast<int>(mi);
      }
    }
    out[node] = best_idx;
  }
  return out;
}

SolveReport backward_solve(const ScenarioTree& tree, const ModelSpec& model,
                           const SolveOptions& opt) {
  SolveReport report;
  report.tol = opt.tol;
  report.certificate = check_interiority(model, tree);

  NAContext na = analyze_na(tree, model, opt.jobs);
  report.na = na.report;
  if (!na.report.pass) throw NoArbitrageError(na.report);

  Engine engine(tree, model, na, report.certificate, opt);
  const std::vector<double> empty;
  report.value = engine.value(tree.root(), empty);
  if (is_neg_inf(report.value))
    throw SolveError(
        "root value is -inf, contradicting the interiority certificate");

  // Materialize the policy along prefixes generated by the optimal earlier
  // decisions: breadth-first, each node solved at its ancestors' decisions.
  std::deque<int> queue{tree.root()};
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    if (tree.is_terminal(node)) continue;
    const std::vector<double> prefix = policy_prefix(tree, report.policy, node, model.d);
    const MemoEntry e = engine.solve_at(node, prefix);
    report.policy.decisions[node] = e.h;
    report.bracket_halfwidth[node] = e.bracket_halfwidth;
    const auto sup = union_support(tree, node);
    for (std::size_t pos = 0; pos < tree.node(node).children.size(); ++pos) {
      const bool supported =
          std::find(sup.begin(), sup.end(), static_cast<int>(pos)) != sup.end();
      if (supported || opt.full_policy)
        queue.push_back(tree.node(node).children[pos]);
    }
  }

  report.worst_measure = worst_case_measures(tree, model, report.policy);

  // Reference value of the constant-h° strategy from the certificate.
  Policy cert_policy;
  for (int node : tree.non_terminal()) {
    const int t = tree.node(node).depth;
    cert_policy.decisions[node] = std::vector<double>(
        report.certificate.h0.begin() + model.d * t,
        report.certificate.h0.begin() + model.d * (t + 1));
  }
  report.certificate_value = worst_case_policy_value(tree, model, cert_policy);

  report.stats = engine.stats();
  return report;
}

VerifyRecord forward_verify(const ScenarioTree& tree, const ModelSpec& model,
                            const SolveReport& report, double eps) {
  VerifyRecord rec;
  rec.eps = eps;
  const auto exprs = compile_all_leaves(model, tree);
  std::map<int, int> leaf_slot;
  for (std::size_t i = 0; i < tree.leaves().size(); ++i)
    leaf_slot[tree.leaves()[i]] = static_cast<int>(i);

  // Leaf payoffs under the reported policy.
  std::vector<double> leaf_value(tree.leaves().size(), kNegInf);
  std::vector<bool> leaf_defined(tree.leaves().size(), false);
  for (std::size_t li = 0; li < tree.leaves().size(); ++li) {
    const int leaf = tree.leaves()[li];
    const std::vector<int> path = tree.path_to(leaf);
    std::vector<double> x;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const auto it = report.policy.decisions.find(path[i]);
      if (it == report.policy.decisions.end()) {
        ok = false;  // polar subtree without a recorded decision
        break;
      }
      x.insert(x.end(), it->second.begin(), it->second.end());
    }
    if (ok) {
      leaf_value[li] = exprs[li].evaluate(x);
      leaf_defined[li] = true;
    }
  }

  // (a) every product measure pays at least value - eps.
  const auto run_measure = [&](const ProductMeasure& pm) {
    double ev = 0.0;
    for (std::size_t li = 0; li < pm.leaf_prob.size(); ++li) {
      if (pm.leaf_prob[li] == 0.0) continue;
      if (!leaf_defined[li])
        throw SolveError("policy missing on a charged path; rerun with full policy");
      ev += pm.leaf_prob[li] * leaf_value[li];
    }
    const double margin = ev - (report.value - eps);
    if (margin < rec.margin_measures) {
      rec.margin_measures = margin;
      rec.worst_measure_choice = pm.choice;
    }
  };
  const std::uint64_t count = product_measure_count(tree);
  if (count <= 1'000'000) {
    for_each_product_measure(tree, 1'000'000, run_measure);
  } else {
    rec.measures_sampled = true;
    auto rng = rng_for(29);
    ProductMeasure pm;
    const auto& nodes = tree.non_terminal();
    for (int s = 0; s < 256; ++s) {
      pm.choice.clear();
      for (int node : nodes) {
        std::uniform_int_distribution<int> pick(
            0, static_cast<int>(tree.node(node).measures.size()) - 1);
        pm.choice.push_back(pick(rng));
      }
      pm.leaf_prob.assign(tree.leaves().size(), 0.0);
      for (std::size_t li = 0; li < tree.leaves().size(); ++li) {
        double p = 1.0;
        int u = tree.leaves()[li];
        while (tree.node(u).parent >= 0) {
          const int parent = tree.node(u).parent;
          const auto slot =
              std::find(nodes.begin(), nodes.end(), parent) - nodes.begin();
          p *= tree.node(parent).measures[pm.choice[slot]][tree.node(u).child_pos];
          u = parent;
        }
        pm.leaf_prob[li] = p;
      }
      run_measure(pm);
    }
  }

  // (b) sampled alternative adapted policies must not beat value + eps.
  auto rng = rng_for(29 + 1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int alt = 0; alt < 100; ++alt) {
    Policy p;
    for (int node : tree.non_terminal()) {
      const auto it = report.policy.decisions.find(node);
      if (it == report.policy.decisions.end()) continue;
      const double w =
          std::max(1.0, report.bracket_halfwidth.count(node)
                            ? report.bracket_halfwidth.at(node)
                            : 1.0);
      std::vector<double> h = it->second;
      for (double& hi : h) hi += w * unif(rng);
      p.decisions[node] = std::move(h);
    }
    double wc;
    try {
      wc = worst_case_policy_value(tree, model, p);
    } catch (const SolveError&) {
      continue;  // alternative wanders into an undefined polar region
    }
    const double margin = (report.value + eps) - wc;
    if (margin < rec.margin_alternatives) {
      rec.margin_alternatives = margin;
      rec.worst_alternative = alt;
    }
  }

  rec.pass = rec.margin_measures >= 0.0 && rec.margin_alternatives >= 0.0;
  return rec;
}

}  // namespace robustdp
