#include "robustdp/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace robustdp {

namespace {

struct NodeGrid {
  int node = -1;
  std::vector<std::vector<double>> axes;  // one axis per coordinate
};

std::uint64_t lattice_count(const std::vector<NodeGrid>& grids, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& g : grids)
    for (const auto& axis : g.axes) {
      const std::uint64_t n = std::max<std::uint64_t>(axis.size(), 1);
      if (total > cap / n + 1) return UINT64_MAX;
      total *= n;
      if (total > cap) return UINT64_MAX;
    }
  return total;
}

std::vector<double> make_axis(double lo, double hi, double step) {
  std::vector<double> axis;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  axis.reserve(n);
  for (int i = 0; i < n; ++i) axis.push_back(lo + i * step);
  return axis;
}

class GridSearch {
 public:
  GridSearch(const ScenarioTree& tree, const ModelSpec& model)
      : tree_(tree), model_(model), exprs_(compile_all_leaves(model, tree)) {
    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
      leaf_slot_[tree.leaves()[i]] = static_cast<int>(i);
    nodes_ = tree.non_terminal();
    // Deepest nodes run innermost so only their terminal children need
    // re-evaluation per innermost step.
    std::sort(nodes_.begin(), nodes_.end(), [&](int a, int b) {
      if (tree_.node(a).depth != tree_.node(b).depth)
        return tree_.node(a).depth < tree_.node(b).depth;
      return a < b;
    });
    for (std::size_t k = 0; k < nodes_.size(); ++k) level_of_[nodes_[k]] = k;
    decisions_.assign(nodes_.size(), std::vector<double>(model.d, 0.0));
    leaf_cache_.assign(tree.leaves().size(), kNegInf);
    owned_.assign(nodes_.size(), {});
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      for (int c : tree.node(nodes_[k]).children)
        if (tree.is_terminal(c)) owned_[k].push_back(c);
  }

  const std::vector<int>& nodes() const { return nodes_; }

  void run(const std::vector<NodeGrid>& grids, OracleResult& best) {
    grids_ = &grids;
    recurse(0, best);
  }

 private:
  void recompute_owned(std::size_t level) {
    for (int leaf : owned_[level]) {
      std::vector<double> x;
      x.reserve(model_.d * tree_.depth());
      const std::vector<int> path = tree_.path_to(leaf);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& dec = decisions_[level_of_.at(path[i])];
        x.insert(x.end(), dec.begin(), dec.end());
      }
      leaf_cache_[leaf_slot_.at(leaf)] = exprs_[leaf_slot_.at(leaf)].evaluate(x);
    }
  }

  double worst_case(int node) const {
    if (tree_.is_terminal(node)) return leaf_cache_[leaf_slot_.at(node)];
    const TreeNode& n = tree_.node(node);
    std::vector<double> child_vals(n.children.size());
    std::vector<bool> have(n.children.size(), false);
    double best = kPosInf;
    for (const auto& m : n.measures) {
      double v = 0.0;
      for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
        if (m[pos] == 0.0) continue;
        if (!have[pos]) {
          child_vals[pos] = worst_case(n.children[pos]);
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
    return best;
  }

  void recurse(std::size_t level, OracleResult& best) {
    if (level == nodes_.size()) {
      ++best.evaluations;
      const double v = worst_case(tree_.root());
      if (v > best.value) {
        best.value = v;
        for (std::size_t k = 0; k < nodes_.size(); ++k)
          best.policy.decisions[nodes_[k]] = decisions_[k];
      }
      return;
    }
    const auto& axes = (*grids_)[level].axes;
    std::vector<int> idx(model_.d, 0);
    while (true) {
      for (int j = 0; j < model_.d; ++j) decisions_[level][j] = axes[j][idx[j]];
      recompute_owned(level);
      recurse(level + 1, best);
      int carry = 0;
      for (; carry < model_.d; ++carry) {
        if (++idx[carry] < static_cast<int>(axes[carry].size())) break;
        idx[carry] = 0;
      }
      if (carry == model_.d) break;
    }
  }

  const ScenarioTree& tree_;
  const ModelSpec& model_;
  std::vector<ConcaveExpr> exprs_;
  std::map<int, int> leaf_slot_;
  std::vector<int> nodes_;
  std::map<int, std::size_t> level_of_;
  std::vector<std::vector<double>> decisions_;
  std::vector<double> leaf_cache_;
  std::vector<std::vector<int>> owned_;
  const std::vector<NodeGrid>* grids_ = nullptr;
};

}  // namespace

OracleResult brute_force_value(const ScenarioTree& tree, const ModelSpec& model,
                               const GridSpec& grid, std::uint64_t assignment_cap) {
  if (grid.step <= 0.0 || grid.hi <= grid.lo)
    throw std::invalid_argument("oracle grid requires lo < hi and step > 0");
  // The boxes must contain the interiority point blocks.
  if (model.preset != Preset::CustomExpr || (model.custom && model.custom->certificate)) {
    const InteriorityCertificate cert = check_interiority(model, tree);
    for (double v : cert.h0)
      if (v < grid.lo - 1e-12 || v > grid.hi + 1e-12)
        throw std::invalid_argument(
            "oracle grid box does not contain the interiority point");
  }

  GridSearch search(tree, model);
  OracleResult best;

  const std::vector<double> full_axis = make_axis(grid.lo, grid.hi, grid.step);
  std::vector<NodeGrid> grids;
  for (int node : search.nodes())
    grids.push_back(NodeGrid{
        node, std::vector<std::vector<double>>(model.d, full_axis)});
  std::uint64_t count = lattice_count(grids, assignment_cap);
  if (count > assignment_cap)
    throw CapExceeded("grid assignments exceed cap " + std::to_string(assignment_cap));
  search.run(grids, best);

  double step = grid.step;
  for (int pass = 0; pass < grid.refine; ++pass) {
    const double halfwidth = 2.0 * step;  // capture slack around the incumbent
    step *= 0.01;
    for (auto& g : grids) {
      const auto& inc = best.policy.decisions.at(g.node);
      for (int j = 0; j < model.d; ++j)
        g.axes[j] = make_axis(inc[j] - halfwidth, inc[j] + halfwidth, step);
    }
    count = lattice_count(grids, assignment_cap);
    if (count > assignment_cap)
      throw CapExceeded("refinement assignments exceed cap " +
                        std::to_string(assignment_cap));
    search.run(grids, best);
  }
  return best;
}

DiffRecord compare(const SolveReport& dp, const OracleResult& oracle,
                   const ScenarioTree& tree, const ModelSpec& model, double tol) {
  DiffRecord rec;
  rec.value_gap = std::abs(dp.value - oracle.value);
  const double wc_dp = worst_case_policy_value(tree, model, dp.policy);
  const double wc_oracle = worst_case_policy_value(tree, model, oracle.policy);
  rec.policy_phi_gap = std::abs(wc_dp - wc_oracle);
  for (const auto& [node, h] : oracle.policy.decisions) {
    const auto it = dp.policy.decisions.find(node);
    if (it == dp.policy.decisions.end()) continue;
    double d2 = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
      d2 += (h[j] - it->second[j]) * (h[j] - it->second[j]);
    rec.node_distance[node] = std::sqrt(d2);
  }
  rec.pass = rec.value_gap <= tol && rec.policy_phi_gap <= tol;
  return rec;
}

}  // namespace robustdp
