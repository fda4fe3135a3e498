#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robustdp/expr.hpp"

namespace robustdp {

// Sequence of child positions from the root; identifies a node at depth t.
using PathPrefix = std::vector<int>;

struct TreeNode {
  std::string id;
  std::vector<int> children;                   // node indices
  std::vector<double> prices;                  // S_t at this node, dimension m
  std::vector<std::vector<double>> measures;   // ambiguity set over children
  int depth = 0;
  int parent = -1;
  int child_pos = -1;                          // position within parent's list
};

// Finite event tree of depth T. Immutable after construction; safe for
// concurrent reads.
class ScenarioTree {
 public:
  ScenarioTree() = default;
  ScenarioTree(std::vector<TreeNode> nodes, int root);

  int root() const { return root_; }
  int depth() const { return depth_; }         // T
  int price_dim() const { return price_dim_; } // m
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int i) const { return nodes_.at(i); }
  bool is_terminal(int i) const { return nodes_.at(i).children.empty(); }

  const std::vector<int>& leaves() const { return leaves_; }
  const std::vector<int>& non_terminal() const { return non_terminal_; }

  // Node indices along the root-to-node path, root first, node last.
  std::vector<int> path_to(int node) const;
  // Child-position prefix identifying the node.
  PathPrefix prefix_of(int node) const;
  // Walks a prefix; throws on invalid steps.
  int node_at(const PathPrefix& prefix) const;

 private:
  std::vector<TreeNode> nodes_;
  int root_ = 0;
  int depth_ = 0;
  int price_dim_ = 0;
  std::vector<int> leaves_;
  std::vector<int> non_terminal_;
};

enum class Preset { Frictionless, ProportionalTC, Liquidation, CustomExpr };

std::string preset_name(Preset p);

struct InteriorityCertificate {
  std::vector<double> h0;  // length d*T
  double eps = 0.0;
  double c = 0.0;
};

struct CustomPayoff {
  ConcaveExpr expr;  // over R^{dT}, applied at every leaf
  std::optional<InteriorityCertificate> certificate;
};

struct ModelSpec {
  Preset preset = Preset::Frictionless;
  int d = 1;                // decision dimension per period
  double x = 0.0;           // initial capital (frictionless / proportional TC)
  double X = 0.0;           // initial inventory (liquidation)
  double kappa = 0.0;       // transaction-cost rate, in [0,1)
  double eta = 0.0;         // temporary impact slope, g(z) = eta*z
  double price_floor = 0.0; // liquidation price floor, <= 0
  Utility utility = Utility::exponential(1.0);
  std::optional<CustomPayoff> custom;
};

struct SolverCaps {
  std::uint64_t measures = 1'000'000;
  std::uint64_t grid = 100'000'000;
  std::uint64_t memo = 10'000'000;
};

struct SolverConfig {
  double tol = 1e-7;
  double grid_lo = -10.0;
  double grid_hi = 10.0;
  double grid_step = 0.05;
  int grid_refine = 2;
  SolverCaps caps;
};

struct Config {
  ScenarioTree tree;
  ModelSpec model;
  SolverConfig solver;
};

// Parses and fully validates a configuration document (JSON text). Errors
// carry the offending field path and node id.
Config load_config(const std::string& text);

// Canonical serialization: keys sorted, floats with 17 significant digits.
std::string serialize_config(const Config& cfg);

// Children charged with positive probability by at least one measure of the
// node's ambiguity set. Quasi-sure statements at this node quantify over
// exactly this set.
std::vector<int> union_support(const ScenarioTree& tree, int node);

struct ProductMeasure {
  std::vector<int> choice;             // per non-terminal node (tree order)
  std::vector<double> leaf_prob;       // aligned with tree.leaves()
};

std::uint64_t product_measure_count(const ScenarioTree& tree);

// Yields every selection of one ambiguity-set element per non-terminal node.
// Refuses with CapExceeded (naming the count) when the product exceeds cap.
void for_each_product_measure(const ScenarioTree& tree, std::uint64_t cap,
                              const std::function<void(const ProductMeasure&)>& fn);

}  // namespace robustdp
