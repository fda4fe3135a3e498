#include "robustdp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace robustdp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioTree

ScenarioTree::ScenarioTree(std::vector<TreeNode> nodes, int root)
    : nodes_(std::move(nodes)), root_(root) {
  check(!nodes_.empty(), "tree has no nodes");
  check(root_ >= 0 && root_ < node_count(), "invalid root index");

  price_dim_ = static_cast<int>(nodes_[root_].prices.size());
  check(price_dim_ >= 1, "node '" + nodes_[root_].id + "': empty price vector");

  // Depths, parents and reachability from the root.
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<int> queue{root_};
  nodes_[root_].depth = 0;
  nodes_[root_].parent = -1;
  seen[root_] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    TreeNode& n = nodes_[u];
    check(static_cast<int>(n.prices.size()) == price_dim_,
          "node '" + n.id + "': price dimension " + std::to_string(n.prices.size()) +
              " differs from root dimension " + std::to_string(price_dim_));
    for (double p : n.prices)
      check(std::isfinite(p), "node '" + n.id + "': non-finite price");
    for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
      const int c = n.children[pos];
      check(c >= 0 && c < node_count(), "node '" + n.id + "': child index out of range");
      check(!seen[c], "node '" + nodes_[c].id + "' has more than one parent");
      seen[c] = true;
      nodes_[c].depth = n.depth + 1;
      nodes_[c].parent = u;
      nodes_[c].child_pos = static_cast<int>(pos);
      queue.push_back(c);
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    check(seen[i], "node '" + nodes_[i].id + "' is not reachable from the root");

  // Uniform depth of leaves, ambiguity-set invariants.
  depth_ = -1;
  for (int i = 0; i < node_count(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.children.empty()) {
      check(n.measures.empty(), "terminal node '" + n.id + "' must not carry measures");
      if (depth_ < 0) depth_ = n.depth;
      check(n.depth == depth_, "leaf '" + n.id + "' at depth " + std::to_string(n.depth) +
                                   " but tree depth is " + std::to_string(depth_));
      leaves_.push_back(i);
    } else {
      non_terminal_.push_back(i);
      check(!n.measures.empty(), "node '" + n.id + "': ambiguity set is empty");
      for (std::size_t mi = 0; mi < n.measures.size(); ++mi) {
        const auto& m = n.measures[mi];
        check(m.size() == n.children.size(),
              "node '" + n.id + "': measure " + std::to_string(mi) + " has " +
                  std::to_string(m.size()) + " entries for " +
                  std::to_string(n.children.size()) + " children");
        double sum = 0.0;
        for (double p : m) {
          check(std::isfinite(p) && p >= 0.0 && p <= 1.0,
                "node '" + n.id + "': probability " + fmt_short(p) + " outside [0,1]");
          sum += p;
        }
        // Inputs are rejected, never renormalized.
        check(std::abs(sum - 1.0) <= 1e-12,
              "probabilities sum to " + fmt_short(sum) + " ≠ 1 at node " + n.id);
      }
    }
  }
  check(depth_ >= 1, "tree must have at least one period");
}

std::vector<int> ScenarioTree::path_to(int node) const {
  std::vector<int> path;
  for (int u = node; u >= 0; u = nodes_[u].parent) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

PathPrefix ScenarioTree::prefix_of(int node) const {
  PathPrefix prefix;
  for (int u = node; nodes_[u].parent >= 0; u = nodes_[u].parent)
    prefix.push_back(nodes_[u].child_pos);
  std::reverse(prefix.begin(), prefix.end());
  return prefix;
}

int ScenarioTree::node_at(const PathPrefix& prefix) const {
  int u = root_;
  for (int pos : prefix) {
    const TreeNode& n = nodes_[u];
    check(pos >= 0 && pos < static_cast<int>(n.children.size()),
          "path step " + std::to_string(pos) + " invalid at node '" + n.id + "'");
    u = n.children[pos];
  }
  return u;
}

// ---------------------------------------------------------------------------
// union support / product measures

std::vector<int> union_support(const ScenarioTree& tree, int node) {
  const TreeNode& n = tree.node(node);
  check(!n.children.empty(), "union_support of a terminal node");
  std::vector<int> support;
  for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
    bool charged = false;
    for (const auto& m : n.measures)
      if (m[pos] > 0.0) {
        charged = true;
        break;
      }
    if (charged) support.push_back(static_cast<int>(pos));
  }
  return support;
}

std::uint64_t product_measure_count(const ScenarioTree& tree) {
  std::uint64_t count = 1;
  for (int i : tree.non_terminal()) {
    const std::uint64_t k = tree.node(i).measures.size();
    if (count > UINT64_MAX / k) return UINT64_MAX;
    count *= k;
  }
  return count;
}

void for_each_product_measure(const ScenarioTree& tree, std::uint64_t cap,
                              const std::function<void(const ProductMeasure&)>& fn) {
  const std::uint64_t count = product_measure_count(tree);
  if (count > cap)
    throw CapExceeded("product-measure count " + std::to_string(count) +
                      " exceeds cap " + std::to_string(cap));

  const auto& nodes = tree.non_terminal();
  ProductMeasure pm;
  pm.choice.assign(nodes.size(), 0);
  pm.leaf_prob.assign(tree.leaves().size(), 0.0);

  // Map node index -> slot in pm.choice.
  std::map<int, int> slot;
  for (std::size_t s = 0; s < nodes.size(); ++s) slot[nodes[s]] = static_cast<int>(s);

  const auto materialize = [&] {
    for (std::size_t li = 0; li < tree.leaves().size(); ++li) {
      double p = 1.0;
      int u = tree.leaves()[li];
      while (tree.node(u).parent >= 0) {
        const TreeNode& parent = tree.node(tree.node(u).parent);
        const int mi = pm.choice[slot.at(tree.node(u).parent)];
        p *= parent.measures[mi][tree.node(u).child_pos];
        u = tree.node(u).parent;
      }
      pm.leaf_prob[li] = p;
    }
    fn(pm);
  };

  // Mixed-radix counter over the non-terminal nodes.
  while (true) {
    materialize();
    std::size_t k = 0;
    for (; k < nodes.size(); ++k) {
      if (++pm.choice[k] < static_cast<int>(tree.node(nodes[k]).measures.size())) break;
      pm.choice[k] = 0;
    }
    if (k == nodes.size()) break;
  }
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

std::string preset_key(Preset p) {
  switch (p) {
    case Preset::Frictionless: return "frictionless";
    case Preset::ProportionalTC: return "proportional_tc";
    case Preset::Liquidation: return "liquidation";
    case Preset::CustomExpr: return "custom_expr";
  }
  return "?";
}

Preset parse_preset(const std::string& s) {
  if (s == "frictionless") return Preset::Frictionless;
  if (s == "proportional_tc") return Preset::ProportionalTC;
  if (s == "liquidation") return Preset::Liquidation;
  if (s == "custom_expr") return Preset::CustomExpr;
  fail("model.preset: unknown preset '" + s + "'");
}

double get_num(const json& j, const std::string& path) {
  check(j.is_number(), path + ": expected a number");
  return j.get<double>();
}

double get_slope(const json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return kPosInf;
  return get_num(j, path);
}

std::vector<double> get_vec(const json& j, const std::string& path) {
  check(j.is_array(), path + ": expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Utility parse_utility(const json& j) {
  check(j.is_object(), "model.utility: expected an object");
  check(j.contains("kind"), "model.utility.kind: missing");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "exponential")
      return Utility::exponential(get_num(j.at("gamma"), "model.utility.gamma"));
    if (kind == "capped_linear")
      return Utility::capped_linear(get_num(j.at("cap"), "model.utility.cap"));
    if (kind == "piecewise_linear") {
      std::vector<double> breaks = get_vec(j.at("breaks"), "model.utility.breaks");
      check(j.at("slopes").is_array(), "model.utility.slopes: expected an array");
      std::vector<double> slopes;
      for (std::size_t i = 0; i < j.at("slopes").size(); ++i)
        slopes.push_back(get_slope(j.at("slopes")[i],
                                   "model.utility.slopes[" + std::to_string(i) + "]"));
      const double v1 = j.contains("value_at_first_break")
                            ? get_num(j.at("value_at_first_break"),
                                      "model.utility.value_at_first_break")
                            : 0.0;
      return Utility::piecewise_linear(std::move(breaks), std::move(slopes), v1);
    }
  } catch (const std::invalid_argument& e) {
    fail(std::string("model.utility: ") + e.what());
  }
  fail("model.utility.kind: unknown kind '" + kind + "'");
}

json utility_to_json(const Utility& u) {
  json j;
  switch (u.kind) {
    case Utility::Kind::Exponential:
      j["kind"] = "exponential";
      j["gamma"] = u.gamma;
      break;
    case Utility::Kind::CappedLinear:
      j["kind"] = "capped_linear";
      j["cap"] = u.cap;
      break;
    case Utility::Kind::PiecewiseLinear:
      j["kind"] = "piecewise_linear";
      j["breaks"] = u.breaks;
      j["slopes"] = json::array();
      for (double s : u.slopes) {
        if (s == kPosInf)
          j["slopes"].push_back("inf");
        else
          j["slopes"].push_back(s);
      }
      j["value_at_first_break"] = u.value_at_first_break;
      break;
  }
  return j;
}

ConcaveExpr parse_expr(const json& j, int dim, const std::string& path) {
  check(j.is_object(), path + ": expected an expression object");
  check(j.contains("op"), path + ".op: missing");
  const std::string op = j.at("op").get<std::string>();
  try {
    if (op == "affine" || op == "neg_abs") {
      std::vector<double> a = get_vec(j.at("a"), path + ".a");
      check(static_cast<int>(a.size()) == dim,
            path + ".a: expected length " + std::to_string(dim));
      const double b = j.contains("b") ? get_num(j.at("b"), path + ".b") : 0.0;
      return op == "affine" ? ConcaveExpr::affine(std::move(a), b)
                            : ConcaveExpr::neg_abs_affine(std::move(a), b);
    }
    if (op == "neg_quad") {
      check(j.at("Q").is_array(), path + ".Q: expected a matrix");
      Eigen::MatrixXd Q(dim, dim);
      check(static_cast<int>(j.at("Q").size()) == dim, path + ".Q: expected " +
                                                           std::to_string(dim) + " rows");
      for (int r = 0; r < dim; ++r) {
        const auto row = get_vec(j.at("Q")[r], path + ".Q[" + std::to_string(r) + "]");
        check(static_cast<int>(row.size()) == dim, path + ".Q: ragged matrix");
        for (int c = 0; c < dim; ++c) Q(r, c) = row[c];
      }
      return ConcaveExpr::neg_quadratic(std::move(Q));
    }
    if (op == "sum" || op == "min") {
      check(j.contains("children") && j.at("children").is_array() && !j.at("children").empty(),
            path + ".children: expected a nonempty array");
      std::vector<ConcaveExpr> kids;
      for (std::size_t i = 0; i < j.at("children").size(); ++i)
        kids.push_back(parse_expr(j.at("children")[i], dim,
                                  path + ".children[" + std::to_string(i) + "]"));
      return op == "sum" ? ConcaveExpr::sum(std::move(kids))
                         : ConcaveExpr::min_of(std::move(kids));
    }
    if (op == "scale") {
      return ConcaveExpr::scale_nonneg(get_num(j.at("lambda"), path + ".lambda"),
                                       parse_expr(j.at("child"), dim, path + ".child"));
    }
    if (op == "compose") {
      return ConcaveExpr::compose(parse_utility(j.at("utility")),
                                  parse_expr(j.at("child"), dim, path + ".child"));
    }
  } catch (const std::invalid_argument& e) {
    fail(path + ": " + e.what());
  }
  fail(path + ".op: unknown op '" + op + "'");
}

json expr_to_json(const ExprNode& n) {
  json j;
  switch (n.op) {
    case ExprNode::Op::Affine:
    case ExprNode::Op::NegAbsAffine:
      j["op"] = n.op == ExprNode::Op::Affine ? "affine" : "neg_abs";
      j["a"] = n.a;
      j["b"] = n.b;
      break;
    case ExprNode::Op::NegQuadratic: {
      j["op"] = "neg_quad";
      json rows = json::array();
      for (int r = 0; r < n.Q.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < n.Q.cols(); ++c) row.push_back(n.Q(r, c));
        rows.push_back(std::move(row));
      }
      j["Q"] = std::move(rows);
      break;
    }
    case ExprNode::Op::Sum:
    case ExprNode::Op::Min: {
      j["op"] = n.op == ExprNode::Op::Sum ? "sum" : "min";
      json kids = json::array();
      for (const auto& k : n.kids) kids.push_back(expr_to_json(*k));
      j["children"] = std::move(kids);
      break;
    }
    case ExprNode::Op::ScaleNonneg:
      j["op"] = "scale";
      j["lambda"] = n.scale;
      j["child"] = expr_to_json(*n.kids.front());
      break;
    case ExprNode::Op::Compose:
      j["op"] = "compose";
      j["utility"] = utility_to_json(n.utility);
      j["child"] = expr_to_json(*n.kids.front());
      break;
  }
  return j;
}

}  // namespace

std::string preset_name(Preset p) { return preset_key(p); }

// ---------------------------------------------------------------------------
// load_config

Config load_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  check(doc.is_object(), "top level: expected an object");
  check(doc.contains("tree"), "tree: missing");
  check(doc.contains("model"), "model: missing");

  // --- tree ---
  const json& jt = doc.at("tree");
  check(jt.is_object() && jt.contains("nodes") && jt.at("nodes").is_array(),
        "tree.nodes: expected an array");
  const json& jnodes = jt.at("nodes");
  check(!jnodes.empty(), "tree.nodes: empty");

  std::map<std::string, int> index_of;
  std::vector<TreeNode> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string path = "tree.nodes[" + std::to_string(i) + "]";
    const json& jn = jnodes[i];
    check(jn.is_object(), path + ": expected an object");
    TreeNode n;
    check(jn.contains("id") && jn.at("id").is_string(), path + ".id: missing or not a string");
    n.id = jn.at("id").get<std::string>();
    check(!n.id.empty(), path + ".id: empty");
    check(!index_of.count(n.id), path + ".id: duplicate node id '" + n.id + "'");
    index_of[n.id] = static_cast<int>(i);
    check(jn.contains("prices"), path + ".prices: missing");
    n.prices = get_vec(jn.at("prices"), path + ".prices");
    if (jn.contains("measures")) {
      check(jn.at("measures").is_array(), path + ".measures: expected an array");
      for (std::size_t mi = 0; mi < jn.at("measures").size(); ++mi)
        n.measures.push_back(
            get_vec(jn.at("measures")[mi], path + ".measures[" + std::to_string(mi) + "]"));
    }
    nodes.push_back(std::move(n));
  }
  std::vector<bool> referenced(nodes.size(), false);
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string path = "tree.nodes[" + std::to_string(i) + "].children";
    if (!jnodes[i].contains("children")) continue;
    const json& jc = jnodes[i].at("children");
    check(jc.is_array(), path + ": expected an array of node ids");
    for (const auto& c : jc) {
      check(c.is_string(), path + ": child ids must be strings");
      const auto it = index_of.find(c.get<std::string>());
      check(it != index_of.end(),
            path + ": unknown child id '" + c.get<std::string>() + "'");
      nodes[i].children.push_back(it->second);
      check(!referenced[it->second],
            path + ": node '" + c.get<std::string>() + "' referenced twice");
      referenced[it->second] = true;
    }
  }
  int root = -1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!referenced[i]) {
      check(root < 0, "tree: multiple roots ('" + nodes[root].id + "' and '" +
                          nodes[i].id + "')");
      root = static_cast<int>(i);
    }
  }
  check(root >= 0, "tree: no root (cycle?)");
  ScenarioTree tree(std::move(nodes), root);

  // --- model ---
  const json& jm = doc.at("model");
  check(jm.is_object(), "model: expected an object");
  ModelSpec model;
  check(jm.contains("preset") && jm.at("preset").is_string(), "model.preset: missing");
  model.preset = parse_preset(jm.at("preset").get<std::string>());
  model.d = jm.contains("d") ? jm.at("d").get<int>() : 1;
  check(model.d >= 1, "model.d: must be >= 1");
  if (jm.contains("x")) model.x = get_num(jm.at("x"), "model.x");
  if (jm.contains("X")) model.X = get_num(jm.at("X"), "model.X");
  if (jm.contains("kappa")) model.kappa = get_num(jm.at("kappa"), "model.kappa");
  if (jm.contains("eta")) model.eta = get_num(jm.at("eta"), "model.eta");
  if (jm.contains("price_floor"))
    model.price_floor = get_num(jm.at("price_floor"), "model.price_floor");
  check(jm.contains("utility"), "model.utility: missing");
  model.utility = parse_utility(jm.at("utility"));
  check(model.kappa >= 0.0 && model.kappa < 1.0, "model.kappa: must lie in [0,1)");
  check(model.eta >= 0.0, "model.eta: must be >= 0");

  const int T = tree.depth();
  const int m = tree.price_dim();
  switch (model.preset) {
    case Preset::Frictionless:
    case Preset::ProportionalTC: {
      check(model.x > 0.0, "model.x: initial capital must be > 0");
      check(model.d == m, "model.d: must equal the price dimension " + std::to_string(m));
      for (int i = 0; i < tree.node_count(); ++i)
        for (double p : tree.node(i).prices)
          check(p >= 0.0, "node '" + tree.node(i).id + "': negative price in a " +
                              preset_key(model.preset) + " model");
      for (double p : tree.node(tree.root()).prices)
        check(p > 0.0, "root prices must be > 0");
      break;
    }
    case Preset::Liquidation: {
      check(model.X > 0.0, "model.X: initial inventory must be > 0");
      check(model.d == 1 && m == 1, "liquidation preset requires d = 1 and scalar prices");
      check(model.price_floor <= 0.0, "model.price_floor: must be <= 0");
      for (int i = 0; i < tree.node_count(); ++i)
        check(tree.node(i).prices[0] >= model.price_floor,
              "node '" + tree.node(i).id + "': price below the declared floor");
      break;
    }
    case Preset::CustomExpr: {
      check(jm.contains("expr"), "model.expr: required for the custom_expr preset");
      CustomPayoff cp{parse_expr(jm.at("expr"), model.d * T, "model.expr"), std::nullopt};
      if (jm.contains("certificate")) {
        const json& jc = jm.at("certificate");
        InteriorityCertificate cert;
        cert.h0 = get_vec(jc.at("h0"), "model.certificate.h0");
        check(static_cast<int>(cert.h0.size()) == model.d * T,
              "model.certificate.h0: expected length " + std::to_string(model.d * T));
        cert.eps = get_num(jc.at("eps"), "model.certificate.eps");
        cert.c = get_num(jc.at("c"), "model.certificate.c");
        check(cert.eps > 0.0 && cert.c > 0.0, "model.certificate: eps and c must be > 0");
        cp.certificate = std::move(cert);
      }
      model.custom = std::move(cp);
      break;
    }
  }

  // --- solver ---
  SolverConfig solver;
  if (doc.contains("solver")) {
    const json& js = doc.at("solver");
    check(js.is_object(), "solver: expected an object");
    if (js.contains("tol")) solver.tol = get_num(js.at("tol"), "solver.tol");
    check(solver.tol > 0.0, "solver.tol: must be > 0");
    if (js.contains("grid")) {
      const auto g = get_vec(js.at("grid"), "solver.grid");
      check(g.size() == 3, "solver.grid: expected [lo, hi, step]");
      solver.grid_lo = g[0];
      solver.grid_hi = g[1];
      solver.grid_step = g[2];
      check(solver.grid_step > 0.0 && solver.grid_hi > solver.grid_lo,
            "solver.grid: need lo < hi and step > 0");
    }
    if (js.contains("refine")) solver.grid_refine = js.at("refine").get<int>();
    if (js.contains("caps")) {
      const json& jc = js.at("caps");
      if (jc.contains("measures")) solver.caps.measures = jc.at("measures").get<std::uint64_t>();
      if (jc.contains("grid")) solver.caps.grid = jc.at("grid").get<std::uint64_t>();
      if (jc.contains("memo")) solver.caps.memo = jc.at("memo").get<std::uint64_t>();
    }
  }

  return Config{std::move(tree), std::move(model), solver};
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace {

void dump_canonical(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: already sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += fmt_g17(j.get<double>());
      break;
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string serialize_config(const Config& cfg) {
  json doc;

  json jnodes = json::array();
  for (int i = 0; i < cfg.tree.node_count(); ++i) {
    const TreeNode& n = cfg.tree.node(i);
    json jn;
    jn["id"] = n.id;
    json kids = json::array();
    for (int c : n.children) kids.push_back(cfg.tree.node(c).id);
    jn["children"] = std::move(kids);
    json prices = json::array();
    for (double p : n.prices) prices.push_back(p);
    jn["prices"] = std::move(prices);
    if (!n.measures.empty()) {
      json ms = json::array();
      for (const auto& mrow : n.measures) {
        json row = json::array();
        for (double p : mrow) row.push_back(p);
        ms.push_back(std::move(row));
      }
      jn["measures"] = std::move(ms);
    }
    jnodes.push_back(std::move(jn));
  }
  doc["tree"]["nodes"] = std::move(jnodes);

  json jm;
  jm["preset"] = preset_key(cfg.model.preset);
  jm["d"] = cfg.model.d;
  if (cfg.model.preset == Preset::Liquidation)
    jm["X"] = cfg.model.X;
  else
    jm["x"] = cfg.model.x;
  jm["kappa"] = cfg.model.kappa;
  jm["eta"] = cfg.model.eta;
  jm["price_floor"] = cfg.model.price_floor;
  jm["utility"] = utility_to_json(cfg.model.utility);
  if (cfg.model.custom) {
    jm["expr"] = expr_to_json(cfg.model.custom->expr.root());
    if (cfg.model.custom->certificate) {
      const auto& cert = *cfg.model.custom->certificate;
      jm["certificate"]["h0"] = cert.h0;
      jm["certificate"]["eps"] = cert.eps;
      jm["certificate"]["c"] = cert.c;
    }
  }
  doc["model"] = std::move(jm);

  json js;
  js["tol"] = cfg.solver.tol;
  js["grid"] = {cfg.solver.grid_lo, cfg.solver.grid_hi, cfg.solver.grid_step};
  js["refine"] = cfg.solver.grid_refine;
  js["caps"]["measures"] = cfg.solver.caps.measures;
  js["caps"]["grid"] = cfg.solver.caps.grid;
  js["caps"]["memo"] = cfg.solver.caps.memo;
  doc["solver"] = std::move(js);

  std::string out;
  dump_canonical(doc, out);
  out += '\n';
  return out;
}

}  // namespace robustdp
