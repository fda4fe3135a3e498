#include "doctest.h"

#include <cmath>

#include "robustdp/scenario.hpp"
#include "test_support.hpp"

using namespace robustdp;

namespace {

ScenarioTree tiny_tree(std::vector<std::vector<double>> measures,
                       std::vector<double> child_prices = {2.0, 0.5}) {
  std::vector<TreeNode> nodes;
  TreeNode root;
  root.id = "root";
  root.prices = {1.0};
  root.measures = std::move(measures);
  nodes.push_back(root);
  for (std::size_t i = 0; i < child_prices.size(); ++i) {
    TreeNode c;
    c.id = "c" + std::to_string(i);
    c.prices = {child_prices[i]};
    nodes.push_back(c);
    nodes[0].children.push_back(static_cast<int>(i) + 1);
  }
  return ScenarioTree(std::move(nodes), 0);
}

}  // namespace

TEST_CASE("minimal legal instance loads") {
  const std::string doc = R"({
    "tree": {"nodes": [
      {"id": "root", "children": ["a", "b"], "prices": [1.0], "measures": [[0.5, 0.5]]},
      {"id": "a", "prices": [2.0]},
      {"id": "b", "prices": [0.5]}
    ]},
    "model": {"preset": "frictionless", "d": 1, "x": 1.0,
              "utility": {"kind": "exponential", "gamma": 1.0}}
  })";
  const Config cfg = load_config(doc);
  CHECK(cfg.tree.node_count() == 3);
  CHECK(cfg.tree.depth() == 1);
  CHECK(cfg.tree.leaves().size() == 2);
  CHECK(cfg.model.preset == Preset::Frictionless);
}

TEST_CASE("bad probability sum is rejected with node id") {
  const std::string doc = R"({
    "tree": {"nodes": [
      {"id": "root", "children": ["a", "b"], "prices": [1.0], "measures": [[0.6, 0.5]]},
      {"id": "a", "prices": [2.0]},
      {"id": "b", "prices": [0.5]}
    ]},
    "model": {"preset": "frictionless", "d": 1, "x": 1.0,
              "utility": {"kind": "exponential", "gamma": 1.0}}
  })";
  try {
    load_config(doc);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("probabilities sum to 1.1") != std::string::npos);
    CHECK(msg.find("at node root") != std::string::npos);
  }
}

TEST_CASE("structural validation") {
  SUBCASE("duplicate ids") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a"], "prices": [1.0], "measures": [[1.0]]},
        {"id": "a", "prices": [1.0]},
        {"id": "a", "prices": [1.0]}
      ]},
      "model": {"preset": "frictionless", "d": 1, "x": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("uneven leaf depth") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a", "b"], "prices": [1.0], "measures": [[0.5, 0.5]]},
        {"id": "a", "prices": [1.0]},
        {"id": "b", "children": ["c"], "prices": [1.0], "measures": [[1.0]]},
        {"id": "c", "prices": [1.0]}
      ]},
      "model": {"preset": "frictionless", "d": 1, "x": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("unknown child id") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["ghost"], "prices": [1.0], "measures": [[1.0]]}
      ]},
      "model": {"preset": "frictionless", "d": 1, "x": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("parse error carries position") {
    CHECK_THROWS_AS(load_config("{ not json"), ConfigError);
  }
}

TEST_CASE("two-period fixture round-trips through canonical serialization") {
  const Config cfg = test::load_fixture("fl_t2_d1.cfg");
  CHECK(cfg.tree.node_count() == 7);
  CHECK(cfg.tree.non_terminal().size() == 3);

  const std::string canon = serialize_config(cfg);
  const Config cfg2 = load_config(canon);
  REQUIRE(cfg2.tree.node_count() == cfg.tree.node_count());
  for (int i = 0; i < cfg.tree.node_count(); ++i) {
    const TreeNode& a = cfg.tree.node(i);
    const TreeNode& b = cfg2.tree.node(i);
    CHECK(a.id == b.id);
    CHECK(a.children == b.children);
    CHECK(a.prices == b.prices);
    CHECK(a.measures == b.measures);
  }
  // Canonical form is a fixed point.
  CHECK(serialize_config(cfg2) == canon);
}

TEST_CASE("union_support") {
  SUBCASE("union of point masses") {
    const ScenarioTree t = tiny_tree({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(union_support(t, 0) == std::vector<int>{0, 1});
  }
  SUBCASE("polar child dropped") {
    const ScenarioTree t = tiny_tree({{0.5, 0.5, 0.0}}, {2.0, 0.5, 1.0});
    CHECK(union_support(t, 0) == std::vector<int>{0, 1});
  }
  SUBCASE("middle child never charged") {
    const ScenarioTree t = tiny_tree({{1.0, 0.0, 0.0}, {0.5, 0.0, 0.5}}, {2.0, 0.5, 1.0});
    CHECK(union_support(t, 0) == std::vector<int>{0, 2});
  }
  SUBCASE("adding a measure never shrinks the support") {
    std::vector<std::vector<double>> base = {{1.0, 0.0, 0.0}};
    const auto s0 = union_support(tiny_tree(base, {2.0, 0.5, 1.0}), 0);
    base.push_back({0.0, 0.25, 0.75});
    const auto s1 = union_support(tiny_tree(base, {2.0, 0.5, 1.0}), 0);
    for (int c : s0) CHECK(std::find(s1.begin(), s1.end(), c) != s1.end());
  }
}

TEST_CASE("product measures") {
  SUBCASE("one period, two measures") {
    const ScenarioTree t = tiny_tree({{0.5, 0.5}, {0.3, 0.7}});
    int count = 0;
    for_each_product_measure(t, 1000, [&](const ProductMeasure&) { ++count; });
    CHECK(count == 2);
  }
  SUBCASE("two periods, 2^3 selections, probabilities sum to one") {
    const Config cfg = test::load_fixture("fl_t2_d1.cfg");
    CHECK(product_measure_count(cfg.tree) == 8);
    int count = 0;
    for_each_product_measure(cfg.tree, 1000, [&](const ProductMeasure& pm) {
      ++count;
      double sum = 0.0;
      for (double p : pm.leaf_prob) sum += p;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    });
    CHECK(count == 8);
  }
  SUBCASE("cap refusal names the count") {
    const Config cfg = test::load_fixture("fl_t2_d1.cfg");
    try {
      for_each_product_measure(cfg.tree, 4, [](const ProductMeasure&) {});
      FAIL("expected CapExceeded");
    } catch (const CapExceeded& e) {
      CHECK(std::string(e.what()).find("8") != std::string::npos);
    }
  }
  SUBCASE("conditional one-step law equals an ambiguity-set member exactly") {
    const Config cfg = test::load_fixture("fl_t2_d1.cfg");
    const ScenarioTree& t = cfg.tree;
    for_each_product_measure(t, 1000, [&](const ProductMeasure& pm) {
      // Reconstruct the conditional law at each non-terminal node from the
      // leaf probabilities and match it against the chosen member.
      for (std::size_t s = 0; s < t.non_terminal().size(); ++s) {
        const int node = t.non_terminal()[s];
        const auto& chosen = t.node(node).measures[pm.choice[s]];
        // Node mass = sum of leaf probs below it.
        std::vector<double> child_mass(t.node(node).children.size(), 0.0);
        double node_mass = 0.0;
        for (std::size_t li = 0; li < t.leaves().size(); ++li) {
          int u = t.leaves()[li];
          // Walk up to see whether this leaf sits below `node` and through
          // which child.
          int via = -1;
          for (int w = u; w >= 0; w = t.node(w).parent) {
            if (t.node(w).parent == node) via = t.node(w).child_pos;
            if (w == node) break;
          }
          bool below = false;
          for (int w = u; w >= 0; w = t.node(w).parent)
            if (w == node) below = true;
          if (!below) continue;
          node_mass += pm.leaf_prob[li];
          if (via >= 0) child_mass[via] += pm.leaf_prob[li];
        }
        if (node_mass <= 0.0) continue;  // unreachable under this selection
        for (std::size_t pos = 0; pos < child_mass.size(); ++pos)
          CHECK(std::abs(child_mass[pos] / node_mass - chosen[pos]) <= 1e-12);
      }
    });
  }
}

TEST_CASE("model validation per preset") {
  SUBCASE("kappa bound") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a"], "prices": [1.0], "measures": [[1.0]]},
        {"id": "a", "prices": [1.0]}
      ]},
      "model": {"preset": "proportional_tc", "d": 1, "x": 1.0, "kappa": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("liquidation requires d = 1") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a"], "prices": [1.0, 1.0], "measures": [[1.0]]},
        {"id": "a", "prices": [1.0, 1.0]}
      ]},
      "model": {"preset": "liquidation", "d": 2, "X": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("negative price rejected for frictionless") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a"], "prices": [1.0], "measures": [[1.0]]},
        {"id": "a", "prices": [-0.5]}
      ]},
      "model": {"preset": "frictionless", "d": 1, "x": 1.0,
                "utility": {"kind": "exponential", "gamma": 1.0}}
    })"),
                    ConfigError);
  }
  SUBCASE("unbounded utility rejected") {
    CHECK_THROWS_AS(load_config(R"({
      "tree": {"nodes": [
        {"id": "root", "children": ["a"], "prices": [1.0], "measures": [[1.0]]},
        {"id": "a", "prices": [1.0]}
      ]},
      "model": {"preset": "frictionless", "d": 1, "x": 1.0,
                "utility": {"kind": "piecewise_linear", "breaks": [0.0],
                            "slopes": [2.0, 1.0], "value_at_first_break": 0.0}}
    })"),
                    ConfigError);
  }
}
