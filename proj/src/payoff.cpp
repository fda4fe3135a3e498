#include "robustdp/payoff.hpp"

#include <algorithm>
#include <cmath>

namespace robustdp {

namespace {

// Price of asset j at depth t along the path (node indices root..leaf).
double price_at(const ScenarioTree& tree, const std::vector<int>& path, int t, int j) {
  return tree.node(path[t]).prices[j];
}

ConcaveExpr compile_frictionless(const ModelSpec& model, const ScenarioTree& tree,
                                 const std::vector<int>& path) {
  const int T = tree.depth();
  const int d = model.d;
  std::vector<double> a(d * T, 0.0);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < d; ++j)
      a[t * d + j] = price_at(tree, path, t + 1, j) - price_at(tree, path, t, j);
  return ConcaveExpr::compose(model.utility, ConcaveExpr::affine(std::move(a), model.x));
}

ConcaveExpr compile_proportional_tc(const ModelSpec& model, const ScenarioTree& tree,
                                    const std::vector<int>& path) {
  const int T = tree.depth();
  const int d = model.d;
  const int n = d * T;
  std::vector<ConcaveExpr> terms;
  std::vector<double> a(n, 0.0);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < d; ++j)
      a[t * d + j] = price_at(tree, path, t + 1, j) - price_at(tree, path, t, j);
  terms.push_back(ConcaveExpr::affine(std::move(a), model.x));
  // Rebalancing penalty kappa * S_t^j * |H_t^j - H_{t-1}^j|, H_{-1} = 0.
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < d; ++j) {
      const double lambda = model.kappa * price_at(tree, path, t, j);
      if (lambda == 0.0) continue;
      std::vector<double> diff(n, 0.0);
      diff[t * d + j] = 1.0;
      if (t > 0) diff[(t - 1) * d + j] = -1.0;
      terms.push_back(
          ConcaveExpr::scale_nonneg(lambda, ConcaveExpr::neg_abs_affine(std::move(diff), 0.0)));
    }
  }
  ConcaveExpr wealth =
      terms.size() == 1 ? std::move(terms.front()) : ConcaveExpr::sum(std::move(terms));
  return ConcaveExpr::compose(model.utility, std::move(wealth));
}

ConcaveExpr compile_liquidation(const ModelSpec& model, const ScenarioTree& tree,
                                const std::vector<int>& path) {
  const int T = tree.depth();
  const double X = model.X;
  const double eta = model.eta;
  const double s0 = price_at(tree, path, 0, 0);

  // V = X*S_0 + sum_t H_t (S_{t+1}-S_t) - eta * sum_{t=0..T} (H_{t-1}-H_t)^2
  // with H_{-1} = X, H_T = 0. Expanding the t = 0 square moves 2*eta*X*H_0
  // into the linear part and -eta*X^2 into the constant.
  std::vector<double> a(T, 0.0);
  for (int t = 0; t < T; ++t)
    a[t] = price_at(tree, path, t + 1, 0) - price_at(tree, path, t, 0);
  double b = X * s0;
  std::vector<ConcaveExpr> terms;
  if (eta > 0.0) {
    a[0] += 2.0 * eta * X;
    b -= eta * X * X;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(T + 1, T);
    D(0, 0) = 1.0;  // (X - H_0)^2 contributes H_0^2
    for (int t = 1; t < T; ++t) {
      D(t, t - 1) = 1.0;
      D(t, t) = -1.0;
    }
    D(T, T - 1) = 1.0;  // (H_{T-1} - 0)^2
    terms.push_back(ConcaveExpr::neg_quadratic(eta * (D.transpose() * D)));
  }
  terms.insert(terms.begin(), ConcaveExpr::affine(std::move(a), b));
  ConcaveExpr wealth =
      terms.size() == 1 ? std::move(terms.front()) : ConcaveExpr::sum(std::move(terms));
  return ConcaveExpr::compose(model.utility, std::move(wealth));
}

}  // namespace

ConcaveExpr compile_leaf(const ModelSpec& model, const ScenarioTree& tree, int leaf) {
  if (!tree.is_terminal(leaf))
    throw std::invalid_argument("compile_leaf: node '" + tree.node(leaf).id +
                                "' is not terminal");
  const std::vector<int> path = tree.path_to(leaf);
  switch (model.preset) {
    case Preset::Frictionless:
      return compile_frictionless(model, tree, path);
    case Preset::ProportionalTC:
      return compile_proportional_tc(model, tree, path);
    case Preset::Liquidation:
      return compile_liquidation(model, tree, path);
    case Preset::CustomExpr:
      return model.custom->expr;
  }
  throw std::logic_error("unknown preset");
}

ConcaveExpr compile_preset(const ModelSpec& model, const ScenarioTree& tree,
                           const PathPrefix& leaf) {
  if (static_cast<int>(leaf.size()) != tree.depth())
    throw std::invalid_argument("compile_preset: path prefix must reach a leaf (length " +
                                std::to_string(tree.depth()) + ")");
  return compile_leaf(model, tree, tree.node_at(leaf));
}

std::vector<ConcaveExpr> compile_all_leaves(const ModelSpec& model, const ScenarioTree& tree) {
  std::vector<ConcaveExpr> exprs;
  exprs.reserve(tree.leaves().size());
  for (int leaf : tree.leaves()) exprs.push_back(compile_leaf(model, tree, leaf));
  return exprs;
}

double direct_wealth(const ModelSpec& model, const ScenarioTree& tree, int leaf,
                     std::span<const double> z) {
  const std::vector<int> path = tree.path_to(leaf);
  const int T = tree.depth();
  const int d = model.d;
  switch (model.preset) {
    case Preset::Frictionless: {
      double v = model.x;
      for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j)
          v += z[t * d + j] * (price_at(tree, path, t + 1, j) - price_at(tree, path, t, j));
      return v;
    }
    case Preset::ProportionalTC: {
      double v = model.x;
      for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) {
          const double prev = t > 0 ? z[(t - 1) * d + j] : 0.0;
          v += z[t * d + j] * (price_at(tree, path, t + 1, j) - price_at(tree, path, t, j));
          v -= model.kappa * price_at(tree, path, t, j) * std::abs(z[t * d + j] - prev);
        }
      return v;
    }
    case Preset::Liquidation: {
      double v = model.X * price_at(tree, path, 0, 0);
      for (int t = 0; t < T; ++t)
        v += z[t] * (price_at(tree, path, t + 1, 0) - price_at(tree, path, t, 0));
      for (int t = 0; t <= T; ++t) {
        const double prev = t > 0 ? z[t - 1] : model.X;
        const double cur = t < T ? z[t] : 0.0;
        const double traded = prev - cur;
        v -= traded * (model.eta * traded);
      }
      return v;
    }
    case Preset::CustomExpr:
      throw std::invalid_argument("direct_wealth: no closed form for custom expressions");
  }
  throw std::logic_error("unknown preset");
}

// ---------------------------------------------------------------------------
// Interiority certificates

double certificate_margin(const InteriorityCertificate& cert, const ModelSpec& model,
                          const ScenarioTree& tree, int samples) {
  const auto exprs = compile_all_leaves(model, tree);
  const int n = static_cast<int>(cert.h0.size());
  auto rng = rng_for(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = kPosInf;
  std::vector<double> z(n);
  for (int s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = gauss(rng);
      norm2 += z[i] * z[i];
    }
    const double norm = std::sqrt(std::max(norm2, 1e-300));
    const double radius = cert.eps * std::pow(unif(rng), 1.0 / n);
    for (int i = 0; i < n; ++i) z[i] = cert.h0[i] + z[i] / norm * radius;
    for (const auto& e : exprs) worst = std::min(worst, e.evaluate(z) + cert.c);
  }
  return worst;
}

InteriorityCertificate check_interiority(const ModelSpec& model, const ScenarioTree& tree) {
  const int T = tree.depth();
  const int d = model.d;
  InteriorityCertificate cert;

  switch (model.preset) {
    case Preset::Frictionless:
    case Preset::ProportionalTC: {
      const auto& s0 = tree.node(tree.root()).prices;
      const double smax = *std::max_element(s0.begin(), s0.end());
      double ssum = 0.0;
      for (double s : s0) ssum += s;
      const double rho = model.x / (2.0 * d * T * smax);
      cert.h0.assign(d * T, 0.0);
      for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) cert.h0[t * d + j] = (T - t) * rho;
      double wealth_floor = 0.0;
      if (model.preset == Preset::Frictionless) {
        cert.eps = 0.9 * (rho / 3.0);
        wealth_floor = model.x - rho * (1.0 / 3.0 + T) * ssum;
      } else {
        const double bound =
            rho * std::min(1.0 / 3.0, T * (1.0 - model.kappa) / (1.0 + model.kappa));
        cert.eps = 0.9 * bound;
        wealth_floor = model.x - ssum * (T * rho + cert.eps) * (1.0 + model.kappa);
      }
      cert.c = std::max(-model.utility.value(wealth_floor), 1e-12);
      break;
    }
    case Preset::Liquidation: {
      const double X = model.X;
      cert.h0.assign(T, 0.0);
      for (int t = 0; t < T; ++t)
        cert.h0[t] = X * (1.0 - static_cast<double>(t + 1) / (T + 1));
      cert.eps = 0.9 * X / (3.0 * (T + 1));
      // Every increment in the ball stays in (0, inc_max]; prices sit above
      // the declared floor, so V >= floor*X - (T+1)*inc_max*g(inc_max).
      const double inc_max = 5.0 * X / (3.0 * (T + 1));
      const double wealth_floor =
          model.price_floor * X - (T + 1) * inc_max * (model.eta * inc_max);
      cert.c = std::max(-model.utility.value(wealth_floor), 1e-12);
      break;
    }
    case Preset::CustomExpr: {
      if (!model.custom || !model.custom->certificate)
        throw ConfigError(
            "custom_expr preset has no automatic certificate; supply one in config");
      cert = *model.custom->certificate;
      break;
    }
  }

  const double margin = certificate_margin(cert, model, tree);
  if (margin < -1e-12)
    throw SolveError("interiority certificate violated: sampled payoff dips " +
                     fmt_short(-margin) + " below -c");
  return cert;
}

}  // namespace robustdp
