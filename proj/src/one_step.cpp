#include "robustdp/one_step.hpp"

#include <algorithm>
#include <cmath>

namespace robustdp {

namespace {

double expectation(const std::vector<std::function<double(std::span<const double>)>>& f,
                   const std::vector<double>& weights, std::span<const double> h) {
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double fi = f[i](h);
    if (is_neg_inf(fi)) return kNegInf;
    v += weights[i] * fi;
  }
  return v;
}

}  // namespace

double phi(const OneStepProblem& p, std::span<const double> h) {
  double best = kPosInf;
  for (const auto& m : p.measures) best = std::min(best, expectation(p.psi, m, h));
  return best;
}

double phi_inf(const OneStepProblem& p, std::span<const double> h) {
  double best = kPosInf;
  for (const auto& m : p.measures) best = std::min(best, expectation(p.psi_inf, m, h));
  return best;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section maximization on [lo, hi] for a concave (possibly -inf valued)
// objective. Keeps the incumbent inside the interval so -inf plateaus at both
// probes cannot discard the maximizer.
struct LineResult {
  double x;
  double value;
  long evals;
};

template <typename F>
LineResult golden_max(F&& f, double lo, double hi, double incumbent_x,
                      double incumbent_v) {
  double a = lo, b = hi;
  double best_x = incumbent_x, best_v = incumbent_v;
  long evals = 0;
  auto probe = [&](double x) {
    ++evals;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
    return v;
  };
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = probe(c), fd = probe(d);
  while (b - a > 1e-12 * (1.0 + std::abs(a) + std::abs(b)) && evals < 400) {
    bool drop_right;
    if (fc == fd) {
      // Ties (often both -inf): keep the side holding the incumbent.
      drop_right = best_x <= d;
    } else {
      drop_right = fc > fd;
    }
    if (drop_right) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = probe(d);
    }
  }
  return {best_x, best_v, evals};
}

}  // namespace

OneStepSolution robust_maximize(const OneStepProblem& p, const Cone& cone,
                                const LinearityResult& lin,
                                std::span<const double> h_center,
                                const MaximizeOptions& opt) {
  if (!lin.linear)
    throw NonlinearConeError(lin.certificate.value_or(std::vector<double>{}), opt.node_id);
  const int d = p.d;

  // Restrict to the orthogonal complement of the lineality space; phi is
  // constant along lineality directions (recession >= 0 both ways under the
  // upper bound) and coercive on the complement.
  const Eigen::MatrixXd L = lineality_basis(cone, lin);
  Eigen::MatrixXd B(d, d - L.cols());
  {
    // Complete L to an orthonormal basis of R^d.
    Eigen::MatrixXd full(d, d + L.cols());
    full.leftCols(L.cols()) = L;
    full.rightCols(d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(full);
    Eigen::MatrixXd q = qr.householderQ();
    // q's leading columns span col(L); the trailing ones are the complement.
    B = q.middleCols(L.cols(), d - L.cols());
  }
  const int dp = static_cast<int>(B.cols());

  const Eigen::VectorXd hc = Eigen::Map<const Eigen::VectorXd>(h_center.data(), d);
  const Eigen::VectorXd l_part = L.cols() > 0 ? (L * (L.transpose() * hc)).eval()
                                              : Eigen::VectorXd::Zero(d).eval();

  long iterations = 0;
  std::vector<double> hbuf(d);
  const auto to_h = [&](const Eigen::VectorXd& u) -> const std::vector<double>& {
    Eigen::VectorXd h = l_part + B * u;
    for (int i = 0; i < d; ++i) hbuf[i] = h(i);
    return hbuf;
  };
  const auto f = [&](const Eigen::VectorXd& u) {
    ++iterations;
    return phi(p, to_h(u));
  };

  OneStepSolution sol;
  if (dp == 0) {
    sol.h = to_h(Eigen::VectorXd(0));
    sol.value = phi(p, sol.h);
    sol.iterations = 1;
  } else {
    Eigen::VectorXd u0 = B.transpose() * hc;
    double f0 = f(u0);
    if (is_neg_inf(f0)) {
      // The interiority block keeps this finite along the optimal trajectory;
      // probed prefixes elsewhere may have an empty domain. Scan a few boxes
      // for a finite anchor before giving up with value -inf.
      auto rng = rng_for(opt.seed);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      for (double w = 1.0; w <= 64.0 && is_neg_inf(f0); w *= 4.0) {
        for (int k = 0; k < 64 && is_neg_inf(f0); ++k) {
          Eigen::VectorXd u = u0;
          for (int i = 0; i < dp; ++i) u(i) += w * unif(rng);
          const double v = f(u);
          if (!is_neg_inf(v)) {
            u0 = u;
            f0 = v;
          }
        }
      }
      if (is_neg_inf(f0)) {
        sol.h = to_h(u0);
        sol.value = kNegInf;
        sol.iterations = iterations;
        return sol;
      }
    }

    // Bracket: expand a box around u0 until every boundary sample falls below
    // the center value minus 1 (coercivity on the lineality complement).
    double w = 1.0;
    const auto boundary_below = [&](double width) {
      if (dp == 1) {
        Eigen::VectorXd u = u0;
        u(0) = u0(0) - width;
        if (f(u) >= f0 - 1.0) return false;
        u(0) = u0(0) + width;
        return f(u) < f0 - 1.0;
      }
      // Sample each face on a coarse lattice.
      const int grid = 5;
      for (int face = 0; face < 2 * dp; ++face) {
        const int axis = face / 2;
        const double sign = face % 2 ? 1.0 : -1.0;
        std::vector<int> idx(dp - 1, 0);
        while (true) {
          Eigen::VectorXd u = u0;
          u(axis) += sign * width;
          int k = 0;
          for (int i = 0; i < dp; ++i) {
            if (i == axis) continue;
            u(i) += width * (-1.0 + 2.0 * idx[k] / (grid - 1));
            ++k;
          }
          if (f(u) >= f0 - 1.0) return false;
          int carry = 0;
          for (; carry < dp - 1; ++carry) {
            if (++idx[carry] < grid) break;
            idx[carry] = 0;
          }
          if (carry == dp - 1) break;
        }
      }
      return true;
    };
    while (!boundary_below(w)) {
      w *= 2.0;
      if (w > opt.unbounded_guard)
        throw SolveError(
            "bracketing exceeded the unbounded guard at node '" + opt.node_id +
            "' (the objective fails to decay along some direction; this "
            "contradicts the cone computation)");
    }
    w *= 2.0;  // margin
    sol.bracket_halfwidth = w;

    Eigen::VectorXd lo = u0.array() - w;
    Eigen::VectorXd hi = u0.array() + w;

    const auto coordinate_descent = [&](Eigen::VectorXd u, double fu) {
      // Cyclic golden-section sweeps plus a few random-direction polish lines
      // (guards against stalling on kinks of the finite min).
      auto rng = rng_for(opt.seed + 1);
      std::normal_distribution<double> gauss(0.0, 1.0);
      double gain = kPosInf;
      for (int sweep = 0; sweep < 200 && gain >= opt.tol; ++sweep) {
        const double before = fu;
        for (int j = 0; j < dp; ++j) {
          auto line = [&](double xj) {
            Eigen::VectorXd v = u;
            v(j) = xj;
            return f(v);
          };
          const LineResult r = golden_max(line, lo(j), hi(j), u(j), fu);
          u(j) = r.x;
          fu = r.value;
        }
        if (dp >= 2) {
          for (int t = 0; t < 4; ++t) {
            Eigen::VectorXd dir(dp);
            for (int i = 0; i < dp; ++i) dir(i) = gauss(rng);
            dir.normalize();
            // Stay inside the box.
            double tmax = kPosInf, tmin = -kPosInf;
            for (int i = 0; i < dp; ++i) {
              if (dir(i) > 1e-12) {
                tmax = std::min(tmax, (hi(i) - u(i)) / dir(i));
                tmin = std::max(tmin, (lo(i) - u(i)) / dir(i));
              } else if (dir(i) < -1e-12) {
                tmax = std::min(tmax, (lo(i) - u(i)) / dir(i));
                tmin = std::max(tmin, (hi(i) - u(i)) / dir(i));
              }
            }
            auto line = [&](double s) { return f((u + s * dir).eval()); };
            const LineResult r = golden_max(line, tmin, tmax, 0.0, fu);
            u += r.x * dir;
            fu = r.value;
          }
        }
        gain = fu - before;
      }
      return std::make_pair(u, fu);
    };

    auto [u_best, f_best] = coordinate_descent(u0, f0);
    if (dp >= 2 || !std::isfinite(f0)) {
      auto rng = rng_for(opt.seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (int r = 0; r < opt.restarts; ++r) {
        Eigen::VectorXd u(dp);
        for (int i = 0; i < dp; ++i) u(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
        const double fu = f(u);
        auto [ur, fr] = coordinate_descent(u, fu);
        if (fr > f_best) {
          f_best = fr;
          u_best = ur;
        }
      }
    }
    sol.h = to_h(u_best);
    sol.value = f_best;
    sol.achieved_tol = opt.tol;
  }

  sol.iterations = iterations;
  // Active worst-case measures at the maximizer.
  double best = kPosInf;
  std::vector<double> vals(p.measures.size());
  for (std::size_t i = 0; i < p.measures.size(); ++i) {
    vals[i] = expectation(p.psi, p.measures[i], sol.h);
    best = std::min(best, vals[i]);
  }
  for (std::size_t i = 0; i < p.measures.size(); ++i)
    if (vals[i] <= best + 1e-9 * (1.0 + std::abs(best)))
      sol.worst_measures.push_back(static_cast<int>(i));
  return sol;
}

}  // namespace robustdp
