#include "kqmolsa/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace kqmolsa {

namespace {

// Non-finite objective values are treated as +inf so they are never accepted.
double safe(const Objective& f, const Eigen::VectorXd& x, int& evals) {
  ++evals;
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& start, const MinimizeOptions& opts) {
  const Eigen::Index n = start.size();
  MinimizeResult res;
  std::vector<Eigen::VectorXd> simplex(n + 1, start);
  std::vector<double> val(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) simplex[i + 1](i) += opts.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = safe(f, simplex[i], res.evaluations);

  std::vector<Eigen::Index> order(n + 1);
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const Eigen::Index best = order.front(), worst = order.back(), second = order[n - 1];
    // A flat spread alone can be a symmetric simplex straddling the minimum,
    // so the simplex must also be small (sqrt(tol): values are quadratic in x).
    double size = 0;
    for (Eigen::Index i = 0; i <= n; ++i) size = std::max(size, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
    if (std::isfinite(val[worst]) && val[worst] - val[best] < opts.tolerance &&
        size <= std::sqrt(opts.tolerance) * (1.0 + simplex[best].cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
    const double fr = safe(f, xr, res.evaluations);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = safe(f, xe, res.evaluations);
      if (fe < fr) {
        simplex[worst] = xe;
        val[worst] = fe;
      } else {
        simplex[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      simplex[worst] = xr;
      val[worst] = fr;
      continue;
    }
    // contraction, outside or inside
    const bool outside = fr < val[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = safe(f, xc, res.evaluations);
    if (fc < (outside ? fr : val[worst])) {
      simplex[worst] = xc;
      val[worst] = fc;
      continue;
    }
    // shrink towards the best vertex
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      val[i] = safe(f, simplex[i], res.evaluations);
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  res.x = simplex[it - val.begin()];
  res.value = *it;
  return res;
}

double brent(const std::function<double(double)>& g, double a, double b, double c, double tol, double& fmin,
             int max_iter) {
  constexpr double cgold = 0.3819660112501051;
  constexpr double zeps = 1e-18;
  double lo = std::min(a, c), hi = std::max(a, c);
  double x = b, w = b, v = b;
  double fx = g(x), fw = fx, fv = fx;
  double d = 0, e = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (lo + hi);
    const double tol1 = tol * std::abs(x) + zeps, tol2 = 2 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      // parabolic step
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (lo - x) && p < q * (hi - x)) {
        d = p / q;
        const double u = x + d;
        if (u - lo < tol2 || hi - u < tol2) d = std::copysign(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm ? lo : hi) - x;
      d = cgold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    double fu = g(u);
    if (!std::isfinite(fu)) fu = std::numeric_limits<double>::infinity();
    if (fu <= fx) {
      (u >= x ? lo : hi) = x;
      v = w, fv = fw;
      w = x, fw = fx;
      x = u, fx = fu;
    } else {
      (u < x ? lo : hi) = u;
      if (fu <= fw || w == x) {
        v = w, fv = fw;
        w = u, fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u, fv = fu;
      }
    }
  }
  fmin = fx;
  return x;
}

namespace {

// Bracket a minimum of g starting from [0, step]; returns false when g is flat.
bool bracket(const std::function<double(double)>& g, double step, double& a, double& b, double& c) {
  constexpr double gold = 1.618033988749895;
  a = 0;
  b = step;
  double fa = g(a), fb = g(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  c = b + gold * (b - a);
  double fc = g(c);
  for (int it = 0; it < 60 && !(fb <= fc); ++it) {
    a = b, fa = fb;
    b = c, fb = fc;
    c = b + gold * (b - a);
    fc = g(c);
  }
  return fb <= fc && fb <= fa;
}

}  // namespace

MinimizeResult powell(const Objective& f, const Eigen::VectorXd& start, const MinimizeOptions& opts) {
  const Eigen::Index n = start.size();
  MinimizeResult res;
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n) * opts.initial_step;
  Eigen::VectorXd x = start;
  double fx = safe(f, x, res.evaluations);

  auto line_min = [&](const Eigen::VectorXd& dir) {
    auto g = [&](double t) { return safe(f, x + t * dir, res.evaluations); };
    double a, b, c;
    if (!bracket(g, 1.0, a, b, c)) return 0.0;
    double fmin;
    const double t = brent(g, a, b, c, 1e-6, fmin);
    if (fmin < fx) {
      x += t * dir;
      fx = fmin;
    }
    return t;
  };

  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    const Eigen::VectorXd x0 = x;
    const double f0 = fx;
    double biggest = 0;
    Eigen::Index ibig = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double before = fx;
      line_min(dirs.col(i));
      if (before - fx > biggest) {
        biggest = before - fx;
        ibig = i;
      }
    }
    if (f0 - fx < opts.tolerance) {
      res.converged = true;
      break;
    }
    // Replace the direction of largest decrease by the net displacement.
    const Eigen::VectorXd delta = x - x0;
    const double fe = safe(f, x + delta, res.evaluations);
    if (fe < f0) {
      const double t = 2 * (f0 - 2 * fx + fe) * std::pow(f0 - fx - biggest, 2) - biggest * std::pow(f0 - fe, 2);
      if (t < 0 && delta.norm() > 0) {
        line_min(delta);
        dirs.col(ibig) = dirs.col(n - 1);
        dirs.col(n - 1) = delta;
      }
    }
  }
  res.x = x;
  res.value = fx;
  return res;
}

}  // namespace kqmolsa
