#include "kqmolsa/kahler_potential.hpp"

#include <cmath>
#include <sstream>

namespace kqmolsa {

namespace {

// For a chart x -> [a x + b : c x + d] of a round metric 4 r^2 / (1+|u|^2)^2,
// the metric in x is 4 r^2 / (P (|x - A|^2 + 1/P^2))^2, P = |a|^2 + |c|^2.
double chart_P(const Mobius& inv) { return std::norm(inv.alpha()) + std::norm(inv.gamma()); }

double centring_defect(const Mobius& inv) {
  const cplx w = std::conj(inv.alpha()) * inv.beta() + std::conj(inv.gamma()) * inv.delta();
  return std::abs(w) / chart_P(inv);
}

struct Step {
  double c = 0;      // coefficient of log|w|^2 outside the disc
  double k_in = 0;   // coefficient of log|gamma z + delta|^2 on the subtree
  double konst = 0;  // additive constant on the subtree
};

}  // namespace

PotentialData solve_potential(const PlanarDomain& dom) {
  const Eigen::Index n = dom.size();
  PotentialData pot;
  pot.base = dom.base;
  pot.K = Eigen::MatrixXd::Zero(n, n);
  pot.alpha = Eigen::MatrixXcd::Zero(n, n);
  pot.beta = Eigen::MatrixXcd::Zero(n, n);
  pot.local.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const PlanarRegion& reg = dom.regions[i];
    pot.local[i] = {2.0 * reg.r * reg.r, reg.A, reg.B};
  }

  std::vector<Step> steps(static_cast<std::size_t>(n));
  for (std::size_t h = 1; h < dom.bfs_order.size(); ++h) {
    const Eigen::Index k = dom.bfs_order[h];
    const PlanarRegion& reg = dom.regions[k];
    const PlanarRegion& par = dom.regions[reg.parent];
    const double rk2 = 2.0 * reg.r * reg.r;
    const double rm2 = 2.0 * par.r * par.r;

    // Normal forms |w|^2 + eps inside and |w|^2 + eps~ outside the unit circle.
    const Mobius in_inv = (reg.centering * reg.chart).inverse();
    const Mobius out_inv = (reg.centering * par.chart).inverse();
    if (centring_defect(in_inv) > 1e-7 || centring_defect(out_inv) > 1e-7) {
      std::ostringstream msg;
      msg << "region " << k << ": centred chart is not rotationally symmetric";
      throw DomainError(msg.str());
    }
    const double s = chart_P(in_inv), s_out = chart_P(out_inv);
    const double eps = 1.0 / (s * s), eps_out = 1.0 / (s_out * s_out);
    const double kappa = rk2 * eps, kappa_out = rm2 * eps_out;
    if (!(eps > 0) || !(eps_out > 0) || !(kappa > 0) || !(kappa_out > 0) || !std::isfinite(eps) ||
        !std::isfinite(eps_out)) {
      std::ostringstream msg;
      msg << "region " << k << ": invalid normal-form constants (eps=" << eps << ", eps~=" << eps_out << ")";
      throw DomainError(msg.str());
    }

    Step& st = steps[k];
    st.c = rk2 / (1.0 + eps) - rm2 / (1.0 + eps_out);
    const double K = rk2 * std::log1p(eps) - rm2 * std::log1p(eps_out);
    st.k_in = st.c + rm2 - rk2;
    const double Pk = chart_P(reg.chart.inverse());
    const double Pm = chart_P(par.chart.inverse());
    st.konst = rk2 * std::log(Pk / s) - rm2 * std::log(Pm / s_out) - K;
  }

  // Assemble: terms of sphere l act on every region; the form depends on
  // whether the region lies in l's subtree.
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<bool> in_subtree_of(static_cast<std::size_t>(n), false);
    for (Eigen::Index a = i; a >= 0; a = dom.regions[a].parent) in_subtree_of[a] = true;
    double konst = 0;
    for (Eigen::Index l = 0; l < n; ++l) {
      if (l == dom.base) continue;
      const Mobius& M = dom.regions[l].centering;
      if (in_subtree_of[l]) {
        pot.K(i, l) = steps[l].k_in;
        pot.alpha(i, l) = M.gamma();
        pot.beta(i, l) = M.delta();
        konst += steps[l].konst;
      } else {
        pot.K(i, l) = steps[l].c;
        pot.alpha(i, l) = M.alpha();
        pot.beta(i, l) = M.beta();
      }
    }
    pot.K(i, dom.base) = 1.0;
    pot.alpha(i, dom.base) = 0.0;
    pot.beta(i, dom.base) = std::exp(0.5 * konst);
  }
  return pot;
}

double evaluate_phi_region(const PotentialData& pot, Eigen::Index i, cplx z) {
  const LocalTerm& t = pot.local[i];
  double phi = t.coeff * std::log(std::norm(z - t.A) + t.B);
  for (Eigen::Index l = 0; l < pot.size(); ++l) {
    const double k = pot.K(i, l);
    if (k != 0.0) phi += k * std::log(std::norm(pot.alpha(i, l) * z + pot.beta(i, l)));
  }
  return phi;
}

double PotentialData::growth(Eigen::Index i) const {
  double g = local[i].coeff;
  for (Eigen::Index l = 0; l < size(); ++l)
    if (l != base) g += K(i, l);
  return g;
}

double evaluate_phi_log_part(const PotentialData& pot, Eigen::Index i, cplx z0, cplx z1) {
  const LocalTerm& t = pot.local[i];
  double L = t.coeff * std::log(std::norm(z0 - t.A * z1) + t.B * std::norm(z1));
  for (Eigen::Index l = 0; l < pot.size(); ++l) {
    const double k = pot.K(i, l);
    if (k == 0.0) continue;
    if (l == pot.base)
      L += k * std::log(std::norm(pot.beta(i, l)));
    else
      L += k * std::log(std::norm(pot.alpha(i, l) * z0 + pot.beta(i, l) * z1));
  }
  return L;
}

double evaluate_phi(const PotentialData& pot, const PlanarDomain& domain, cplx z) {
  return evaluate_phi_region(pot, domain.locate(z), z);
}

}  // namespace kqmolsa
