#include "kqmolsa/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kqmolsa {

void QuadratureConfig::validate() const {
  if (n_r < 2) throw std::invalid_argument("n_r must be >= 2");
  if (n_theta < 2) throw std::invalid_argument("n_theta must be >= 2");
  if (!(area_tolerance > 0)) throw std::invalid_argument("area tolerance must be positive");
}

namespace {

// One unit-disc chart: w -> z, with the child discs to exclude.
struct DiscChart {
  Eigen::Index region;
  Mobius to_z;
  std::vector<CircleImage> holes;  // inverted: everything outside the circle is excluded
};

std::vector<DiscChart> charts_for(const PlanarDomain& dom) {
  std::vector<DiscChart> out;
  for (Eigen::Index i : dom.bfs_order) {
    const PlanarRegion& reg = dom.regions[i];
    if (reg.is_base() && reg.children.empty()) {
      // Single sphere: two hemispheres.
      out.push_back({i, Mobius::identity(), {}});
      out.push_back({i, Mobius::inversion(), {}});
      continue;
    }
    DiscChart c{i, reg.to_unit_disc, {}};
    const Mobius to_w = c.to_z.inverse();
    for (Eigen::Index j : reg.children)
      if (j != reg.pseudo_parent) c.holes.push_back(circle_image(to_w, dom.regions[j].disc));
    // Fix the free rotation: first hole on the positive real axis.
    if (!c.holes.empty() && std::abs(c.holes.front().circle.centre) > 1e-12) {
      const double th = std::arg(c.holes.front().circle.centre);
      c.to_z = c.to_z * Mobius::rotation(th);
      const cplx rot = std::polar(1.0, -th);
      for (CircleImage& h : c.holes) h.circle.centre *= rot;
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Radial variable t(rho) in which the trapezium rule is applied.
struct RadialMap {
  bool uniform = true;
  double eps = 1;

  double t_of(double rho) const { return uniform ? rho : rho * rho / (rho * rho + eps); }
  double rho_of(double t) const { return uniform ? t : std::sqrt(eps * t / (1.0 - t)); }
  // rho d(rho) / dt
  double jacobian(double rho) const {
    if (uniform) return rho;
    const double q = rho * rho + eps;
    return q * q / (2.0 * eps);
  }
};

// Radial nodes (rho, weight including the polar Jacobian) along one ray.
void ray_nodes(const std::vector<CircleImage>& holes, double theta, const QuadratureConfig& q, const RadialMap& map,
               std::vector<std::pair<double, double>>& nodes) {
  nodes.clear();
  if (q.holes == HoleMode::ZeroNodes) {
    const cplx dir = std::polar(1.0, theta);
    const double t_end = map.t_of(1.0);
    const double h = t_end / q.n_r;
    for (int s = 0; s <= q.n_r; ++s) {
      const double rho = s == q.n_r ? 1.0 : map.rho_of(s * h);
      const double jac = map.jacobian(rho);
      if (jac <= 0) continue;
      bool inside = false;
      for (const CircleImage& d : holes)
        if (d.circle.contains(rho * dir) != d.inverted) {
          inside = true;
          break;
        }
      if (!inside) nodes.emplace_back(rho, (s == 0 || s == q.n_r ? 0.5 : 1.0) * h * jac);
    }
    return;
  }

  // Excluded intervals of the ray, merged.
  std::vector<std::pair<double, double>> cut;
  for (const CircleImage& h : holes) {
    const Disc& d = h.circle;
    const double b = (d.centre * std::polar(1.0, -theta)).real();
    const double c = std::norm(d.centre) - d.radius * d.radius;
    const double disc = b * b - c;
    const double sq = disc > 0 ? std::sqrt(disc) : 0.0;
    const double lo = std::max(0.0, b - sq), hi = std::min(1.0, b + sq);
    if (!h.inverted) {
      if (disc > 0 && lo < hi) cut.emplace_back(lo, hi);
    } else if (disc <= 0 || lo >= hi) {
      cut.emplace_back(0.0, 1.0);
    } else {
      if (lo > 0) cut.emplace_back(0.0, lo);
      if (hi < 1) cut.emplace_back(hi, 1.0);
    }
  }
  std::sort(cut.begin(), cut.end());
  std::vector<std::pair<double, double>> keep;
  double start = 0;
  for (auto [lo, hi] : cut) {
    if (lo > start) keep.emplace_back(start, lo);
    start = std::max(start, hi);
  }
  if (start < 1.0) keep.emplace_back(start, 1.0);

  for (auto [a, b] : keep) {
    const double ta = map.t_of(a), tb = map.t_of(b);
    const double len = tb - ta;
    if (!(len > 0)) continue;
    for (int s = 0; s <= q.n_r; ++s) {
      const double rho = s == 0 ? a : s == q.n_r ? b : map.rho_of(ta + len * s / q.n_r);
      const double jac = map.jacobian(rho);
      if (jac <= 0) continue;
      const double w = (s == 0 || s == q.n_r ? 0.5 : 1.0) * len / q.n_r * jac;
      nodes.emplace_back(rho, w);
    }
  }
}

}  // namespace

QuadratureResult integrate(const PlanarDomain& dom, const PotentialData& pot, const std::vector<int>& levels,
                           const QuadratureConfig& q) {
  q.validate();
  QuadratureResult res;
  int max_dim = 0;
  for (int k : levels) {
    if (k < 1) throw std::invalid_argument("quantization level must be >= 1");
    res.M.push_back(Eigen::MatrixXcd::Zero(2 * k + 1, 2 * k + 1));
    max_dim = std::max(max_dim, 2 * k + 1);
  }

  const auto charts = charts_for(dom);
  std::vector<std::pair<double, double>> nodes;
  Eigen::VectorXcd v(max_dim);
  const double dtheta = 2 * kPi / q.n_theta;

  for (const DiscChart& ch : charts) {
    const PlanarRegion& reg = dom.regions[ch.region];
    const Mobius vol_map = reg.chart.inverse() * ch.to_z;  // w -> u
    const double r2x4 = 4.0 * reg.r * reg.r;
    const double G = pot.growth(ch.region);
    RadialMap map;
    if (q.radial == RadialRule::EqualArea) {
      // The chart is centred, so the density is 4 r^2 eps / (|w|^2 + eps)^2.
      const double P = std::norm(vol_map.alpha()) + std::norm(vol_map.gamma());
      map.uniform = false;
      map.eps = 1.0 / (P * P);
    }
    for (int t = 0; t < q.n_theta; ++t) {
      const double theta = t * dtheta;
      ray_nodes(ch.holes, theta, q, map, nodes);
      for (auto [rho, wr] : nodes) {
        const cplx w = std::polar(rho, theta);
        const HomPoint u = vol_map.apply(hom(w));
        const double qv = u.squaredNorm();
        const double vol = r2x4 / (qv * qv);
        // Homogeneous z = z0 / z1 keeps w = 0 -> z = infinity finite:
        // z^i e^{-k phi / 2} = (z0 conj(z1))^i e^{-k L / 2} |z1|^{k G - 2 i}.
        HomPoint zh = ch.to_z.apply(hom(w));
        zh /= zh.norm();
        const double L = evaluate_phi_log_part(pot, ch.region, zh(0), zh(1));
        const double a0 = std::abs(zh(0)), a1 = std::abs(zh(1));
        const cplx phase = (a0 > 0 && a1 > 0) ? zh(0) * std::conj(zh(1)) / (a0 * a1) : cplx(1.0);
        const double weight = wr * dtheta * vol;
        res.area += weight;
        for (std::size_t lv = 0; lv < levels.size(); ++lv) {
          const int k = levels[lv];
          const int d = 2 * k + 1;
          const double e = std::exp(-0.5 * k * L);
          cplx ph = 1.0;
          double p0 = 1.0;
          for (int i = 0; i < d; ++i) {
            const double ex = k * G - i;
            const double p1 = ex < 1e-9 ? 1.0 : std::pow(a1, ex);
            v(i) = ph * p0 * p1 * e;
            ph *= phase;
            p0 *= a0;
          }
          res.M[lv] += weight * v.head(d) * v.head(d).adjoint();
        }
      }
    }
  }
  for (auto& M : res.M) M = (0.5 * (M + M.adjoint())).eval();
  return res;
}

ShapeDescriptor quantize(const PlanarDomain& dom, const PotentialData& pot, int k, const QuadratureConfig& q) {
  std::vector<int> levels{k};
  if (k >= 2) levels.push_back(1);
  QuadratureResult res = integrate(dom, pot, levels, q);

  for (const auto& M : res.M)
    if (!M.allFinite()) throw QuadratureError("non-finite value in the descriptor integrand");
  if (!std::isfinite(res.area)) throw QuadratureError("non-finite recovered area");
  // Compared against the area the domain covers; that differs from 4 pi only
  // when intersections off the projection tree exist (reported as a warning).
  const double rel = std::abs(res.area - dom.expected_area) / dom.expected_area;
  if (rel > q.area_tolerance) {
    std::ostringstream msg;
    msg << "recovered area " << res.area << " deviates from the domain area " << dom.expected_area << " by "
        << 100 * rel << "% (limit " << 100 * q.area_tolerance << "%)";
    throw QuadratureError(msg.str());
  }

  ShapeDescriptor d;
  d.k = k;
  d.M = std::move(res.M[0]);
  if (k >= 2) d.seed_k1 = std::move(res.M[1]);
  d.area_check = res.area;
  d.quadrature = q;
  d.n_spheres = dom.size();
  d.warnings = dom.warnings;
  return d;
}

}  // namespace kqmolsa
