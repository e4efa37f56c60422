#include "kqmolsa/planar_domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

namespace kqmolsa {

void complete_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Vec3 a = Vec3::Unit(axis);
  e1 = (a - a.dot(n) * n).normalized();
  e2 = n.cross(e1);
}

SphereChart SphereChart::with_pole(const Vec3& centre, double radius, const Vec3& pole_direction) {
  SphereChart c;
  c.centre = centre;
  c.radius = radius;
  c.n = pole_direction.normalized();
  complete_frame(c.n, c.e1, c.e2);
  return c;
}

HomPoint SphereChart::project(const Vec3& x) const {
  const Vec3 y = (x - centre) / radius;
  return HomPoint(cplx(y.dot(e1), -y.dot(e2)), 1.0 - y.dot(n));
}

double PlanarRegion::metric(cplx z) const {
  const double q = std::norm(z - A) + B;
  return C / (2.0 * q * q);
}

Eigen::Index PlanarDomain::locate(cplx z) const {
  Eigen::Index cur = base;
  for (;;) {
    Eigen::Index next = -1;
    for (Eigen::Index c : regions[cur].children)
      if (regions[c].disc.contains(z)) {
        next = c;
        break;
      }
    if (next < 0) return cur;
    cur = next;
  }
}

double metric_F(const PlanarDomain& domain, cplx z) { return domain.regions[domain.locate(z)].metric(z); }

namespace {

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

struct Cap {
  Vec3 dir;
  double half_angle;
};

std::vector<Cap> caps_on(const SurfaceGeometry& geom, Eigen::Index i) {
  std::vector<Cap> caps;
  const double r = geom.spheres.radii(i);
  for (Eigen::Index j = 0; j < geom.size(); ++j) {
    if (!geom.graph.T(i, j)) continue;
    const Vec3 dir = (geom.spheres.centres.col(j) - geom.spheres.centres.col(i)).normalized();
    const double c = std::clamp(geom.graph.lambda(i, j) / r, -1.0, 1.0);
    caps.push_back({dir, std::acos(c)});
  }
  return caps;
}

double clearance(const std::vector<Cap>& caps, const Vec3& p) {
  double best = 2 * kPi;
  for (const Cap& c : caps) best = std::min(best, angle_between(p, c.dir) - c.half_angle);
  return best;
}

}  // namespace

Vec3 choose_pole(const SurfaceGeometry& geom, Eigen::Index base) {
  const auto caps = caps_on(geom, base);
  if (caps.empty()) return Vec3::UnitZ();

  // Fibonacci sphere, then a shrinking pattern search around the best sample.
  constexpr int n_samples = 2000;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  Vec3 best = Vec3::UnitZ();
  double best_val = -1e300;
  for (int s = 0; s < n_samples; ++s) {
    const double z = 1.0 - 2.0 * (s + 0.5) / n_samples;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 p(rho * std::cos(golden * s), rho * std::sin(golden * s), z);
    const double v = clearance(caps, p);
    if (v > best_val) {
      best_val = v;
      best = p;
    }
  }
  double step = 0.05;
  while (step > 1e-9) {
    Vec3 t1, t2;
    complete_frame(best, t1, t2);
    bool improved = false;
    for (int d = 0; d < 8; ++d) {
      const double a = d * kPi / 4;
      const Vec3 p = (best + step * (std::cos(a) * t1 + std::sin(a) * t2)).normalized();
      const double v = clearance(caps, p);
      if (v > best_val + 1e-15) {
        best_val = v;
        best = p;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  if (!(best_val > 1e-6))
    throw DomainError("no projection pole on the base sphere avoids every intersection cap");
  return best;
}

namespace {

// z -> w sending e_in -> 0, its reflection in the disc boundary -> infinity
// and the boundary to |w| = 1.
Mobius centering_map(cplx e_in, const Disc& disc) {
  const cplx rel = std::conj(e_in - disc.centre);
  const HomPoint in = hom(e_in);
  const HomPoint out(disc.centre * rel + disc.radius * disc.radius, rel);
  const HomPoint boundary = hom(disc.centre + disc.radius);
  Eigen::Matrix2cd mat;
  mat << in(1), -in(0), out(1), -out(0);
  const HomPoint b = mat * boundary;
  const double s = std::abs(b(0) / b(1));
  if (!(s > 0) || !std::isfinite(s)) throw DomainError("degenerate centering map");
  mat.row(0) /= s;
  return Mobius::from_matrix(mat);
}

void set_metric(PlanarRegion& reg) {
  const Mobius inv = reg.chart.inverse();
  const double P = std::norm(inv.alpha()) + std::norm(inv.gamma());
  const cplx w = std::conj(inv.alpha()) * inv.beta() + std::conj(inv.gamma()) * inv.delta();
  reg.A = -w / P;
  reg.B = 1.0 / (P * P);
  reg.C = 4.0 * reg.r * reg.r * reg.B;
}

}  // namespace

PlanarDomain build_domain(const SurfaceGeometry& geom) {
  const Eigen::Index n = geom.size();
  PlanarDomain dom;
  dom.base = geom.base_index;
  dom.r_B = geom.spheres.radii(dom.base);
  dom.bfs_order = geom.bfs_order();
  dom.regions.resize(static_cast<std::size_t>(n));

  const auto& C = geom.spheres.centres;
  const auto& R = geom.spheres.radii;

  for (Eigen::Index i = 0; i < n; ++i) {
    PlanarRegion& reg = dom.regions[i];
    reg.sphere_index = i;
    reg.level = geom.levels[i];
    reg.parent = geom.parent[i];
    reg.children = geom.children[i];
    reg.r = R(i);
  }

  // Cap overlaps on each sphere are tolerated (both regions zero the shared
  // part) but reported.
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto caps = caps_on(geom, i);
    for (std::size_t a = 0; a < caps.size(); ++a)
      for (std::size_t b = a + 1; b < caps.size(); ++b)
        if (angle_between(caps[a].dir, caps[b].dir) < caps[a].half_angle + caps[b].half_angle) {
          std::ostringstream msg;
          msg << "intersection caps overlap on sphere " << i;
          dom.warnings.push_back(msg.str());
          a = caps.size();
          break;
        }
  }

  dom.expected_area = geom.tree_area;
  if (std::abs(geom.tree_area - kFourPi) > 1e-9 * kFourPi) {
    std::ostringstream msg;
    msg << "intersections outside the projection tree: the domain covers area " << geom.tree_area
        << " instead of 4 pi";
    dom.warnings.push_back(msg.str());
  }

  PlanarRegion& base = dom.regions[dom.base];
  dom.pole = choose_pole(geom, dom.base);
  base.sphere_chart = SphereChart::with_pole(C.col(dom.base), R(dom.base), dom.pole);
  base.chart = Mobius::identity();
  set_metric(base);

  for (std::size_t h = 1; h < dom.bfs_order.size(); ++h) {
    const Eigen::Index k = dom.bfs_order[h];
    PlanarRegion& reg = dom.regions[k];
    const PlanarRegion& par = dom.regions[reg.parent];
    const Eigen::Index m = reg.parent;

    const Vec3 ahat = (C.col(k) - C.col(m)).normalized();
    reg.sphere_chart = SphereChart::with_pole(C.col(k), R(k), -ahat);

    // Intersection circle.
    const double lam = geom.graph.lambda(m, k);
    const Vec3 g = C.col(m) + lam * ahat;
    const double rho = std::sqrt(std::max(0.0, R(m) * R(m) - lam * lam));
    Vec3 f1, f2;
    complete_frame(ahat, f1, f2);
    HomPoint uk[3], um[3];
    cplx zs[3];
    for (int t = 0; t < 3; ++t) {
      const double th = 2 * kPi * t / 3;
      const Vec3 x = g + rho * (std::cos(th) * f1 + std::sin(th) * f2);
      uk[t] = reg.sphere_chart.project(x);
      um[t] = par.sphere_chart.project(x);
      const HomPoint zh = par.chart.apply(um[t]);
      if (is_infinite(zh, 1e-12))
        throw DomainError("intersection circle passes through the projection pole");
      zs[t] = dehom(zh);
    }
    const Mobius H = Mobius::from_three_points(uk[0], uk[1], uk[2], um[0], um[1], um[2]);
    reg.chart = par.chart * H;
    reg.disc = circumcircle(zs[0], zs[1], zs[2]);

    const HomPoint cap_in = par.chart.apply(par.sphere_chart.project(C.col(m) + R(m) * ahat));
    if (is_infinite(cap_in, 1e-12) || !reg.disc.contains(dehom(cap_in))) {
      std::ostringstream msg;
      msg << "disc of sphere " << k << " does not enclose its cap (pole inside the cap?)";
      throw DomainError(msg.str());
    }
    reg.centering = centering_map(dehom(cap_in), reg.disc);
    reg.to_unit_disc = reg.centering.inverse();
    for (int t = 0; t < 3; ++t)
      if (std::abs(std::abs(reg.centering(zs[t])) - 1.0) > 1e-7)
        throw DomainError("centering map does not send the intersection circle to |w| = 1");
    set_metric(reg);
  }

  if (base.children.empty()) {
    base.to_unit_disc = Mobius::identity();
  } else {
    // The child with the largest cap plays the parent for the base chart.
    Eigen::Index best = -1;
    double best_angle = -1;
    for (Eigen::Index c : base.children) {
      const double ang = std::acos(std::clamp(geom.graph.lambda(dom.base, c) / R(dom.base), -1.0, 1.0));
      if (ang > best_angle + 1e-12) {
        best_angle = ang;
        best = c;
      }
    }
    base.pseudo_parent = best;
    base.to_unit_disc = dom.regions[best].to_unit_disc * Mobius::inversion();
  }
  return dom;
}

}  // namespace kqmolsa
