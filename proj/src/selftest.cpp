#include "kqmolsa/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "kqmolsa/pipeline.hpp"
#include "kqmolsa/similarity.hpp"

namespace kqmolsa {

SphereSet synthetic_chain(int n) {
  if (n < 1) throw std::invalid_argument("chain needs at least one sphere");
  const double radii[] = {1.5, 1.9, 2.25, 1.7};
  const double spacing = 2.5, turn = (180.0 - 140.0) * kPi / 180.0;
  Eigen::Matrix3Xd c(3, n);
  Eigen::VectorXd r(n);
  Vec3 p = Vec3::Zero();
  double heading = 0;
  for (int i = 0; i < n; ++i) {
    c.col(i) = p;
    r(i) = radii[i % 4];
    heading += (i % 2 == 0 ? 1 : -1) * turn;
    p += spacing * Vec3(std::cos(heading), std::sin(heading), 0.3 * (i % 3 - 1)).normalized();
  }
  return SphereSet::from_spheres(c, r);
}

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

PipelineOptions pipeline(const QuadratureConfig& q, int k = 1) {
  PipelineOptions o;
  o.quadrature = q;
  o.k = k;
  return o;
}

ShapeDescriptor unit_sphere(const QuadratureConfig& q) {
  return describe_spheres(SphereSet::from_spheres(Eigen::Matrix3Xd::Zero(3, 1), Eigen::VectorXd::Ones(1)),
                          pipeline(q), "unit sphere");
}

Mobius random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
    if (std::abs(a * d - b * c) < 0.1) continue;
    const Mobius w = Mobius::from_coefficients(a, b, c, d);
    if (w.m.cwiseAbs().maxCoeff() <= 2) return w;
  }
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& opts) {
  std::vector<SelfTestCheck> out;
  auto check = [&](const std::string& name, auto&& body) {
    SelfTestCheck c{name, false, ""};
    try {
      body(c);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = e.what();
    }
    out.push_back(c);
  };
  const QuadratureConfig q = opts.quadrature;
  // The area check is the point of some tests below; never let it throw here.
  QuadratureConfig q_loose = q;
  q_loose.area_tolerance = 1e9;

  check("unit-sphere M", [&](SelfTestCheck& c) {
    const ShapeDescriptor d = unit_sphere(q_loose);
    const double want[] = {4 * kPi / 3, 2 * kPi / 3, 4 * kPi / 3};
    double worst = 0, off = 0;
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(d.M(i, i).real() - want[i]) / want[i]);
      for (int j = 0; j < 3; ++j)
        if (i != j) off = std::max(off, std::abs(d.M(i, j)) / want[1]);
    }
    c.passed = worst <= 0.03 && off <= 1e-3;
    c.detail = fmt("max diagonal error %.3g%%, off-diagonal %.2g", 100 * worst, off);
  });

  check("unit-sphere area", [&](SelfTestCheck& c) {
    const ShapeDescriptor d = unit_sphere(q_loose);
    const double rel = std::abs(d.area_check / kFourPi - 1);
    c.passed = rel <= 0.005;
    c.detail = fmt("area %.6f (%.3g%% from 4 pi)", d.area_check, 100 * rel);
  });

  check("chain area conservation", [&](SelfTestCheck& c) {
    double worst = 0;
    for (int n = 2; n <= 8; ++n) {
      const ShapeDescriptor d = describe_spheres(synthetic_chain(n), pipeline(q_loose));
      worst = std::max(worst, std::abs(d.area_check / kFourPi - 1));
    }
    c.passed = worst <= 0.005;
    c.detail = fmt("chains of 2-8 spheres, worst area deviation %.3g%%", 100 * worst);
  });

  check("quadrature stability", [&](SelfTestCheck& c) {
    QuadratureConfig fine = q_loose;
    fine.n_r = 50;
    fine.n_theta = 25;
    double worst = 0;
    for (int n : {3, 5, 8}) {
      const ShapeDescriptor a = describe_spheres(synthetic_chain(n), pipeline(q_loose));
      const ShapeDescriptor b = describe_spheres(synthetic_chain(n), pipeline(fine));
      worst = std::max(worst, min_distance(sanitize(a.M).M, sanitize(b.M).M, 1).distance);
    }
    c.passed = worst <= 0.05;
    c.detail = fmt("worst distance to the (50, 25) descriptor %.3g", worst);
  });

  check("orbit invariance", [&](SelfTestCheck& c) {
    std::mt19937_64 rng(opts.seed);
    const Eigen::MatrixXcd M = sanitize(describe_spheres(synthetic_chain(5), pipeline(q_loose)).M).M;
    double worst = 0;
    for (int t = 0; t < 5; ++t) worst = std::max(worst, min_distance(M, act(M, random_map(rng), 1), 1).distance);
    c.passed = worst <= 1e-2;
    c.detail = fmt("5 random maps, worst distance %.3g", worst);
  });

  check("scale quotient", [&](SelfTestCheck& c) {
    const Eigen::MatrixXcd M = describe_spheres(synthetic_chain(4), pipeline(q_loose)).M;
    double worst_d = 0, worst_p = 0;
    for (double s : {1e-3, 1.0, 1e3}) {
      worst_d = std::max(worst_d, scaled_distance(M, s * M, 1));
      worst_p = std::max(worst_p, std::abs(scale_optimum(M, s * M, 1) + std::log(s)));
    }
    c.passed = worst_d <= 1e-9 && worst_p <= 1e-9;
    c.detail = fmt("max distance %.2g, max |p + log c| %.2g", worst_d, worst_p);
  });

  check("comparison symmetry", [&](SelfTestCheck& c) {
    const ShapeDescriptor a = describe_spheres(synthetic_chain(3), pipeline(q_loose), "chain3");
    const ShapeDescriptor b = describe_spheres(synthetic_chain(6), pipeline(q_loose), "chain6");
    const double ab = score(a, b).score, ba = score(b, a).score;
    c.passed = std::abs(ab - ba) <= 0.02;
    c.detail = fmt("score(A,B) %.4f, score(B,A) %.4f", ab, ba);
  });

  check("score linearity", [&](SelfTestCheck& c) {
    // score(x) = x ratio + (1 - x) score(0), for every weight row.
    const double ratio = 0.964, s0 = 0.884;
    const double d = 1.0 / s0 - 1.0;
    double worst = 0;
    for (int row = 0; row <= 5; ++row) {
      const double x = 0.1 * row;
      Weights w{x, 1 - x};
      if (x < 0.5) w.validate();
      worst = std::max(worst, std::abs(combine_score(ratio, d, w) - (x * ratio + (1 - x) * s0)));
    }
    c.passed = worst <= 1e-12;
    c.detail = fmt("worst deviation %.2g", worst);
  });

  return out;
}

bool print_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& out) {
  bool ok = true;
  for (const auto& c : checks) {
    out << c.name << ": " << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
    ok = ok && c.passed;
  }
  return ok;
}

}  // namespace kqmolsa
