#include "kqmolsa/descriptor_distance.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace kqmolsa {

namespace {

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& M) { return 0.5 * (M + M.adjoint()); }

// Factor once, evaluate many times.
struct Whitener {
  Eigen::LLT<Eigen::MatrixXcd> llt;

  explicit Whitener(const Eigen::MatrixXcd& M1) : llt(hermitian_part(M1)) {
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(M1), Eigen::EigenvaluesOnly);
      throw NonPositiveDefinite(es.eigenvalues()(0), "first matrix is not positive definite");
    }
  }

  // Eigenvalues of M1^{-1} M2 = eigenvalues of L^{-1} M2 L^{-*}.
  Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& M2) const {
    Eigen::MatrixXcd W = llt.matrixL().solve(hermitian_part(M2));
    W = llt.matrixL().solve(W.adjoint().eval()).adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(W), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
};

void check_shapes(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2) {
  if (M1.rows() != M1.cols() || M2.rows() != M2.cols() || M1.rows() != M2.rows() || M1.rows() == 0)
    throw std::invalid_argument("descriptor matrices must be square and of equal size");
}

double k_factor(int k) { return std::pow(static_cast<double>(k), -1.5); }

// sum (l - mean l)^2
double centred_square_sum(const Eigen::VectorXd& l) { return (l.array() - l.mean()).square().sum(); }

}  // namespace

Eigen::VectorXd log_eigenvalues(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2) {
  check_shapes(M1, M2);
  const Whitener w(M1);
  const Eigen::VectorXd eta = w.eigenvalues(M2);
  if (!(eta(0) > 0)) throw NonPositiveDefinite(eta(0), "M1^{-1} M2 has a non-positive eigenvalue");
  return eta.array().log();
}

double raw_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k) {
  return k_factor(k) * log_eigenvalues(M1, M2).norm();
}

double scale_optimum(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int) {
  return -log_eigenvalues(M1, M2).mean();
}

double scaled_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k) {
  return k_factor(k) * std::sqrt(centred_square_sum(log_eigenvalues(M1, M2)));
}

Eigen::MatrixXcd sym_power_rep(const Mobius& w, int k) {
  const int n = 2 * k;
  Eigen::MatrixXcd rep = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    Eigen::VectorXcd poly = Eigen::VectorXcd::Zero(n + 1);
    poly(0) = 1.0;
    int deg = 0;
    auto times = [&](cplx a, cplx b) {  // poly *= (a z + b)
      for (int d = deg + 1; d >= 1; --d) poly(d) = poly(d) * b + poly(d - 1) * a;
      poly(0) *= b;
      ++deg;
    };
    for (int t = 0; t < j; ++t) times(w.alpha(), w.beta());
    for (int t = j; t < n; ++t) times(w.gamma(), w.delta());
    rep.col(j) = poly;
  }
  return rep;
}

Eigen::MatrixXcd act(const Eigen::MatrixXcd& M, const Mobius& w, int k) {
  const Eigen::MatrixXcd t = sym_power_rep(w, k);
  return t.adjoint() * M * t;
}

Mobius params_to_mobius(const MobiusParams& x) {
  const cplx a(x(0), x(1)), b(x(2), x(3)), c(x(4), x(5));
  if (!(std::abs(a) > 1e-12)) throw DomainError("degenerate Mobius parameters (x1 + i x2 = 0)");
  Mobius w;
  w.m << a, b, c, (1.0 + b * c) / a;
  return w;
}

MobiusParams mobius_to_params(const Mobius& w) {
  if (!(std::abs(w.alpha()) > 1e-12)) throw DomainError("Mobius map has alpha = 0; no parameters");
  MobiusParams x;
  x << w.alpha().real(), w.alpha().imag(), w.beta().real(), w.beta().imag(), w.gamma().real(), w.gamma().imag();
  return x;
}

MobiusParams identity_params() {
  MobiusParams x = MobiusParams::Zero();
  x(0) = 1;
  return x;
}

SanitizeResult sanitize(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols() || M.rows() == 0) throw std::invalid_argument("sanitize: matrix must be square");
  SanitizeResult out;
  out.M = hermitian_part(M);
  if (!out.M.allFinite()) throw NonPositiveDefinite(std::nan(""), "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.M, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite (smallest eigenvalue " << lo << ")";
    throw NonPositiveDefinite(lo, msg.str());
  }
  if (lo < kConditionLimit * hi) {
    std::ostringstream msg;
    msg << "matrix is numerically singular (eigenvalue ratio " << lo / hi << ")";
    throw NonPositiveDefinite(lo, msg.str());
  }
  for (double f : {1.0, 10.0, 100.0, 1000.0})
    if (f * lo >= kEigenFloor * (1 - 1e-12)) {
      out.factor = f;
      out.M *= f;
      return out;
    }
  std::ostringstream msg;
  msg << "smallest eigenvalue " << lo << " stays below " << kEigenFloor << " after scaling by 1000";
  throw NonPositiveDefinite(lo, msg.str());
}

std::vector<Mobius> octahedral_rotations() {
  // (angle, axis) of each rotation; SU(2) lift cos(a/2) - i sin(a/2) n.sigma.
  struct Rot {
    double angle;
    Vec3 axis;
  };
  std::vector<Rot> rots{{0.0, Vec3::UnitZ()}};
  for (int ax = 0; ax < 3; ++ax)
    for (int q = 1; q <= 3; ++q) rots.push_back({q * kPi / 2, Vec3::Unit(ax)});
  for (const Vec3& a : {Vec3(1, 1, 0), Vec3(1, -1, 0), Vec3(1, 0, 1), Vec3(1, 0, -1), Vec3(0, 1, 1), Vec3(0, 1, -1)})
    rots.push_back({kPi, a.normalized()});
  for (const Vec3& a : {Vec3(1, 1, 1), Vec3(1, 1, -1), Vec3(1, -1, 1), Vec3(-1, 1, 1)})
    for (int q = 1; q <= 2; ++q) rots.push_back({q * 2 * kPi / 3, a.normalized()});
  std::vector<Mobius> out;
  for (const Rot& r : rots) {
    const double c = std::cos(0.5 * r.angle), s = std::sin(0.5 * r.angle);
    const Vec3& n = r.axis;
    out.push_back(Mobius::from_coefficients(cplx(c, -s * n.z()), cplx(-s * n.y(), -s * n.x()),
                                            cplx(s * n.y(), -s * n.x()), cplx(c, s * n.z())));
  }
  return out;
}

AlignmentResult min_distance(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2, int k,
                             const DistanceOptions& opts, const Mobius& start) {
  check_shapes(M1, M2);
  if (M1.rows() != 2 * k + 1) throw std::invalid_argument("matrix size does not match k");
  const Whitener white(M1);
  const double inf = std::numeric_limits<double>::infinity();

  AlignmentResult res;
  {
    const Eigen::VectorXd eta = white.eigenvalues(M2);
    if (!(eta(0) > 0)) throw NonPositiveDefinite(eta(0), "second matrix is not positive definite");
    const Eigen::VectorXd l = eta.array().log();
    res.raw = k_factor(k) * std::sqrt(centred_square_sum(l));
  }

  auto zeta_of = [&](const Mobius& w) {
    const Eigen::VectorXd eta = white.eigenvalues(act(M2, w, k));
    if (!(eta(0) > 0) || !eta.allFinite()) return inf;
    return centred_square_sum(eta.array().log().matrix());
  };

  const std::vector<Mobius> rotations =
      opts.rotation_starts ? octahedral_rotations() : std::vector<Mobius>{Mobius::identity()};
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  auto run_minimizer = [&](const Objective& f, const Eigen::VectorXd& x0) {
    return opts.minimizer == Minimizer::Powell ? powell(f, x0, opts.minimize) : nelder_mead(f, x0, opts.minimize);
  };

  Mobius best = start;
  double best_val = zeta_of(best);
  bool converged = false;
  for (const Mobius& rot : rotations) {
    // Each run searches W = incumbent * P(x) with P(identity_params) = 1, so
    // restarts re-centre the det-1 completion on the current best map.
    Mobius local = start * rot;
    double local_val = zeta_of(local);
    bool local_converged = false;
    for (int run = 0; run <= opts.max_restarts; ++run) {
      const Mobius base = local;
      Objective f = [&](const Eigen::VectorXd& x) {
        try {
          return zeta_of(base * params_to_mobius(x));
        } catch (const DomainError&) {
          return inf;
        }
      };
      Eigen::VectorXd x0 = identity_params();
      MinimizeResult r = run_minimizer(f, x0);
      if (!std::isfinite(r.value)) {
        // Degenerate start: jitter and try again.
        for (int i = 0; i < 6; ++i) x0(i) += jitter(rng);
        r = run_minimizer(f, x0);
      }
      res.restarts += run > 0;
      const double gain = local_val - r.value;
      if (std::isfinite(r.value) && r.value <= local_val) {
        local = base * params_to_mobius(r.x);
        local_val = r.value;
      }
      local_converged = r.converged;
      if (!(gain > opts.minimize.tolerance)) break;
    }
    if (local_val < best_val || (local_val == best_val && local_converged)) {
      best = local;
      best_val = local_val;
      converged = local_converged;
    }
  }

  res.alignment = best;
  res.objective = best_val;
  res.distance = k_factor(k) * std::sqrt(best_val);
  res.scale = -log_eigenvalues(M1, act(M2, best, k)).mean();
  res.converged = converged && std::isfinite(best_val);
  try {
    res.mobius_params = mobius_to_params(best);
  } catch (const DomainError&) {
    res.mobius_params = MobiusParams::Zero();
  }
  return res;
}

DescriptorComparison compare_descriptors(const ShapeDescriptor& a, const ShapeDescriptor& b,
                                         const DistanceOptions& opts) {
  if (a.k != b.k) {
    std::ostringstream msg;
    msg << "quantization level mismatch: k=" << a.k << " vs k=" << b.k;
    throw std::invalid_argument(msg.str());
  }
  DescriptorComparison out;
  const SanitizeResult sa = sanitize(a.M), sb = sanitize(b.M);
  out.factor1 = sa.factor;
  out.factor2 = sb.factor;
  Mobius start = Mobius::identity();
  if (a.k >= 2 && a.seed_k1 && b.seed_k1) {
    const SanitizeResult s1 = sanitize(*a.seed_k1), s2 = sanitize(*b.seed_k1);
    start = min_distance(s1.M, s2.M, 1, opts).alignment;
  }
  out.alignment = min_distance(sa.M, sb.M, a.k, opts, start);
  return out;
}

}  // namespace kqmolsa
