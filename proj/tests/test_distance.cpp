#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "kqmolsa/descriptor_distance.hpp"
#include "kqmolsa/pipeline.hpp"
#include "kqmolsa/selftest.hpp"

using namespace kqmolsa;

namespace {

using Poly = std::vector<cplx>;

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Column j: coefficients of (alpha z + beta)^j (gamma z + delta)^(2k - j).
Eigen::MatrixXcd rep_oracle(const Mobius& w, int k) {
  const int n = 2 * k + 1;
  Eigen::MatrixXcd T(n, n);
  for (int j = 0; j < n; ++j) {
    Poly p{1.0};
    for (int a = 0; a < j; ++a) p = mul(p, {w.beta(), w.alpha()});
    for (int a = j; a < 2 * k; ++a) p = mul(p, {w.delta(), w.gamma()});
    for (int i = 0; i < n; ++i) T(i, j) = p[static_cast<std::size_t>(i)];
  }
  return T;
}

Mobius random_mobius(std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-bound / std::sqrt(2.0), bound / std::sqrt(2.0));
  for (;;) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    if (std::abs(a) < 0.2) continue;
    const cplx d = (1.0 + b * c) / a;
    if (std::abs(d) <= bound) return Mobius::from_coefficients(a, b, c, d);
  }
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
}

Eigen::MatrixXcd diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<cplx>().asDiagonal();
}

Eigen::MatrixXcd chain_descriptor(int n, int k) {
  PipelineOptions o;
  o.k = k;
  return describe_spheres(synthetic_chain(n), o).M;
}

}  // namespace

TEST_CASE("raw distance worked examples") {
  const double e = std::exp(1.0);
  CHECK(raw_distance(Eigen::MatrixXcd::Identity(3, 3), Eigen::MatrixXcd::Identity(3, 3), 1) == doctest::Approx(0));
  CHECK(raw_distance(Eigen::MatrixXcd::Identity(3, 3), diag({e, 1, 1 / e}), 1) == doctest::Approx(std::sqrt(2.0)));
  const Eigen::MatrixXcd I5 = Eigen::MatrixXcd::Identity(5, 5);
  CHECK(raw_distance(I5, e * I5, 2) == doctest::Approx(std::pow(2.0, -1.5) * std::sqrt(5.0)));
  CHECK(raw_distance(I5, e * I5, 2) == doctest::Approx(0.79057).epsilon(1e-5));
}

TEST_CASE("scale optimum worked examples") {
  const Eigen::MatrixXcd M = chain_descriptor(3, 1);
  CHECK(scale_optimum(M, 2.0 * M, 1) == doctest::Approx(-std::log(2.0)));
  CHECK(raw_distance(M, std::exp(scale_optimum(M, 2.0 * M, 1)) * 2.0 * M, 1) < 1e-12);
  CHECK(std::abs(scale_optimum(M, M, 1)) < 1e-14);
  const double e = std::exp(1.0);
  CHECK(std::abs(scale_optimum(Eigen::MatrixXcd::Identity(3, 3), diag({e, 1, 1 / e}), 1)) < 1e-14);
}

TEST_CASE("scale quotient holds to machine precision") {
  const Eigen::MatrixXcd M1 = chain_descriptor(3, 1), M2 = chain_descriptor(5, 1);
  const double base = scaled_distance(M1, M2, 1);
  for (double c : {1e-3, 1.0, 1e3}) {
    CHECK(scaled_distance(M1, c * M2, 1) == doctest::Approx(base).epsilon(1e-12));
    CHECK(scaled_distance(M1, c * M1, 1) < 1e-12);
    CHECK(scale_optimum(M1, c * M1, 1) == doctest::Approx(-std::log(c)).epsilon(1e-13).scale(1));
  }
}

TEST_CASE("raw distance matches the diagonal formula under a common unitary") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int k : {1, 2}) {
    const int n = 2 * k + 1;
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd d1(n), d2(n);
      for (int i = 0; i < n; ++i) {
        d1(i) = u(rng);
        d2(i) = u(rng);
      }
      const Eigen::MatrixXcd U = random_unitary(rng, n);
      const Eigen::MatrixXcd M1 = U * d1.cast<cplx>().asDiagonal() * U.adjoint();
      const Eigen::MatrixXcd M2 = U * d2.cast<cplx>().asDiagonal() * U.adjoint();
      double s = 0;
      for (int i = 0; i < n; ++i) s += std::pow(std::log(d2(i) / d1(i)), 2);
      CHECK(raw_distance(M1, M2, k) == doctest::Approx(std::pow(k, -1.5) * std::sqrt(s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("log eigenvalues reject non-positive-definite input") {
  CHECK_THROWS_AS(log_eigenvalues(diag({1, -1, 1}), diag({1, 1, 1})), NonPositiveDefinite);
  CHECK_THROWS_AS(log_eigenvalues(diag({1, 1, 1}), diag({1, 0, 1})), NonPositiveDefinite);
  try {
    log_eigenvalues(diag({1, 1, 1}), diag({1, -2, 1}));
  } catch (const NonPositiveDefinite& e) {
    CHECK(e.eigenvalue() <= 0);
  }
}

TEST_CASE("symmetric power representation") {
  CHECK(sym_power_rep(Mobius::identity(), 1).isApprox(Eigen::MatrixXcd::Identity(3, 3)));
  const double t = 1.7;
  CHECK(sym_power_rep(Mobius::from_coefficients(t, 0, 0, 1 / t), 1).isApprox(diag({1 / (t * t), 1, t * t})));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Mobius a = random_mobius(rng, 2), b = random_mobius(rng, 2);
    for (int k : {1, 2, 3}) {
      const Eigen::MatrixXcd Ta = sym_power_rep(a, k);
      CHECK((Ta - rep_oracle(a, k)).norm() <= 1e-12 * (1 + Ta.norm()));
      CHECK(std::abs(Ta.determinant()) == doctest::Approx(1).epsilon(1e-9));
      // s(z) -> (gamma z + delta)^{2k} s(w(z)) reverses products
      CHECK((sym_power_rep(a * b, k) - sym_power_rep(b, k) * Ta).norm() <= 1e-10 * (1 + Ta.norm()));
      CHECK((sym_power_rep(a * a, k) - Ta * Ta).norm() <= 1e-10 * (1 + Ta.norm() * Ta.norm()));
    }
  }
}

TEST_CASE("action composes as a right action") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXcd M = chain_descriptor(4, 1);
  const Mobius a = random_mobius(rng, 1.5), b = random_mobius(rng, 1.5);
  const Eigen::MatrixXcd lhs = act(act(M, a, 1), b, 1);
  CHECK((lhs - act(M, b * a, 1)).norm() <= 1e-9 * lhs.norm());
  // theta^* M theta stays Hermitian
  CHECK((act(M, a, 1) - act(M, a, 1).adjoint()).norm() <= 1e-12 * act(M, a, 1).norm());
}

TEST_CASE("Mobius parameterisation") {
  CHECK(params_to_mobius(identity_params()).m.isApprox(Eigen::Matrix2cd::Identity()));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Mobius w = random_mobius(rng, 2);
    const Mobius back = params_to_mobius(mobius_to_params(w));
    CHECK(std::min((back.m - w.m).norm(), (back.m + w.m).norm()) < 1e-12);
    CHECK(std::abs(back.m.determinant() - 1.0) < 1e-12);
  }
  MobiusParams bad = MobiusParams::Zero();
  bad(2) = 1;
  CHECK_THROWS_AS(params_to_mobius(bad), DomainError);
}

TEST_CASE("octahedral rotations are 24 distinct unitary maps") {
  const auto rots = octahedral_rotations();
  REQUIRE(rots.size() == 24);
  CHECK(rots[0].m.isApprox(Eigen::Matrix2cd::Identity()));
  for (std::size_t i = 0; i < rots.size(); ++i) {
    CHECK((rots[i].m * rots[i].m.adjoint()).isApprox(Eigen::Matrix2cd::Identity(), 1e-12));
    CHECK(std::abs(rots[i].m.determinant() - 1.0) < 1e-12);
    for (std::size_t j = 0; j < i; ++j)
      CHECK(std::min((rots[i].m - rots[j].m).norm(), (rots[i].m + rots[j].m).norm()) > 0.1);
  }
}

TEST_CASE("sanitize") {
  const Eigen::MatrixXcd M = chain_descriptor(3, 1);
  const auto ok = sanitize(M);
  CHECK(ok.factor == 1);
  CHECK(ok.M.isApprox(M));

  const auto small = sanitize(1e-4 * Eigen::MatrixXcd::Identity(3, 3));
  CHECK(small.factor == 10);
  CHECK(small.M.isApprox(1e-3 * Eigen::MatrixXcd::Identity(3, 3)));
  CHECK(sanitize(1e-6 * Eigen::MatrixXcd::Identity(3, 3)).factor == 1000);
  CHECK_THROWS_AS(sanitize(1e-8 * Eigen::MatrixXcd::Identity(3, 3)), NonPositiveDefinite);
  CHECK_THROWS_AS(sanitize(diag({1, -0.5, 2})), NonPositiveDefinite);
  CHECK_THROWS_AS(sanitize(diag({1, 1e-14, 1})), NonPositiveDefinite);

  // only the Hermitian part is kept
  Eigen::MatrixXcd skew = M;
  skew(0, 1) += cplx(0.01, 0.02);
  CHECK(sanitize(skew).M.isApprox(0.5 * (skew + skew.adjoint())));
}

TEST_CASE("min distance of a matrix to itself is zero at the identity") {
  const Eigen::MatrixXcd M = chain_descriptor(5, 1);
  const auto r = min_distance(M, M, 1);
  CHECK(r.distance < 1e-4);
  CHECK(r.raw < 1e-12);
  CHECK(std::abs(r.scale) < 1e-12);
  CHECK(act(M, r.alignment, 1).isApprox(M, 1e-3));
}

TEST_CASE("orbit invariance") {
  std::mt19937_64 rng(21);
  for (int k : {1, 2}) {
    const Eigen::MatrixXcd M = chain_descriptor(4, k);
    for (int trial = 0; trial < 3; ++trial) {
      const Mobius w = random_mobius(rng, 2);
      const auto r = min_distance(M, act(M, w, k), k);
      CHECK(r.distance <= 1e-2);
    }
  }
}

TEST_CASE("distance is non-negative and bounded by the unaligned value") {
  const Eigen::MatrixXcd A = chain_descriptor(3, 1), B = chain_descriptor(7, 1);
  const auto r = min_distance(A, B, 1);
  CHECK(r.distance >= 0);
  CHECK(r.distance <= r.raw + 1e-12);
  CHECK(r.raw == doctest::Approx(scaled_distance(A, B, 1)));
  CHECK(r.distance == doctest::Approx(std::sqrt(r.objective)).epsilon(1e-12));
  DistanceOptions o;
  o.minimizer = Minimizer::Powell;
  const auto p = min_distance(A, B, 1, o);
  CHECK(std::abs(p.distance - r.distance) < 0.02);
}

TEST_CASE("comparing descriptors of different levels is an error") {
  PipelineOptions o1, o2;
  o2.k = 2;
  const auto a = describe_spheres(synthetic_chain(3), o1), b = describe_spheres(synthetic_chain(3), o2);
  CHECK_THROWS_AS(compare_descriptors(a, b), std::invalid_argument);
  CHECK(compare_descriptors(b, b).alignment.distance < 1e-3);
}
