#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace kqmolsa {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using HomPoint = Eigen::Vector2cd;  // point of the Riemann sphere, [num : den]

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFourPi = 4.0 * kPi;

// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// The molecule cannot be represented (macrocycle, disconnected surface,
// missing radius, ...).
class RejectedMolecule : public Error {
 public:
  RejectedMolecule(std::string reason, const std::string& what)
      : Error(what), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class NonPositiveDefinite : public Error {
 public:
  NonPositiveDefinite(double eigenvalue, const std::string& what)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace kqmolsa
