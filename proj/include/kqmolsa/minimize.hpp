#pragma once

#include <functional>

#include <Eigen/Core>

namespace kqmolsa {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct MinimizeOptions {
  double initial_step = 0.1;  // simplex edge / initial direction length
  double tolerance = 1e-8;    // objective spread (NM) or per-sweep decrease (Powell)
  int max_iterations = 2000;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex (standard coefficients 1, 2, 1/2, 1/2).
MinimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& start, const MinimizeOptions& opts = {});

/// Powell's direction-set method with Brent line searches.
MinimizeResult powell(const Objective& f, const Eigen::VectorXd& start, const MinimizeOptions& opts = {});

/// Brent minimization of g on the bracket a < b < c (g(b) below both ends).
double brent(const std::function<double(double)>& g, double a, double b, double c, double tol, double& fmin,
             int max_iter = 100);

}  // namespace kqmolsa
