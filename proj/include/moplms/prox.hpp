#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "moplms/matrix.hpp"

namespace moplms {

// Tuning knobs for the monotone proximal-gradient solver.
struct SolverConfig {
  double lambda1 = 0.0;          // group (row) penalty weight
  double lambda2 = 0.0;          // elementwise penalty weight
  double tol = 1e-8;             // relative objective-change stopping threshold
  std::size_t max_iter = 10000;
  double alpha_min = 1e-10;      // step-parameter clamp
  double alpha_max = 1e10;
  double backtrack_factor = 2.0; // step-parameter inflation on rejection
  double suff_decrease = 1e-4;   // sufficient-decrease constant

  void validate() const;  // throws std::invalid_argument on a bad field
};

// Result of a penalized least-squares fit. Rows outside `support` are exactly
// zero, so the support needs no threshold.
struct CoefficientEstimate {
  Matrix a_hat;
  std::vector<double> row_norms;
  std::vector<std::size_t> support;     // ascending indices of nonzero rows
  std::vector<double> objective_trace;  // nonincreasing, accepted iterates
  std::size_t iterations = 0;
  bool converged = false;
};

// argmin_z 0.5 ||z - u||_2^2 + tau1 ||z||_2 + tau2 ||z||_1, in closed form:
// soft-threshold each entry by tau2, then shrink the surviving vector's norm
// by tau1. Returns exact zeros.
std::vector<double> prox_group_l1(std::span<const double> u, double tau1, double tau2);

// ||Y - XB||_F^2 + lambda1 ||B||_{1,2} + lambda2 ||B||_1 with rows of B as
// the groups.
double objective(const Matrix& x, const Matrix& y, const Matrix& b, double lambda1,
                 double lambda2);

// Gradient of ||Y - XB||_F^2 in B, i.e. 2 X^T (XB - Y).
Matrix loss_gradient(const Matrix& x, const Matrix& y, const Matrix& b);

// Proximal-gradient solver for the squared loss plus the combined row-group
// and elementwise penalties. Starts at B = 0, uses a spectral
// (Barzilai-Borwein) step parameter refined by backtracking, and accepts a
// candidate only if the objective drops by at least
// suff_decrease * alpha * ||B_new - B||_F^2. For landmark selection call with
// x == y.
CoefficientEstimate sparsa_fit(const Matrix& x, const Matrix& y,
                               const SolverConfig& config);

// Smallest lambda1 for which B = 0 is a fixed point of the prox step at any
// admissible step parameter: max over rows g of ||soft(2 (X^T Y)_g, lambda2)||_2.
double kill_lambda(const Matrix& x, const Matrix& y, double lambda2);

namespace detail {

struct ProxLoopResult {
  Matrix b;
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  bool converged = false;
};

// Shared monotone proximal-gradient engine: `prox` maps (U, alpha) to the
// minimizer of alpha/2 ||Z - U||_F^2 + penalty(Z); `penalty` evaluates the
// regularizer. Used by sparsa_fit and by the trace-norm baseline.
ProxLoopResult prox_gradient_loop(
    const Matrix& x, const Matrix& y, const SolverConfig& config,
    const std::function<Matrix(const Matrix&, double)>& prox,
    const std::function<double(const Matrix&)>& penalty);

}  // namespace detail

}  // namespace moplms
