#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moplms/matrix.hpp"

namespace moplms {

struct LogisticFitOptions {
  double grad_tol = 1e-8;      // stop when the gradient norm falls below this
  std::size_t max_iter = 5000;
};

struct LogisticModel {
  std::vector<double> weights;  // length d
  double intercept = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Binary L2-regularized logistic regression: minimizes the summed negative
// log-likelihood plus lambda ||w||_2^2 (intercept unpenalized) by full-batch
// gradient descent with a backtracking line search.
LogisticModel fit_logistic_l2(const Matrix& x, std::span<const double> y01,
                              double lambda, const LogisticFitOptions& options = {});

// sigma(w'x + b) for one sample.
double logistic_probability(const LogisticModel& model, std::span<const double> x);

}  // namespace moplms
