#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "moplms/landmark.hpp"
#include "moplms/matrix.hpp"
#include "moplms/prox.hpp"

namespace moplms {

enum class BaselineKind { one_vs_all, group_lasso, low_rank };

std::string baseline_kind_name(BaselineKind kind);
BaselineKind baseline_kind_from_name(const std::string& name);

// A direct input -> output linear model, kept deliberately uniform across the
// three reference methods.
struct BaselineModel {
  BaselineKind kind = BaselineKind::one_vs_all;
  Task task = Task::regression;
  Matrix b;                        // d x k coefficients
  std::vector<double> intercepts;  // length k
  double lambda = 0.0;             // the method's regularization weight
  std::size_t rank = 0;            // low_rank only
  std::vector<double> x_means;     // length d
  std::vector<double> y_means;     // length k
};

// k independent per-output models: ridge columns for regression, L2-logistic
// for classification.
BaselineModel fit_one_vs_all(const Dataset& dataset, double lambda_reg);

// argmin_B ||Yc - Xc B||_F^2 + lambda_group ||B||_{1,2} with input features
// (rows of B) as the groups; regression only.
BaselineModel fit_group_lasso(const Dataset& dataset, double lambda_group,
                              const SolverConfig& solver = {});

// argmin_B ||Yc - Xc B||_F^2 + lambda_trace * (sum of singular values of B),
// solved by proximal gradient with singular-value soft-thresholding;
// regression only.
BaselineModel fit_low_rank(const Dataset& dataset, double lambda_trace,
                           const SolverConfig& solver = {});

// X B + intercepts; classification probabilities hardened at the strict
// > 0.5 rule.
Matrix predict_baseline(const BaselineModel& model, const Matrix& x_new);

}  // namespace moplms
