#include "moplms/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace moplms {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

struct Theta {
  std::vector<double> w;
  double b = 0.0;
};

double nll_value(const Matrix& x, std::span<const double> y, const Theta& theta,
                 double lambda, std::vector<double>& z_buffer) {
  const std::size_t n = x.rows(), d = x.cols();
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    double z = theta.b;
    for (std::size_t j = 0; j < d; ++j) z += xi[j] * theta.w[j];
    z_buffer[i] = z;
    value += log1p_exp(z) - y[i] * z;
  }
  for (double wj : theta.w) value += lambda * wj * wj;
  return value;
}

}  // namespace

LogisticModel fit_logistic_l2(const Matrix& x, std::span<const double> y01,
                              double lambda, const LogisticFitOptions& options) {
  const std::size_t n = x.rows(), d = x.cols();
  if (y01.size() != n) {
    throw std::invalid_argument("fit_logistic_l2: label count " +
                                std::to_string(y01.size()) + " does not match " +
                                std::to_string(n) + " samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (y01[i] != 0.0 && y01[i] != 1.0) {
      throw std::invalid_argument("fit_logistic_l2: label at row " +
                                  std::to_string(i) + " is not 0 or 1");
    }
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("fit_logistic_l2: lambda must be nonnegative");
  }

  Theta theta{std::vector<double>(d, 0.0), 0.0};
  std::vector<double> z(n, 0.0);
  double f = nll_value(x, y01, theta, lambda, z);

  Theta grad{std::vector<double>(d, 0.0), 0.0};
  Theta prev_grad{std::vector<double>(d, 0.0), 0.0};
  Theta prev_theta = theta;
  double step = 1.0;
  bool have_previous = false;

  LogisticModel model;
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    std::fill(grad.w.begin(), grad.w.end(), 0.0);
    grad.b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = sigmoid(z[i]) - y01[i];
      auto xi = x.row(i);
      for (std::size_t j = 0; j < d; ++j) grad.w[j] += r * xi[j];
      grad.b += r;
    }
    double grad_norm_sq = grad.b * grad.b;
    for (std::size_t j = 0; j < d; ++j) {
      grad.w[j] += 2.0 * lambda * theta.w[j];
      grad_norm_sq += grad.w[j] * grad.w[j];
    }
    if (std::sqrt(grad_norm_sq) <= options.grad_tol) {
      model.converged = true;
      break;
    }

    // Spectral step guess from the previous pair, then Armijo backtracking.
    if (have_previous) {
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double dw = theta.w[j] - prev_theta.w[j];
        const double dg = grad.w[j] - prev_grad.w[j];
        num += dw * dw;
        den += dw * dg;
      }
      const double db = theta.b - prev_theta.b;
      const double dgb = grad.b - prev_grad.b;
      num += db * db;
      den += db * dgb;
      if (den > 0.0 && num > 0.0) step = std::clamp(num / den, 1e-12, 1e12);
    }

    prev_theta = theta;
    prev_grad = grad;
    have_previous = true;

    Theta trial{std::vector<double>(d, 0.0), 0.0};
    double f_trial = 0.0;
    bool moved = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t j = 0; j < d; ++j) trial.w[j] = theta.w[j] - step * grad.w[j];
      trial.b = theta.b - step * grad.b;
      f_trial = nll_value(x, y01, trial, lambda, z);
      if (std::isfinite(f_trial) &&
          f_trial <= f - 1e-4 * step * grad_norm_sq) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // z holds the trial evaluation; restore it for the current theta.
      nll_value(x, y01, theta, lambda, z);
      break;
    }
    theta = std::move(trial);
    f = f_trial;
    model.iterations = iter;
  }

  model.weights = std::move(theta.w);
  model.intercept = theta.b;
  return model;
}

double logistic_probability(const LogisticModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    throw std::invalid_argument("logistic_probability: feature length mismatch");
  }
  double z = model.intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += model.weights[j] * x[j];
  return sigmoid(z);
}

}  // namespace moplms
