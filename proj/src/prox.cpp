#include "moplms/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace moplms {

void SolverConfig::validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw std::invalid_argument("SolverConfig: penalty weights must be nonnegative");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: tol must be positive");
  }
  if (max_iter == 0) {
    throw std::invalid_argument("SolverConfig: max_iter must be positive");
  }
  if (!(alpha_min > 0.0) || !(alpha_min <= alpha_max)) {
    throw std::invalid_argument(
        "SolverConfig: need 0 < alpha_min <= alpha_max");
  }
  if (!(backtrack_factor > 1.0)) {
    throw std::invalid_argument("SolverConfig: backtrack_factor must exceed 1");
  }
  if (!(suff_decrease > 0.0)) {
    throw std::invalid_argument("SolverConfig: suff_decrease must be positive");
  }
}

std::vector<double> prox_group_l1(std::span<const double> u, double tau1, double tau2) {
  if (tau1 < 0.0 || tau2 < 0.0) {
    throw std::invalid_argument("prox_group_l1: thresholds must be nonnegative");
  }
  std::vector<double> h(u.size(), 0.0);
  double norm_sq = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double mag = std::abs(u[j]) - tau2;
    if (mag > 0.0) {
      h[j] = u[j] > 0.0 ? mag : -mag;
      norm_sq += mag * mag;
    }
  }
  const double norm = std::sqrt(norm_sq);
  if (norm <= tau1 || norm == 0.0) {
    std::fill(h.begin(), h.end(), 0.0);
    return h;
  }
  const double shrink = (norm - tau1) / norm;
  for (double& hj : h) hj *= shrink;
  return h;
}

namespace {

void check_triplet(const Matrix& x, const Matrix& y, const Matrix& b,
                   const char* op_name) {
  if (x.rows() != y.rows() || x.cols() != b.rows() || b.cols() != y.cols()) {
    throw std::invalid_argument(
        std::string(op_name) + ": dimension mismatch (X " +
        std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + ", Y " +
        std::to_string(y.rows()) + "x" + std::to_string(y.cols()) + ", B " +
        std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

double objective_loss(const Matrix& x, const Matrix& y, const Matrix& b) {
  return frobenius_sq(subtract(y, matmul(x, b)));
}

double group_l1_penalty(const Matrix& b, double lambda1, double lambda2) {
  double penalty = 0.0;
  if (lambda1 > 0.0) {
    for (double n : row_l2_norms(b)) penalty += lambda1 * n;
  }
  if (lambda2 > 0.0) penalty += lambda2 * elementwise_l1(b);
  return penalty;
}

}  // namespace

double objective(const Matrix& x, const Matrix& y, const Matrix& b, double lambda1,
                 double lambda2) {
  check_triplet(x, y, b, "objective");
  const Matrix residual = subtract(y, matmul(x, b));
  return frobenius_sq(residual) + group_l1_penalty(b, lambda1, lambda2);
}

Matrix loss_gradient(const Matrix& x, const Matrix& y, const Matrix& b) {
  check_triplet(x, y, b, "loss_gradient");
  const Matrix residual = subtract(matmul(x, b), y);
  return scale(transpose_matmul(x, residual), 2.0);
}

namespace detail {

ProxLoopResult prox_gradient_loop(
    const Matrix& x, const Matrix& y, const SolverConfig& config,
    const std::function<Matrix(const Matrix&, double)>& prox,
    const std::function<double(const Matrix&)>& penalty) {
  config.validate();
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("prox_gradient_loop: X has " +
                                std::to_string(x.rows()) + " rows, Y has " +
                                std::to_string(y.rows()));
  }
  const std::size_t p = x.cols(), k = y.cols();

  ProxLoopResult result;
  result.b = Matrix(p, k);
  double f_current = frobenius_sq(y) + penalty(result.b);
  result.objective_trace.push_back(f_current);

  // Lipschitz-based first step parameter; refined by Barzilai-Borwein after
  // the first accepted iterate.
  double alpha = 2.0 * largest_sq_singular_value(x);
  alpha = std::clamp(alpha, config.alpha_min, config.alpha_max);

  Matrix grad = loss_gradient(x, y, result.b);
  Matrix prev_b;
  Matrix prev_grad;
  bool have_previous = false;

  for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
    if (have_previous) {
      double num = 0.0, den = 0.0;
      for (std::size_t idx = 0; idx < grad.values().size(); ++idx) {
        const double db = result.b.data()[idx] - prev_b.data()[idx];
        const double dg = grad.data()[idx] - prev_grad.data()[idx];
        num += dg * db;
        den += db * db;
      }
      if (den > 0.0 && num > 0.0) {
        alpha = std::clamp(num / den, config.alpha_min, config.alpha_max);
      }
    }

    bool accepted = false;
    Matrix candidate;
    double f_candidate = 0.0;
    double step_sq = 0.0;
    while (true) {
      Matrix u(p, k);
      const double inv_alpha = 1.0 / alpha;
      for (std::size_t idx = 0; idx < u.values().size(); ++idx) {
        u.data()[idx] = result.b.data()[idx] - inv_alpha * grad.data()[idx];
      }
      candidate = prox(u, alpha);
      f_candidate = objective_loss(x, y, candidate) + penalty(candidate);
      if (!std::isfinite(f_candidate)) {
        throw std::runtime_error("prox_gradient_loop: objective diverged to a "
                                 "non-finite value");
      }
      step_sq = 0.0;
      for (std::size_t idx = 0; idx < candidate.values().size(); ++idx) {
        const double d = candidate.data()[idx] - result.b.data()[idx];
        step_sq += d * d;
      }
      if (f_candidate <= f_current - config.suff_decrease * alpha * step_sq) {
        accepted = true;
        break;
      }
      if (alpha >= config.alpha_max) break;  // step budget exhausted
      alpha = std::min(alpha * config.backtrack_factor, config.alpha_max);
    }
    if (!accepted) {
      result.iterations = iter - 1;
      result.converged = false;
      return result;
    }

    prev_b = std::move(result.b);
    prev_grad = std::move(grad);
    have_previous = true;
    result.b = std::move(candidate);
    grad = loss_gradient(x, y, result.b);

    const double decrease = f_current - f_candidate;
    f_current = f_candidate;
    result.objective_trace.push_back(f_current);
    result.iterations = iter;
    if (decrease <= config.tol * std::max(1.0, f_current)) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

}  // namespace detail

CoefficientEstimate sparsa_fit(const Matrix& x, const Matrix& y,
                               const SolverConfig& config) {
  auto prox = [&config](const Matrix& u, double alpha) {
    Matrix z(u.rows(), u.cols());
    const double tau1 = config.lambda1 / alpha;
    const double tau2 = config.lambda2 / alpha;
    for (std::size_t g = 0; g < u.rows(); ++g) {
      const std::vector<double> row = prox_group_l1(u.row(g), tau1, tau2);
      std::copy(row.begin(), row.end(), z.row(g).begin());
    }
    return z;
  };
  auto penalty = [&config](const Matrix& b) {
    return group_l1_penalty(b, config.lambda1, config.lambda2);
  };
  detail::ProxLoopResult loop = detail::prox_gradient_loop(x, y, config, prox, penalty);

  CoefficientEstimate estimate;
  estimate.row_norms = row_l2_norms(loop.b);
  for (std::size_t g = 0; g < estimate.row_norms.size(); ++g) {
    if (estimate.row_norms[g] > 0.0) estimate.support.push_back(g);
  }
  estimate.a_hat = std::move(loop.b);
  estimate.objective_trace = std::move(loop.objective_trace);
  estimate.iterations = loop.iterations;
  estimate.converged = loop.converged;
  return estimate;
}

double kill_lambda(const Matrix& x, const Matrix& y, double lambda2) {
  if (lambda2 < 0.0) {
    throw std::invalid_argument("kill_lambda: lambda2 must be nonnegative");
  }
  const Matrix xty = transpose_matmul(x, y);
  double worst = 0.0;
  for (std::size_t g = 0; g < xty.rows(); ++g) {
    double norm_sq = 0.0;
    for (double v : xty.row(g)) {
      const double mag = std::abs(2.0 * v) - lambda2;
      if (mag > 0.0) norm_sq += mag * mag;
    }
    worst = std::max(worst, std::sqrt(norm_sq));
  }
  return worst;
}

}  // namespace moplms
