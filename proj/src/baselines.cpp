#include "moplms/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moplms/logistic.hpp"

namespace moplms {

std::string baseline_kind_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::one_vs_all: return "one_vs_all";
    case BaselineKind::group_lasso: return "group_lasso";
    case BaselineKind::low_rank: return "low_rank";
  }
  throw std::logic_error("baseline_kind_name: unreachable");
}

BaselineKind baseline_kind_from_name(const std::string& name) {
  if (name == "one_vs_all") return BaselineKind::one_vs_all;
  if (name == "group_lasso") return BaselineKind::group_lasso;
  if (name == "low_rank") return BaselineKind::low_rank;
  throw std::invalid_argument("unknown baseline kind '" + name + "'");
}

namespace {

void fold_means_into_intercepts(BaselineModel& model) {
  const std::size_t d = model.b.rows(), k = model.b.cols();
  model.intercepts.assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double dot = 0.0;
    for (std::size_t f = 0; f < d; ++f) dot += model.x_means[f] * model.b(f, j);
    model.intercepts[j] = model.y_means[j] - dot;
  }
}

void require_regression(const Dataset& dataset, const char* method) {
  if (dataset.task != Task::regression) {
    throw std::invalid_argument(std::string(method) +
                                ": only the regression task is supported");
  }
}

// Orthonormal basis (d x r) of the row space of x, via two-pass modified
// Gram-Schmidt over the rows; rows numerically dependent on earlier ones are
// dropped.
Matrix row_space_basis(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<std::vector<double>> basis;
  std::vector<double> v(d);
  for (std::size_t i = 0; i < n && basis.size() < d; ++i) {
    double norm0 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      v[j] = x(i, j);
      norm0 += v[j] * v[j];
    }
    norm0 = std::sqrt(norm0);
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += q[j] * v[j];
        for (std::size_t j = 0; j < d; ++j) v[j] -= dot * q[j];
      }
    }
    double norm = 0.0;
    for (double vj : v) norm += vj * vj;
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * norm0) continue;
    for (double& vj : v) vj /= norm;
    basis.push_back(v);
  }
  Matrix q(d, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (std::size_t j = 0; j < d; ++j) q(j, c) = basis[c][j];
  }
  return q;
}

// Singular-value thresholding yields coefficients whose spectrum splits
// cleanly into surviving values and round-off noise, so a relative cutoff
// recovers the exact rank.
std::size_t numeric_rank(const Matrix& b) {
  const SvdResult decomp = svd(b);
  double top = 0.0;
  for (double s : decomp.singular_values) top = std::max(top, s);
  if (top <= 0.0) return 0;
  std::size_t rank = 0;
  for (double s : decomp.singular_values) {
    if (s > 1e-8 * top) ++rank;
  }
  return rank;
}

}  // namespace

BaselineModel fit_one_vs_all(const Dataset& dataset, double lambda_reg) {
  BaselineModel model;
  model.kind = BaselineKind::one_vs_all;
  model.task = dataset.task;
  model.lambda = lambda_reg;

  if (dataset.task == Task::regression) {
    model.x_means = column_means(dataset.x);
    model.y_means = column_means(dataset.y);
    // Ridge is column-separable, so the k per-output fits collapse into one
    // multi-output solve.
    model.b = ridge_solve(center_columns(dataset.x, model.x_means),
                          center_columns(dataset.y, model.y_means), lambda_reg);
    fold_means_into_intercepts(model);
    return model;
  }

  const std::size_t d = dataset.inputs(), k = dataset.outputs();
  model.x_means.assign(d, 0.0);
  model.y_means.assign(k, 0.0);
  model.b = Matrix(d, k);
  model.intercepts.assign(k, 0.0);
  std::vector<double> labels(dataset.samples());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < dataset.samples(); ++i) labels[i] = dataset.y(i, j);
    const LogisticModel fitted = fit_logistic_l2(dataset.x, labels, lambda_reg);
    for (std::size_t f = 0; f < d; ++f) model.b(f, j) = fitted.weights[f];
    model.intercepts[j] = fitted.intercept;
  }
  return model;
}

BaselineModel fit_group_lasso(const Dataset& dataset, double lambda_group,
                              const SolverConfig& solver) {
  require_regression(dataset, "fit_group_lasso");
  BaselineModel model;
  model.kind = BaselineKind::group_lasso;
  model.task = Task::regression;
  model.lambda = lambda_group;
  model.x_means = column_means(dataset.x);
  model.y_means = column_means(dataset.y);

  SolverConfig config = solver;
  config.lambda1 = lambda_group;
  config.lambda2 = 0.0;
  const CoefficientEstimate estimate =
      sparsa_fit(center_columns(dataset.x, model.x_means),
                 center_columns(dataset.y, model.y_means), config);
  model.b = estimate.a_hat;
  fold_means_into_intercepts(model);
  return model;
}

BaselineModel fit_low_rank(const Dataset& dataset, double lambda_trace,
                           const SolverConfig& solver) {
  require_regression(dataset, "fit_low_rank");
  if (lambda_trace < 0.0) {
    throw std::invalid_argument("fit_low_rank: lambda_trace must be nonnegative");
  }
  BaselineModel model;
  model.kind = BaselineKind::low_rank;
  model.task = Task::regression;
  model.lambda = lambda_trace;
  model.x_means = column_means(dataset.x);
  model.y_means = column_means(dataset.y);

  const Matrix xc = center_columns(dataset.x, model.x_means);
  const Matrix yc = center_columns(dataset.y, model.y_means);

  // Every iterate from B = 0 stays in the row space of xc, and both the loss
  // and the trace norm are invariant under an orthonormal change of basis, so
  // when that space is low-dimensional (n < d) the loop runs in row-space
  // coordinates Z with B = Q Z: the thresholding SVDs shrink from d x k to
  // r x k.
  const Matrix q = row_space_basis(xc);
  const bool economy = q.cols() > 0 && q.cols() < xc.cols();
  const Matrix design = economy ? matmul(xc, q) : xc;

  auto prox = [lambda_trace](const Matrix& u, double alpha) {
    const SvdResult decomp = svd(u);
    const double tau = lambda_trace / alpha;
    const std::size_t r = decomp.singular_values.size();
    std::vector<double> shrunk(r);
    for (std::size_t i = 0; i < r; ++i) {
      shrunk[i] = std::max(0.0, decomp.singular_values[i] - tau);
    }
    Matrix z(u.rows(), u.cols());
    for (std::size_t i = 0; i < u.rows(); ++i) {
      for (std::size_t j = 0; j < u.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < r; ++l) {
          if (shrunk[l] == 0.0) continue;
          sum += decomp.u(i, l) * shrunk[l] * decomp.v(j, l);
        }
        z(i, j) = sum;
      }
    }
    return z;
  };
  auto penalty = [lambda_trace](const Matrix& b) {
    if (lambda_trace == 0.0) return 0.0;
    double sum = 0.0;
    for (double s : svd(b).singular_values) sum += s;
    return lambda_trace * sum;
  };

  SolverConfig config = solver;
  config.lambda1 = 0.0;
  config.lambda2 = 0.0;
  const detail::ProxLoopResult loop =
      detail::prox_gradient_loop(design, yc, config, prox, penalty);
  model.b = economy ? matmul(q, loop.b) : loop.b;
  model.rank = numeric_rank(model.b);
  fold_means_into_intercepts(model);
  return model;
}

Matrix predict_baseline(const BaselineModel& model, const Matrix& x_new) {
  if (x_new.cols() != model.b.rows()) {
    throw std::invalid_argument("predict_baseline: input has " +
                                std::to_string(x_new.cols()) +
                                " columns, model expects " +
                                std::to_string(model.b.rows()));
  }
  Matrix scores = matmul(x_new, model.b);
  for (std::size_t i = 0; i < scores.rows(); ++i)
    for (std::size_t j = 0; j < scores.cols(); ++j)
      scores(i, j) += model.intercepts[j];
  if (model.task == Task::regression) return scores;

  Matrix labels(scores.rows(), scores.cols());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      // sigma(z) > 0.5 exactly when z > 0.
      labels(i, j) = scores(i, j) > 0.0 ? 1.0 : 0.0;
    }
  }
  return labels;
}

}  // namespace moplms
