#include "moplms/landmark.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "moplms/logistic.hpp"

namespace moplms {

std::string task_name(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

Task task_from_name(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "classification") return Task::classification;
  throw std::invalid_argument("unknown task '" + name +
                              "' (expected regression or classification)");
}

Dataset::Dataset(Matrix x_in, Matrix y_in, Task task_in)
    : x(std::move(x_in)), y(std::move(y_in)), task(task_in) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument("Dataset: X and Y must be non-empty");
  }
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("Dataset: X has " + std::to_string(x.rows()) +
                                " rows but Y has " + std::to_string(y.rows()));
  }
  if (task == Task::classification) {
    for (std::size_t i = 0; i < y.rows(); ++i) {
      for (std::size_t j = 0; j < y.cols(); ++j) {
        if (y(i, j) != 0.0 && y(i, j) != 1.0) {
          throw std::invalid_argument("Dataset: classification label at (" +
                                      std::to_string(i) + ", " + std::to_string(j) +
                                      ") is not 0 or 1");
        }
      }
    }
  }
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  if (rows.empty()) {
    throw std::invalid_argument("Dataset::take_rows: empty row set");
  }
  Matrix xs(rows.size(), x.cols());
  Matrix ys(rows.size(), y.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= x.rows()) {
      throw std::invalid_argument("Dataset::take_rows: row index out of range");
    }
    for (std::size_t j = 0; j < x.cols(); ++j) xs(i, j) = x(rows[i], j);
    for (std::size_t j = 0; j < y.cols(); ++j) ys(i, j) = y(rows[i], j);
  }
  return Dataset(std::move(xs), std::move(ys), task);
}

std::vector<std::size_t> select_landmarks(const CoefficientEstimate& estimate) {
  if (estimate.support.empty()) {
    throw std::runtime_error(
        "select_landmarks: empty landmark support (over-regularized; "
        "lower lambda1)");
  }
  return estimate.support;  // support is already ascending
}

LandmarkModel fit_landmark_model(const Dataset& dataset, double lambda1,
                                 double lambda2, double lambda_stage2,
                                 const SolverConfig& solver,
                                 CoefficientEstimate* stage1_out) {
  if (!(lambda_stage2 > 0.0)) {
    throw std::invalid_argument("fit_landmark_model: lambda_stage2 must be positive");
  }
  const std::size_t k = dataset.outputs();

  LandmarkModel model;
  model.task = dataset.task;
  model.lambda1 = lambda1;
  model.lambda2 = lambda2;
  model.lambda_stage2 = lambda_stage2;

  SolverConfig stage1 = solver;
  stage1.lambda1 = lambda1;
  stage1.lambda2 = lambda2;

  // Step 1: landmark selection on the output matrix. Regression centers Y;
  // classification runs on the raw {0,1} labels.
  CoefficientEstimate estimate = [&] {
    if (dataset.task == Task::regression) {
      model.y_means = column_means(dataset.y);
      const Matrix centered = center_columns(dataset.y, model.y_means);
      return sparsa_fit(centered, centered, stage1);
    }
    model.y_means.assign(k, 0.0);
    return sparsa_fit(dataset.y, dataset.y, stage1);
  }();
  model.landmarks = select_landmarks(estimate);
  model.a_hat = estimate.a_hat;
  if (stage1_out != nullptr) *stage1_out = std::move(estimate);

  // Step 2: input -> landmark outputs.
  const Matrix y_l = select_columns(dataset.y, model.landmarks);
  const std::size_t s = model.landmarks.size();
  if (dataset.task == Task::regression) {
    // Ridge with an unpenalized intercept, obtained by centering both sides
    // and folding the means into the intercept.
    const std::vector<double> x_means = column_means(dataset.x);
    const std::vector<double> yl_means = column_means(y_l);
    const Matrix w = ridge_solve(center_columns(dataset.x, x_means),
                                 center_columns(y_l, yl_means), lambda_stage2);
    model.stage2_weights = w;
    model.stage2_intercepts.resize(s);
    for (std::size_t c = 0; c < s; ++c) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dataset.inputs(); ++j) dot += x_means[j] * w(j, c);
      model.stage2_intercepts[c] = yl_means[c] - dot;
    }
  } else {
    model.stage2_weights = Matrix(dataset.inputs(), s);
    model.stage2_intercepts.resize(s);
    std::vector<double> labels(dataset.samples());
    for (std::size_t c = 0; c < s; ++c) {
      for (std::size_t i = 0; i < dataset.samples(); ++i) labels[i] = y_l(i, c);
      const LogisticModel fitted = fit_logistic_l2(dataset.x, labels, lambda_stage2);
      for (std::size_t j = 0; j < dataset.inputs(); ++j) {
        model.stage2_weights(j, c) = fitted.weights[j];
      }
      model.stage2_intercepts[c] = fitted.intercept;
    }
  }
  return model;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Matrix predict(const LandmarkModel& model, const Matrix& x_new,
               const PredictOptions& options) {
  if (x_new.cols() != model.stage2_weights.rows()) {
    throw std::invalid_argument("predict: input has " + std::to_string(x_new.cols()) +
                                " columns, model expects " +
                                std::to_string(model.stage2_weights.rows()));
  }
  const std::size_t m = x_new.rows();
  const std::size_t s = model.landmarks.size();
  const std::size_t k = model.a_hat.cols();

  // Stage-2 linear scores, one column per landmark.
  Matrix scores = matmul(x_new, model.stage2_weights);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < s; ++c) scores(i, c) += model.stage2_intercepts[c];

  // Landmark rows of a_hat, for composing the remaining coordinates.
  Matrix a_rows(s, k);
  for (std::size_t c = 0; c < s; ++c)
    for (std::size_t j = 0; j < k; ++j) a_rows(c, j) = model.a_hat(model.landmarks[c], j);

  std::vector<bool> is_landmark(k, false);
  std::vector<std::size_t> landmark_position(k, 0);
  for (std::size_t c = 0; c < s; ++c) {
    is_landmark[model.landmarks[c]] = true;
    landmark_position[model.landmarks[c]] = c;
  }

  Matrix output(m, k);
  if (model.task == Task::regression) {
    // Compose centered landmark predictions through a_hat, then restore the
    // column means.
    Matrix centered(m, s);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < s; ++c) {
        centered(i, c) = scores(i, c) - model.y_means[model.landmarks[c]];
      }
    }
    const Matrix composed = matmul(centered, a_rows);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        output(i, j) = is_landmark[j] ? scores(i, landmark_position[j])
                                      : composed(i, j) + model.y_means[j];
      }
    }
    return output;
  }

  // Classification: harden stage-2 probabilities at the strict > 0.5 rule,
  // propagate the chosen representation through a_hat, and harden again.
  Matrix hard(m, s);
  Matrix routed(m, s);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < s; ++c) {
      const double p = sigmoid(scores(i, c));
      hard(i, c) = p > 0.5 ? 1.0 : 0.0;
      routed(i, c) = options.propagate_probabilities ? p : hard(i, c);
    }
  }
  const Matrix composed = matmul(routed, a_rows);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      output(i, j) = is_landmark[j] ? hard(i, landmark_position[j])
                                    : (composed(i, j) > 0.5 ? 1.0 : 0.0);
    }
  }
  return output;
}

}  // namespace moplms
