#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "moplms/matrix.hpp"
#include "moplms/prox.hpp"

namespace moplms {

enum class Task { regression, classification };

std::string task_name(Task task);
Task task_from_name(const std::string& name);

// Paired inputs and outputs. Classification outputs must be exactly {0, 1}.
struct Dataset {
  Matrix x;
  Matrix y;
  Task task;

  Dataset(Matrix x_in, Matrix y_in, Task task_in);

  std::size_t samples() const { return x.rows(); }
  std::size_t inputs() const { return x.cols(); }
  std::size_t outputs() const { return y.cols(); }

  Dataset take_rows(std::span<const std::size_t> rows) const;
};

inline constexpr int kModelSchemaVersion = 1;

// The composed two-stage model: stage 1 maps landmark outputs to all outputs
// through a_hat, stage 2 maps inputs to the landmark outputs. For
// classification the stage-2 columns are logistic weight vectors and y_means
// is all zeros.
struct LandmarkModel {
  Task task = Task::regression;
  std::vector<std::size_t> landmarks;   // ascending, size s >= 1
  Matrix a_hat;                         // k x k, rows outside landmarks exactly 0
  Matrix stage2_weights;                // d x s, one column per landmark
  std::vector<double> stage2_intercepts;  // length s
  std::vector<double> y_means;             // length k
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_stage2 = 0.0;
};

// Support of the estimate, ascending. Throws if the support is empty
// (over-regularized; lower lambda1).
std::vector<std::size_t> select_landmarks(const CoefficientEstimate& estimate);

// Runs the full pipeline: landmark selection on the output matrix, then a
// per-landmark input model (ridge for regression, L2-logistic for
// classification). When stage1 is non-null it receives the selection
// estimate (objective trace, iterations, support).
LandmarkModel fit_landmark_model(const Dataset& dataset, double lambda1,
                                 double lambda2, double lambda_stage2,
                                 const SolverConfig& solver = {},
                                 CoefficientEstimate* stage1 = nullptr);

struct PredictOptions {
  // Route stage-2 probabilities instead of hardened labels through a_hat
  // (classification only).
  bool propagate_probabilities = false;
};

// Stage-2 prediction on the landmark coordinates, composed through a_hat for
// the rest. Classification outputs are hardened at the strict > 0.5 rule.
Matrix predict(const LandmarkModel& model, const Matrix& x_new,
               const PredictOptions& options = {});

}  // namespace moplms
