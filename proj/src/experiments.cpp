#include "moplms/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "moplms/prox.hpp"
#include "moplms/rng.hpp"

namespace moplms {
namespace {

// Sub-stream identifiers hashed into the seed so every random object has its
// own independent, order-insensitive stream.
enum StreamId : std::uint64_t {
  kStreamTrainX = 0,
  kStreamWStar = 1,
  kStreamAStar = 2,
  kStreamTrainLandmarkNoise = 3,
  kStreamTrainDependentNoise = 4,
  kStreamTestX = 5,
  kStreamTestLandmarkNoise = 6,
  kStreamTestDependentNoise = 7,
  kStreamArInnovations = 8,
  kStreamArDependentNoise = 9,
  kStreamArCoefficients = 13,
};

constexpr std::size_t kArBurnIn = 100;
constexpr double kRecoveryWithinRowDensity = 0.1;

Matrix random_normal(std::size_t rows, std::size_t cols, Rng& rng,
                     double scale = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

void add_noise(Matrix& m, Rng& rng, double sigma) {
  if (sigma == 0.0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += sigma * rng.normal();
  }
}

std::size_t planted_row_nnz(std::size_t dependents, double density) {
  const auto wanted =
      static_cast<std::size_t>(std::llround(density * static_cast<double>(dependents)));
  return std::min(dependents, std::max<std::size_t>(1, wanted));
}

void fill_planted_row(Matrix& block, std::size_t row,
                      std::vector<std::size_t> positions, bool unit_row,
                      Rng& rng) {
  std::sort(positions.begin(), positions.end());
  double norm_sq = 0.0;
  for (std::size_t j : positions) {
    block(row, j) = rng.sign() * rng.uniform(0.5, 1.5);
    norm_sq += block(row, j) * block(row, j);
  }
  if (unit_row) {
    const double norm = std::sqrt(norm_sq);
    for (std::size_t j : positions) block(row, j) /= norm;
  }
}

// The s x (k - s) dependency block: each row carries `nnz` entries at
// uniformly sampled positions with fair-signed magnitudes in [0.5, 1.5].
Matrix planted_block(std::size_t s, std::size_t dependents, double density,
                     bool unit_rows, Rng& rng) {
  const std::size_t nnz = planted_row_nnz(dependents, density);
  Matrix block(s, dependents);
  for (std::size_t i = 0; i < s; ++i) {
    fill_planted_row(block, i, rng.sample_without_replacement(dependents, nnz),
                     unit_rows, rng);
  }
  return block;
}

// Variant with pairwise-disjoint row supports (one global position draw split
// across the rows). Keeping every dependent column driven by at most one
// landmark bounds the column-wise coefficient mass below 1, which is the
// mutual-incoherence condition exact support recovery rests on; independent
// per-row draws violate it often enough to cap the recovery rate well below 1
// at any sample size.
Matrix disjoint_planted_block(std::size_t s, std::size_t dependents,
                              double density, bool unit_rows, Rng& rng) {
  const std::size_t nnz = planted_row_nnz(dependents, density);
  if (s * nnz > dependents) {
    throw std::invalid_argument(
        "recovery_experiment: s * nnz planted entries exceed the " +
        std::to_string(dependents) + " dependent columns");
  }
  const std::vector<std::size_t> all =
      rng.sample_without_replacement(dependents, s * nnz);
  Matrix block(s, dependents);
  for (std::size_t i = 0; i < s; ++i) {
    fill_planted_row(block, i,
                     {all.begin() + static_cast<std::ptrdiff_t>(i * nnz),
                      all.begin() + static_cast<std::ptrdiff_t>((i + 1) * nnz)},
                     unit_rows, rng);
  }
  return block;
}

// Planted rows widened to all k outputs (zeros over the landmark columns) for
// the support-overlap diagnostic.
Matrix widen_planted_rows(const Matrix& block, std::size_t k) {
  const std::size_t s = block.rows();
  Matrix rows(s, k);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < block.cols(); ++j) {
      rows(i, s + j) = block(i, j);
    }
  }
  return rows;
}

Matrix concat_columns(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t i = 0; i < left.rows(); ++i) {
    for (std::size_t j = 0; j < left.cols(); ++j) out(i, j) = left(i, j);
    for (std::size_t j = 0; j < right.cols(); ++j) {
      out(i, left.cols() + j) = right(i, j);
    }
  }
  return out;
}

Matrix build_outputs(const Matrix& x, const Matrix& w_star,
                     const Matrix& a_block, const SyntheticSpec& spec,
                     Rng& landmark_noise, Rng& dependent_noise) {
  Matrix y_landmark = matmul(x, w_star);
  add_noise(y_landmark, landmark_noise, spec.sigma_landmark);
  if (spec.s == spec.k) return y_landmark;
  Matrix y_dependent = matmul(y_landmark, a_block);
  add_noise(y_dependent, dependent_noise, spec.sigma_dependent);
  return concat_columns(y_landmark, y_dependent);
}

double column_median(const Matrix& m, std::size_t col) {
  std::vector<double> values(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) values[i] = m(i, col);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void require_same_shape(const Matrix& y, const Matrix& y_hat,
                        const char* who) {
  if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols()) {
    throw std::invalid_argument(
        std::string(who) + ": shape mismatch between " +
        std::to_string(y.rows()) + "x" + std::to_string(y.cols()) + " and " +
        std::to_string(y_hat.rows()) + "x" + std::to_string(y_hat.cols()));
  }
}

void require_binary(const Matrix& m, const char* who, const char* arg) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0 && m(i, j) != 1.0) {
        throw std::invalid_argument(
            std::string(who) + ": " + arg + " has non-binary entry at (" +
            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (k == 0) throw std::invalid_argument("SyntheticSpec: k must be positive");
  if (d == 0) throw std::invalid_argument("SyntheticSpec: d must be positive");
  if (s == 0 || s > k) {
    throw std::invalid_argument("SyntheticSpec: s must satisfy 1 <= s <= k");
  }
  if (n_train == 0 || n_test == 0) {
    throw std::invalid_argument(
        "SyntheticSpec: n_train and n_test must be positive");
  }
  if (!(sigma_landmark >= 0.0) || !std::isfinite(sigma_landmark) ||
      !(sigma_dependent >= 0.0) || !std::isfinite(sigma_dependent)) {
    throw std::invalid_argument(
        "SyntheticSpec: noise standard deviations must be finite and >= 0");
  }
  if (!(within_row_density > 0.0) || within_row_density > 1.0) {
    throw std::invalid_argument(
        "SyntheticSpec: within_row_density must lie in (0, 1]");
  }
}

SyntheticData gen_synthetic_regression(const SyntheticSpec& spec) {
  spec.validate();

  Rng x_train_rng = Rng::split(spec.seed, {kStreamTrainX});
  Rng w_rng = Rng::split(spec.seed, {kStreamWStar});
  Rng a_rng = Rng::split(spec.seed, {kStreamAStar});
  Rng train_landmark_rng = Rng::split(spec.seed, {kStreamTrainLandmarkNoise});
  Rng train_dependent_rng = Rng::split(spec.seed, {kStreamTrainDependentNoise});
  Rng x_test_rng = Rng::split(spec.seed, {kStreamTestX});
  Rng test_landmark_rng = Rng::split(spec.seed, {kStreamTestLandmarkNoise});
  Rng test_dependent_rng = Rng::split(spec.seed, {kStreamTestDependentNoise});

  PlantedTruth planted;
  planted.w_star = random_normal(spec.d, spec.s, w_rng,
                                 1.0 / std::sqrt(static_cast<double>(spec.d)));
  planted.l_star.resize(spec.s);
  for (std::size_t i = 0; i < spec.s; ++i) planted.l_star[i] = i;

  Matrix a_block;
  if (spec.s < spec.k) {
    a_block = planted_block(spec.s, spec.k - spec.s, spec.within_row_density,
                            /*unit_rows=*/false, a_rng);
    planted.a_star = widen_planted_rows(a_block, spec.k);
  }

  Matrix x_train = random_normal(spec.n_train, spec.d, x_train_rng);
  Matrix y_train = build_outputs(x_train, planted.w_star, a_block, spec,
                                 train_landmark_rng, train_dependent_rng);
  Matrix x_test = random_normal(spec.n_test, spec.d, x_test_rng);
  Matrix y_test = build_outputs(x_test, planted.w_star, a_block, spec,
                                test_landmark_rng, test_dependent_rng);

  return SyntheticData{
      Dataset(std::move(x_train), std::move(y_train), Task::regression),
      Dataset(std::move(x_test), std::move(y_test), Task::regression),
      std::move(planted)};
}

SyntheticData gen_synthetic_classification(const SyntheticSpec& spec) {
  SyntheticData real = gen_synthetic_regression(spec);

  Matrix y_train = real.train.y;
  Matrix y_test = real.test.y;
  for (std::size_t j = 0; j < spec.k; ++j) {
    const double median = column_median(y_train, j);
    for (std::size_t i = 0; i < y_train.rows(); ++i) {
      y_train(i, j) = y_train(i, j) > median ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < y_test.rows(); ++i) {
      y_test(i, j) = y_test(i, j) > median ? 1.0 : 0.0;
    }
  }

  return SyntheticData{
      Dataset(real.train.x, std::move(y_train), Task::classification),
      Dataset(real.test.x, std::move(y_test), Task::classification),
      std::move(real.planted)};
}

double estimate_spectral_radius(const Matrix& b) {
  if (b.rows() != b.cols()) {
    throw std::invalid_argument(
        "estimate_spectral_radius: matrix must be square");
  }
  const std::size_t s = b.rows();
  Rng rng(0x5b3a9d42c71f0e88ULL);
  std::vector<double> v(s);
  double norm = 0.0;
  for (double& entry : v) {
    entry = rng.normal();
    norm += entry * entry;
  }
  norm = std::sqrt(norm);
  for (double& entry : v) entry /= norm;

  // Geometric mean of the per-step growth after a warmup, so rotating
  // (complex-pair) dynamics average out.
  constexpr std::size_t kWarmup = 200;
  constexpr std::size_t kMeasured = 300;
  std::vector<double> w(s);
  double log_growth = 0.0;
  for (std::size_t t = 0; t < kWarmup + kMeasured; ++t) {
    for (std::size_t i = 0; i < s; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < s; ++j) dot += b(i, j) * v[j];
      w[i] = dot;
    }
    double growth = 0.0;
    for (double entry : w) growth += entry * entry;
    growth = std::sqrt(growth);
    if (growth < 1e-150) return 0.0;  // (numerically) nilpotent direction
    for (std::size_t i = 0; i < s; ++i) v[i] = w[i] / growth;
    if (t >= kWarmup) log_growth += std::log(growth);
  }
  return std::exp(log_growth / static_cast<double>(kMeasured));
}

Matrix gen_stable_ar_matrix(std::size_t s, double spectral_radius,
                            std::uint64_t seed) {
  if (s == 0) {
    throw std::invalid_argument("gen_stable_ar_matrix: s must be positive");
  }
  if (!(spectral_radius > 0.0) || !std::isfinite(spectral_radius)) {
    throw std::invalid_argument(
        "gen_stable_ar_matrix: spectral radius must be positive and finite");
  }
  Rng rng = Rng::split(seed, {kStreamArCoefficients});
  Matrix b = random_normal(s, s, rng, 1.0 / std::sqrt(static_cast<double>(s)));
  const double radius = estimate_spectral_radius(b);
  if (radius <= 0.0) {
    throw std::runtime_error(
        "gen_stable_ar_matrix: drawn matrix has zero spectral radius");
  }
  return scale(b, spectral_radius / radius);
}

Dataset gen_ar1_returns(const SyntheticSpec& spec, const Matrix& b_star,
                        std::size_t horizon) {
  spec.validate();
  if (horizon == 0) {
    throw std::invalid_argument("gen_ar1_returns: horizon must be positive");
  }
  if (b_star.rows() != spec.s || b_star.cols() != spec.s) {
    throw std::invalid_argument(
        "gen_ar1_returns: B* must be s x s with s = " + std::to_string(spec.s));
  }
  const double radius = estimate_spectral_radius(b_star);
  if (!(radius < 1.0)) {
    throw std::runtime_error(
        "gen_ar1_returns: B* is unstable (spectral radius estimate " +
        std::to_string(radius) + " >= 1)");
  }

  Rng a_rng = Rng::split(spec.seed, {kStreamAStar});
  Rng innovation_rng = Rng::split(spec.seed, {kStreamArInnovations});
  Rng dependent_rng = Rng::split(spec.seed, {kStreamArDependentNoise});

  Matrix a_block;
  if (spec.s < spec.k) {
    a_block = planted_block(spec.s, spec.k - spec.s, spec.within_row_density,
                            /*unit_rows=*/false, a_rng);
  }

  // horizon + 1 recorded landmark states: one extra so every Y row has the
  // previous state as its X row.
  const std::size_t recorded = horizon + 1;
  std::vector<double> state(spec.s, 0.0);
  std::vector<double> next(spec.s);
  Matrix landmarks(recorded, spec.s);
  for (std::size_t t = 0; t < kArBurnIn + recorded; ++t) {
    for (std::size_t i = 0; i < spec.s; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < spec.s; ++j) dot += b_star(i, j) * state[j];
      next[i] = dot + spec.sigma_landmark * innovation_rng.normal();
    }
    state = next;
    if (t >= kArBurnIn) {
      for (std::size_t i = 0; i < spec.s; ++i) {
        landmarks(t - kArBurnIn, i) = state[i];
      }
    }
  }

  Matrix returns = landmarks;
  if (spec.s < spec.k) {
    Matrix dependents = matmul(landmarks, a_block);
    add_noise(dependents, dependent_rng, spec.sigma_dependent);
    returns = concat_columns(landmarks, dependents);
  }

  Matrix x(horizon, spec.k);
  Matrix y(horizon, spec.k);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t j = 0; j < spec.k; ++j) {
      x(t, j) = returns(t, j);
      y(t, j) = returns(t + 1, j);
    }
  }
  return Dataset(std::move(x), std::move(y), Task::regression);
}

double hamming_loss(const Matrix& y, const Matrix& y_hat) {
  require_same_shape(y, y_hat, "hamming_loss");
  require_binary(y, "hamming_loss", "Y");
  require_binary(y_hat, "hamming_loss", "Y_hat");
  const double k = static_cast<double>(y.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double ones_y = 0.0, ones_hat = 0.0, dot = 0.0;
    for (std::size_t j = 0; j < y.cols(); ++j) {
      ones_y += y(i, j);
      ones_hat += y_hat(i, j);
      dot += y(i, j) * y_hat(i, j);
    }
    total += (ones_y + ones_hat - 2.0 * dot) / k;
  }
  return total / static_cast<double>(y.rows());
}

double f1_score(const Matrix& y, const Matrix& y_hat) {
  require_same_shape(y, y_hat, "f1_score");
  require_binary(y, "f1_score", "Y");
  require_binary(y_hat, "f1_score", "Y_hat");
  double total = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double ones = 0.0, dot = 0.0;
    for (std::size_t j = 0; j < y.cols(); ++j) {
      ones += y(i, j) + y_hat(i, j);
      dot += y(i, j) * y_hat(i, j);
    }
    // Both sides empty: perfect agreement scores 1 rather than 0/0.
    total += ones == 0.0 ? 1.0 : 2.0 * dot / ones;
  }
  return total / static_cast<double>(y.rows());
}

double mse(const Matrix& y, const Matrix& y_hat) {
  require_same_shape(y, y_hat, "mse");
  const Matrix diff = subtract(y, y_hat);
  return frobenius_sq(diff) /
         (static_cast<double>(y.rows()) * static_cast<double>(y.cols()));
}

CvResult cross_validate(const Dataset& dataset,
                        const std::vector<CvPoint>& grid, std::size_t folds,
                        CvMetric metric) {
  if (folds < 2) {
    throw std::invalid_argument("cross_validate: folds must be at least 2");
  }
  if (grid.empty()) {
    throw std::invalid_argument("cross_validate: hyperparameter grid is empty");
  }
  const std::size_t n = dataset.samples();
  if (folds > n) {
    throw std::invalid_argument("cross_validate: more folds than samples");
  }
  if (metric == CvMetric::hamming && dataset.task != Task::classification) {
    throw std::invalid_argument(
        "cross_validate: the Hamming metric requires a classification dataset");
  }

  // One fixed shuffle, then position mod folds: the assignment depends only
  // on the sample count, never on the data or the grid.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng shuffle_rng(kCvShuffleSeed);
  shuffle_rng.shuffle(perm);

  std::vector<Dataset> train_folds;
  std::vector<Dataset> val_folds;
  train_folds.reserve(folds);
  val_folds.reserve(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t p = 0; p < n; ++p) {
      (p % folds == f ? val_rows : train_rows).push_back(perm[p]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    train_folds.push_back(dataset.take_rows(train_rows));
    val_folds.push_back(dataset.take_rows(val_rows));
  }

  const double inf = std::numeric_limits<double>::infinity();
  CvResult result;
  result.cells.reserve(grid.size());
  for (const CvPoint& point : grid) {
    double sum = 0.0;
    bool failed = false;
    for (std::size_t f = 0; f < folds && !failed; ++f) {
      try {
        const LandmarkModel model =
            fit_landmark_model(train_folds[f], point.lambda1, point.lambda2,
                               point.lambda_stage2);
        const Matrix pred = predict(model, val_folds[f].x);
        sum += metric == CvMetric::mse ? mse(val_folds[f].y, pred)
                                       : hamming_loss(val_folds[f].y, pred);
      } catch (const std::exception&) {
        failed = true;
      }
    }
    result.cells.push_back(
        CvCell{point, failed ? inf : sum / static_cast<double>(folds)});
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < result.cells.size(); ++c) {
    const CvCell& cell = result.cells[c];
    const CvCell& incumbent = result.cells[best];
    const bool sparser_tie =
        cell.mean_loss == incumbent.mean_loss &&
        (cell.point.lambda1 > incumbent.point.lambda1 ||
         (cell.point.lambda1 == incumbent.point.lambda1 &&
          cell.point.lambda2 > incumbent.point.lambda2));
    if (cell.mean_loss < incumbent.mean_loss || sparser_tie) best = c;
  }
  if (result.cells[best].mean_loss == inf) {
    throw std::runtime_error(
        "cross_validate: every grid cell failed to fit (grid likely "
        "over-regularized)");
  }
  result.best = result.cells[best].point;
  result.best_loss = result.cells[best].mean_loss;
  return result;
}

CvResult cross_validate(const Dataset& dataset,
                        const std::vector<CvPoint>& grid, std::size_t folds) {
  return cross_validate(dataset, grid, folds,
                        dataset.task == Task::classification
                            ? CvMetric::hamming
                            : CvMetric::mse);
}

double support_overlap_phi(const Matrix& a_star_rows, const Matrix& sigma_ss) {
  const std::size_t s = a_star_rows.rows();
  const std::size_t k = a_star_rows.cols();
  if (sigma_ss.rows() != s || sigma_ss.cols() != s) {
    throw std::invalid_argument(
        "support_overlap_phi: sigma_ss must be s x s with s = " +
        std::to_string(s));
  }
  double max_abs = 0.0;
  for (double v : sigma_ss.values()) max_abs = std::max(max_abs, std::abs(v));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      if (std::abs(sigma_ss(i, j) - sigma_ss(j, i)) > 1e-12 * std::max(1.0, max_abs)) {
        throw std::invalid_argument(
            "support_overlap_phi: sigma_ss must be symmetric");
      }
    }
  }

  const std::vector<double> norms = row_l2_norms(a_star_rows);
  Matrix zeta = a_star_rows;
  for (std::size_t i = 0; i < s; ++i) {
    if (norms[i] == 0.0) {
      throw std::invalid_argument("support_overlap_phi: row " +
                                  std::to_string(i) + " of A* is zero");
    }
    for (std::size_t j = 0; j < k; ++j) zeta(i, j) /= norms[i];
  }

  std::unique_ptr<Cholesky> factor;
  try {
    factor = std::make_unique<Cholesky>(sigma_ss);
  } catch (const std::exception&) {
    throw std::invalid_argument(
        "support_overlap_phi: sigma_ss is not positive definite");
  }

  const auto apply = [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> projected(s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += zeta(i, j) * in[j];
      projected[i] = dot;
    }
    const std::vector<double> solved = factor->solve(projected);
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < s; ++i) dot += zeta(i, j) * solved[i];
      out[j] = dot;
    }
  };
  return symmetric_top_eigenvalue(k, apply, 1e-10);
}

RecoveryResult recovery_experiment(std::size_t k, std::size_t s,
                                   const std::vector<std::size_t>& n_grid,
                                   std::size_t trials, double sigma,
                                   std::uint64_t seed, double lambda_scale) {
  if (s == 0 || s >= k) {
    throw std::invalid_argument(
        "recovery_experiment: need 1 <= s < k so dependent outputs exist");
  }
  if (n_grid.empty()) {
    throw std::invalid_argument("recovery_experiment: empty n_grid");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw std::invalid_argument("recovery_experiment: n_grid must ascend");
    }
  }
  if (trials == 0) {
    throw std::invalid_argument("recovery_experiment: trials must be >= 1");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument(
        "recovery_experiment: sigma must be finite and >= 0");
  }
  if (!(lambda_scale > 0.0) || !std::isfinite(lambda_scale)) {
    throw std::invalid_argument(
        "recovery_experiment: lambda_scale must be positive");
  }

  std::vector<std::size_t> expected_support(s);
  for (std::size_t i = 0; i < s; ++i) expected_support[i] = i;
  Matrix identity(s, s);
  for (std::size_t i = 0; i < s; ++i) identity(i, i) = 1.0;

  RecoveryResult result;
  result.n_grid = n_grid;
  result.trials = trials;
  result.recovery_rate.reserve(n_grid.size());
  double phi_sum = 0.0;

  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const std::size_t n = n_grid[ni];
    std::size_t successes = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      Rng y_rng = Rng::split(seed, {ni, trial, 0});
      Rng a_rng = Rng::split(seed, {ni, trial, 1});
      Rng noise_rng = Rng::split(seed, {ni, trial, 2});

      const Matrix y_landmark = random_normal(n, s, y_rng);
      const Matrix block =
          disjoint_planted_block(s, k - s, kRecoveryWithinRowDensity,
                                 /*unit_rows=*/true, a_rng);
      Matrix y_dependent = matmul(y_landmark, block);
      add_noise(y_dependent, noise_rng, sigma);
      const Matrix y = concat_columns(y_landmark, y_dependent);

      SolverConfig config;
      config.lambda1 = lambda_scale * std::sqrt(static_cast<double>(n) *
                                                std::log(static_cast<double>(k)));
      config.lambda2 = 0.0;
      const CoefficientEstimate estimate = sparsa_fit(y, y, config);
      if (estimate.support == expected_support) ++successes;
      phi_sum += support_overlap_phi(widen_planted_rows(block, k), identity);
    }
    result.recovery_rate.push_back(static_cast<double>(successes) /
                                   static_cast<double>(trials));
  }
  result.phi_star =
      phi_sum / (static_cast<double>(n_grid.size()) * static_cast<double>(trials));
  return result;
}

}  // namespace moplms
