#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "moplms/landmark.hpp"
#include "moplms/matrix.hpp"

namespace moplms {

// Parameters of the planted-model generators. The first s outputs are the
// landmarks; the remaining k - s outputs are sparse combinations of them.
struct SyntheticSpec {
  std::size_t k = 0;        // output dimension
  std::size_t d = 0;        // input dimension
  std::size_t s = 0;        // landmark count, 1 <= s <= k
  std::size_t n_train = 0;  // training samples
  std::size_t n_test = 0;   // test samples
  double sigma_landmark = 0.0;
  double sigma_dependent = 0.0;
  // Fraction of the k - s dependent columns carrying a nonzero in each
  // planted row; every planted row keeps at least one nonzero.
  double within_row_density = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

// The ground truth behind a generated dataset. a_star holds the s planted
// rows over all k outputs (zero on the landmark columns); it is empty when
// s == k and there are no dependent outputs.
struct PlantedTruth {
  Matrix a_star;                     // s x k
  Matrix w_star;                     // d x s
  std::vector<std::size_t> l_star;   // the landmark indices 0..s-1
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  PlantedTruth planted;
};

// X ~ N(0,1), Y_L = X W* + sigma_landmark * noise, dependent columns
// Y_L * A* + sigma_dependent * noise; fresh X and noise draws for the test
// split. Pure function of the spec: equal seeds give identical bytes.
SyntheticData gen_synthetic_regression(const SyntheticSpec& spec);

// The regression construction binarized at each column's training median
// (strictly above the median maps to 1), so classes are balanced up to one
// sample per column.
SyntheticData gen_synthetic_classification(const SyntheticSpec& spec);

// Geometric-mean growth rate of ||B^t v|| under power iteration; used as the
// stability check for the autoregressive generator.
double estimate_spectral_radius(const Matrix& b);

// Random s x s coefficient matrix rescaled to the requested spectral radius.
Matrix gen_stable_ar_matrix(std::size_t s, double spectral_radius,
                            std::uint64_t seed);

// One-step-ahead task on a cointegrated series: landmark returns follow
// y_t = B* y_{t-1} + noise (burn-in 100 steps), dependent returns are planted
// combinations of the same-time landmarks. X holds the full return vector at
// t-1, Y the vector at t. Throws if B* is not stable.
Dataset gen_ar1_returns(const SyntheticSpec& spec, const Matrix& b_star,
                        std::size_t horizon);

// Per-row (y'1 + yhat'1 - 2 y'yhat) / k, averaged over rows. Both inputs must
// be exactly {0,1}.
double hamming_loss(const Matrix& y, const Matrix& y_hat);

// Per-row 2 y'yhat / (sum y + sum yhat), averaged over rows; a row with both
// sides empty scores 1.
double f1_score(const Matrix& y, const Matrix& y_hat);

// Mean squared difference over all entries.
double mse(const Matrix& y, const Matrix& y_hat);

struct CvPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_stage2 = 0.0;
};

struct CvCell {
  CvPoint point;
  double mean_loss = 0.0;  // +infinity when every fold fit failed
};

enum class CvMetric { mse, hamming };

struct CvResult {
  CvPoint best;
  double best_loss = 0.0;
  std::vector<CvCell> cells;  // grid order preserved
};

// Fold assignment is (position mod folds) after one fixed seeded shuffle, so
// the split depends only on the sample count.
inline constexpr std::uint64_t kCvShuffleSeed = 0x9E3779B97F4A7C15ULL;

// K-fold search over the landmark-model grid, minimizing mean validation loss
// (MSE for regression, Hamming for classification). A failing cell scores
// +infinity; an all-infinite grid is an error. Ties prefer the sparser model:
// larger lambda1, then larger lambda2.
CvResult cross_validate(const Dataset& dataset,
                        const std::vector<CvPoint>& grid, std::size_t folds,
                        CvMetric metric);
CvResult cross_validate(const Dataset& dataset,
                        const std::vector<CvPoint>& grid, std::size_t folds);

// lambda_max of z' * sigma_ss^{-1} * z where z row-normalizes a_star_rows.
// With identity sigma_ss the value lies in [1, s].
double support_overlap_phi(const Matrix& a_star_rows, const Matrix& sigma_ss);

struct RecoveryResult {
  std::vector<std::size_t> n_grid;
  std::size_t trials = 0;
  std::vector<double> recovery_rate;  // one entry per grid point, in [0, 1]
  double phi_star = 0.0;              // mean support-overlap of the planted rows
};

// Default multiplier for the recovery penalty rule lambda1 = scale *
// sqrt(n log k), the sample-size scaling under which exact support recovery
// sets in at n on the order of s log k. The default sits mid-window between
// the noise floor (extra rows survive) and the shrinkage ceiling (true rows
// die), validated empirically at desk scale.
inline constexpr double kRecoveryLambdaScale = 1.0;

// Empirical support-recovery curve: for each n and trial, plant unit-norm,
// disjointly supported dependency rows on identity-covariance landmarks
// (disjointness keeps the instances mutually incoherent, the identifiability
// condition exact recovery requires), fit with the lambda rule above
// (lambda2 = 0), and count exact support matches.
RecoveryResult recovery_experiment(std::size_t k, std::size_t s,
                                   const std::vector<std::size_t>& n_grid,
                                   std::size_t trials, double sigma,
                                   std::uint64_t seed,
                                   double lambda_scale = kRecoveryLambdaScale);

}  // namespace moplms
