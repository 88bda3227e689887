#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "moplms/experiments.hpp"
#include "moplms/matrix.hpp"
#include "moplms/prox.hpp"
#include "moplms/rng.hpp"
#include "oracles.hpp"

using namespace moplms;

namespace {

SyntheticSpec base_spec() {
  SyntheticSpec spec;
  spec.k = 10;
  spec.d = 5;
  spec.s = 3;
  spec.n_train = 40;
  spec.n_test = 20;
  spec.sigma_landmark = 0.3;
  spec.sigma_dependent = 0.2;
  spec.within_row_density = 0.4;
  spec.seed = 2;
  return spec;
}

Matrix random_binary(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rng.uniform01() < 0.5 ? 0.0 : 1.0;
  return m;
}

double pearson(const Matrix& a, const Matrix& b, std::size_t column) {
  const std::size_t n = a.rows();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a(i, column);
    mean_b += b(i, column);
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cross = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cross += (a(i, column) - mean_a) * (b(i, column) - mean_b);
    var_a += (a(i, column) - mean_a) * (a(i, column) - mean_a);
    var_b += (b(i, column) - mean_b) * (b(i, column) - mean_b);
  }
  return cross / std::sqrt(var_a * var_b);
}

}  // namespace

TEST_CASE("SyntheticSpec::validate rejects each malformed field") {
  const SyntheticSpec good = base_spec();
  CHECK_NOTHROW(good.validate());

  auto expect_invalid = [](SyntheticSpec spec) {
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  };
  SyntheticSpec spec = good;
  spec.k = 0;
  expect_invalid(spec);
  spec = good;
  spec.d = 0;
  expect_invalid(spec);
  spec = good;
  spec.s = 0;
  expect_invalid(spec);
  spec = good;
  spec.s = spec.k + 1;
  expect_invalid(spec);
  spec = good;
  spec.n_train = 0;
  expect_invalid(spec);
  spec = good;
  spec.n_test = 0;
  expect_invalid(spec);
  spec = good;
  spec.sigma_landmark = -0.1;
  expect_invalid(spec);
  spec = good;
  spec.sigma_dependent = std::numeric_limits<double>::quiet_NaN();
  expect_invalid(spec);
  spec = good;
  spec.within_row_density = 0.0;
  expect_invalid(spec);
  spec = good;
  spec.within_row_density = 1.5;
  expect_invalid(spec);
}

TEST_CASE("regression generator: shapes, determinism, planted structure") {
  const SyntheticSpec spec = base_spec();
  const SyntheticData data = gen_synthetic_regression(spec);

  CHECK(data.train.x.rows() == spec.n_train);
  CHECK(data.train.x.cols() == spec.d);
  CHECK(data.train.y.cols() == spec.k);
  CHECK(data.test.x.rows() == spec.n_test);
  CHECK(data.test.y.rows() == spec.n_test);
  CHECK(data.train.task == Task::regression);
  CHECK(data.planted.w_star.rows() == spec.d);
  CHECK(data.planted.w_star.cols() == spec.s);
  CHECK(data.planted.a_star.rows() == spec.s);
  CHECK(data.planted.a_star.cols() == spec.k);
  CHECK(data.planted.l_star == std::vector<std::size_t>{0, 1, 2});

  const SyntheticData again = gen_synthetic_regression(spec);
  CHECK(data.train.x == again.train.x);
  CHECK(data.train.y == again.train.y);
  CHECK(data.test.x == again.test.x);
  CHECK(data.test.y == again.test.y);
  CHECK(data.planted.a_star == again.planted.a_star);
  CHECK(data.planted.w_star == again.planted.w_star);

  // Every planted row carries at least one nonzero, all nonzeros have
  // magnitude in [0.5, 1.5], and the landmark columns stay zero.
  for (std::size_t g = 0; g < spec.s; ++g) {
    std::size_t nonzeros = 0;
    for (std::size_t j = 0; j < spec.k; ++j) {
      const double value = data.planted.a_star(g, j);
      if (j < spec.s) {
        CHECK(value == 0.0);
        continue;
      }
      if (value != 0.0) {
        ++nonzeros;
        CHECK(std::abs(value) >= 0.5);
        CHECK(std::abs(value) <= 1.5);
      }
    }
    CHECK(nonzeros >= 1);
  }
}

TEST_CASE("regression generator is exact when both noise scales vanish") {
  SyntheticSpec spec = base_spec();
  spec.sigma_landmark = 0.0;
  spec.sigma_dependent = 0.0;

  SUBCASE("s == k leaves no dependent outputs") {
    spec.s = spec.k;
    const SyntheticData data = gen_synthetic_regression(spec);
    CHECK(data.planted.a_star.rows() == 0);
    const Matrix expected = matmul(data.train.x, data.planted.w_star);
    for (std::size_t i = 0; i < spec.n_train; ++i)
      for (std::size_t j = 0; j < spec.k; ++j)
        CHECK(data.train.y(i, j) ==
              doctest::Approx(expected(i, j)).epsilon(1e-12));
  }

  SUBCASE("dependent columns are exact planted combinations of the landmarks") {
    const SyntheticData data = gen_synthetic_regression(spec);
    const Matrix landmarks = matmul(data.train.x, data.planted.w_star);
    const Matrix dependent = matmul(landmarks, data.planted.a_star);
    for (std::size_t i = 0; i < spec.n_train; ++i) {
      for (std::size_t j = 0; j < spec.k; ++j) {
        const double expected = j < spec.s ? landmarks(i, j) : dependent(i, j);
        CHECK(data.train.y(i, j) ==
              doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("classification generator: binary, balanced, deterministic") {
  SyntheticSpec spec = base_spec();
  spec.n_train = 101;  // odd count makes the median split verifiable exactly
  const SyntheticData data = gen_synthetic_classification(spec);

  CHECK(data.train.task == Task::classification);
  for (const Matrix* y : {&data.train.y, &data.test.y})
    for (std::size_t i = 0; i < y->rows(); ++i)
      for (std::size_t j = 0; j < y->cols(); ++j)
        CHECK((((*y)(i, j) == 0.0) || ((*y)(i, j) == 1.0)));

  // Binarizing at the training median balances each training column to
  // within one sample.
  for (std::size_t j = 0; j < spec.k; ++j) {
    int ones = 0;
    for (std::size_t i = 0; i < spec.n_train; ++i)
      ones += data.train.y(i, j) == 1.0 ? 1 : 0;
    CHECK(std::abs(2 * ones - static_cast<int>(spec.n_train)) <= 1);
  }

  const SyntheticData again = gen_synthetic_classification(spec);
  CHECK(data.train.y == again.train.y);
  CHECK(data.test.y == again.test.y);
  CHECK(data.planted.a_star == again.planted.a_star);
}

TEST_CASE("estimate_spectral_radius matches known spectra") {
  Matrix diagonal(3, 3);
  diagonal(0, 0) = 0.9;
  diagonal(1, 1) = 0.5;
  diagonal(2, 2) = 0.1;
  CHECK(estimate_spectral_radius(diagonal) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(estimate_spectral_radius(Matrix(4, 4)) == 0.0);
  CHECK_THROWS_AS(estimate_spectral_radius(Matrix(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("gen_stable_ar_matrix hits the requested radius deterministically") {
  const Matrix b = gen_stable_ar_matrix(10, 0.8, 4);
  CHECK(b.rows() == 10);
  CHECK(b.cols() == 10);
  CHECK(estimate_spectral_radius(b) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(gen_stable_ar_matrix(10, 0.8, 4) == b);
  CHECK(gen_stable_ar_matrix(10, 0.8, 5) != b);
  CHECK_THROWS_AS(gen_stable_ar_matrix(0, 0.8, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_stable_ar_matrix(3, 0.0, 1), std::invalid_argument);
}

TEST_CASE("gen_ar1_returns produces a shifted-pair series") {
  SyntheticSpec spec;
  spec.k = 8;
  spec.d = 8;
  spec.s = 4;
  spec.n_train = 1;
  spec.n_test = 1;
  spec.sigma_landmark = 0.2;
  spec.sigma_dependent = 0.1;
  spec.within_row_density = 0.4;
  spec.seed = 9;
  const std::size_t horizon = 2000;

  const Dataset series = gen_ar1_returns(spec, Matrix(4, 4), horizon);
  CHECK(series.samples() == horizon);
  CHECK(series.inputs() == spec.k);
  CHECK(series.outputs() == spec.k);

  // Each input row is the previous output row: consecutive rows overlap.
  for (std::size_t i = 0; i + 1 < series.samples(); ++i)
    for (std::size_t j = 0; j < series.outputs(); ++j)
      CHECK(series.x(i + 1, j) == series.y(i, j));

  // With B* = 0 the landmark returns are independent draws, so the lag-1
  // autocorrelation sits at the sampling-noise scale.
  for (std::size_t j = 0; j < spec.s; ++j)
    CHECK(std::abs(pearson(series.x, series.y, j)) <=
          3.0 / std::sqrt(static_cast<double>(horizon)));

  const Dataset again = gen_ar1_returns(spec, Matrix(4, 4), horizon);
  CHECK(series.x == again.x);
  CHECK(series.y == again.y);

  CHECK_THROWS_WITH_AS(
      gen_ar1_returns(spec, scale(Matrix::identity(4), 1.05), horizon),
      doctest::Contains("unstable"), std::runtime_error);
  CHECK_THROWS_AS(gen_ar1_returns(spec, Matrix(3, 3), horizon),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_ar1_returns(spec, Matrix(4, 4), 0),
                  std::invalid_argument);
}

TEST_CASE("hamming_loss counts disagreements and rejects bad input") {
  const Matrix y({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(hamming_loss(y, y) == 0.0);
  CHECK(hamming_loss(y, Matrix({{1.0, 1.0}, {1.0, 1.0}})) == 0.5);
  CHECK(hamming_loss(y, Matrix({{0.0, 1.0}, {1.0, 0.0}})) == 1.0);

  Rng rng(51);
  const Matrix a = random_binary(rng, 7, 9);
  const Matrix b = random_binary(rng, 7, 9);
  CHECK(hamming_loss(a, b) ==
        doctest::Approx(oracles::mismatch_fraction(a, b)).epsilon(1e-15));

  CHECK_THROWS_AS(hamming_loss(y, Matrix({{0.5, 1.0}, {0.0, 1.0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(hamming_loss(Matrix({{0.5, 0.0}, {0.0, 1.0}}), y),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(hamming_loss(y, Matrix(3, 2)),
                       doctest::Contains("shape mismatch"),
                       std::invalid_argument);
}

TEST_CASE("f1_score averages per-row overlap with empty rows scoring 1") {
  const Matrix y({{1.0, 1.0, 0.0, 0.0}});
  CHECK(f1_score(y, y) == 1.0);
  CHECK(f1_score(y, Matrix({{1.0, 0.0, 1.0, 0.0}})) == 0.5);
  CHECK(f1_score(Matrix({{0.0, 0.0}}), Matrix({{0.0, 0.0}})) == 1.0);
  CHECK(f1_score(Matrix({{0.0, 0.0}}), Matrix({{1.0, 0.0}})) == 0.0);

  Rng rng(52);
  const Matrix a = random_binary(rng, 11, 6);
  const Matrix b = random_binary(rng, 11, 6);
  CHECK(f1_score(a, b) ==
        doctest::Approx(oracles::f1_by_counts(a, b)).epsilon(1e-15));
  CHECK_THROWS_AS(f1_score(a, Matrix(11, 5)), std::invalid_argument);
}

TEST_CASE("mse averages squared error over all entries") {
  const Matrix y({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(mse(y, y) == 0.0);
  CHECK(mse(y, Matrix({{0.0, 2.0}, {3.0, 2.0}})) == 1.25);

  Rng rng(53);
  Matrix a(9, 4), b(9, 4);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      a(i, j) = rng.normal();
      b(i, j) = rng.normal();
    }
  CHECK(mse(a, b) == doctest::Approx(oracles::mse_two_pass(a, b)).epsilon(1e-14));
  CHECK(mse(a, b) == mse(b, a));
  CHECK_THROWS_AS(mse(a, Matrix(4, 9)), std::invalid_argument);
}

TEST_CASE("support_overlap_phi spans its documented range") {
  // Disjoint unit rows: the operator is an orthogonal projection.
  Matrix disjoint(3, 6);
  disjoint(0, 3) = 1.0;
  disjoint(1, 4) = 1.0;
  disjoint(2, 5) = 1.0;
  const Matrix identity3 = Matrix::identity(3);
  CHECK(support_overlap_phi(disjoint, identity3) ==
        doctest::Approx(1.0).epsilon(1e-8));

  // s copies of one direction: the top eigenvalue collects all s rows.
  Matrix repeated(3, 4);
  for (std::size_t g = 0; g < 3; ++g) {
    repeated(g, 0) = 2.0;
    repeated(g, 1) = 2.0;
  }
  CHECK(support_overlap_phi(repeated, identity3) ==
        doctest::Approx(3.0).epsilon(1e-8));

  Rng rng(54);
  Matrix random_rows(3, 8);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t j = 0; j < 8; ++j) random_rows(g, j) = rng.normal();
  const double phi = support_overlap_phi(random_rows, identity3);
  CHECK(phi >= 1.0 - 1e-8);
  CHECK(phi <= 3.0 + 1e-8);

  Matrix with_zero_row = disjoint;
  with_zero_row(1, 4) = 0.0;
  CHECK_THROWS_AS(support_overlap_phi(with_zero_row, identity3),
                  std::invalid_argument);
  CHECK_THROWS_AS(support_overlap_phi(disjoint, Matrix::identity(2)),
                  std::invalid_argument);
  Matrix asymmetric = identity3;
  asymmetric(0, 1) = 0.5;
  CHECK_THROWS_AS(support_overlap_phi(disjoint, asymmetric),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      support_overlap_phi(disjoint, Matrix({{1.0, 2.0, 0.0},
                                            {2.0, 1.0, 0.0},
                                            {0.0, 0.0, 1.0}})),
      doctest::Contains("positive definite"), std::invalid_argument);
}

TEST_CASE("cross_validate matches an exhaustive per-cell refit") {
  SyntheticSpec spec = base_spec();
  spec.n_train = 60;
  const SyntheticData data = gen_synthetic_regression(spec);
  const Matrix yc = center_columns(data.train.y, column_means(data.train.y));
  const double kill = kill_lambda(yc, yc, 0.0);
  std::vector<CvPoint> grid;
  for (double fraction : {0.05, 0.15, 0.4})
    grid.push_back(CvPoint{fraction * kill, 0.0, 1e-3});
  const std::size_t folds = 3;
  const CvResult result = cross_validate(data.train, grid, folds);

  // Rebuild the documented fold split: one fixed shuffle, position mod folds.
  const std::size_t n = data.train.samples();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng shuffle_rng(kCvShuffleSeed);
  shuffle_rng.shuffle(perm);

  std::size_t best_index = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train_rows, val_rows;
      for (std::size_t p = 0; p < n; ++p)
        (p % folds == f ? val_rows : train_rows).push_back(perm[p]);
      std::sort(train_rows.begin(), train_rows.end());
      std::sort(val_rows.begin(), val_rows.end());
      const Dataset fit_split = data.train.take_rows(train_rows);
      const Dataset val_split = data.train.take_rows(val_rows);
      const LandmarkModel model = fit_landmark_model(
          fit_split, grid[c].lambda1, grid[c].lambda2, grid[c].lambda_stage2);
      total += mse(val_split.y, predict(model, val_split.x));
    }
    const double mean_loss = total / static_cast<double>(folds);
    CHECK(result.cells[c].mean_loss ==
          doctest::Approx(mean_loss).epsilon(1e-12));
    if (mean_loss < best_loss) {
      best_loss = mean_loss;
      best_index = c;
    }
  }
  CHECK(result.best.lambda1 == grid[best_index].lambda1);
  CHECK(result.best_loss == doctest::Approx(best_loss).epsilon(1e-12));
}

TEST_CASE("cross_validate tolerates failing cells and validates its inputs") {
  SyntheticSpec spec = base_spec();
  const SyntheticData data = gen_synthetic_regression(spec);
  const Matrix yc = center_columns(data.train.y, column_means(data.train.y));
  const double kill = kill_lambda(yc, yc, 0.0);

  const std::vector<CvPoint> mixed{{10.0 * kill, 0.0, 1e-3},
                                   {0.25 * kill, 0.0, 1e-3}};
  const CvResult result = cross_validate(data.train, mixed, 4);
  CHECK(std::isinf(result.cells[0].mean_loss));
  CHECK(std::isfinite(result.cells[1].mean_loss));
  CHECK(result.best.lambda1 == 0.25 * kill);

  const std::vector<CvPoint> hopeless{{10.0 * kill, 0.0, 1e-3}};
  CHECK_THROWS_WITH_AS(cross_validate(data.train, hopeless, 4),
                       doctest::Contains("every grid cell failed"),
                       std::runtime_error);

  const std::vector<CvPoint> single{{0.25 * kill, 0.0, 1e-3}};
  const CvResult lone = cross_validate(data.train, single, 4);
  CHECK(lone.best.lambda1 == 0.25 * kill);
  CHECK(lone.cells.size() == 1);

  CHECK_THROWS_AS(cross_validate(data.train, single, 1), std::invalid_argument);
  CHECK_THROWS_AS(cross_validate(data.train, {}, 3), std::invalid_argument);
  const Dataset tiny(Matrix(2, 2), Matrix(2, 2), Task::regression);
  CHECK_THROWS_AS(cross_validate(tiny, single, 3), std::invalid_argument);
}

TEST_CASE("cross_validate breaks exact ties toward the sparser model") {
  // With no dependent noise the label columns are exact copies of their
  // single landmark parent, so nearby penalties give byte-identical
  // validation predictions: a genuine tie in mean Hamming loss.
  SyntheticSpec spec;
  spec.k = 12;
  spec.d = 6;
  spec.s = 3;
  spec.n_train = 160;
  spec.n_test = 10;
  spec.sigma_landmark = 0.1;
  spec.sigma_dependent = 0.0;
  spec.within_row_density = 0.3;
  spec.seed = 7;
  const SyntheticData data = gen_synthetic_classification(spec);
  const double kill = kill_lambda(data.train.y, data.train.y, 0.0);

  const std::vector<CvPoint> lambda1_tie{{0.1 * kill, 0.0, 1.0},
                                         {0.25 * kill, 0.0, 1.0}};
  const CvResult by_lambda1 = cross_validate(data.train, lambda1_tie, 3);
  REQUIRE(by_lambda1.cells[0].mean_loss == by_lambda1.cells[1].mean_loss);
  CHECK(by_lambda1.best.lambda1 == 0.25 * kill);

  const std::vector<CvPoint> lambda2_tie{{0.25 * kill, 0.0, 1.0},
                                         {0.25 * kill, 1e-9, 1.0}};
  const CvResult by_lambda2 = cross_validate(data.train, lambda2_tie, 3);
  REQUIRE(by_lambda2.cells[0].mean_loss == by_lambda2.cells[1].mean_loss);
  CHECK(by_lambda2.best.lambda2 == 1e-9);
}

TEST_CASE("recovery_experiment reports reproducible rates in range") {
  const RecoveryResult result = recovery_experiment(60, 6, {8, 30}, 5, 0.1, 3);
  REQUIRE(result.recovery_rate.size() == 2);
  for (double rate : result.recovery_rate) {
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
  }
  CHECK(result.recovery_rate[0] <= result.recovery_rate[1]);
  CHECK(result.recovery_rate[1] == 1.0);
  // Disjoint unit-norm planted rows have overlap exactly 1.
  CHECK(result.phi_star == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.trials == 5);
  CHECK(result.n_grid == std::vector<std::size_t>{8, 30});

  const RecoveryResult again = recovery_experiment(60, 6, {8, 30}, 5, 0.1, 3);
  CHECK(result.recovery_rate == again.recovery_rate);
  CHECK(result.phi_star == again.phi_star);

  CHECK_THROWS_AS(recovery_experiment(60, 6, {}, 5, 0.1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(recovery_experiment(60, 6, {30, 8}, 5, 0.1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(recovery_experiment(60, 6, {8, 30}, 0, 0.1, 3),
                  std::invalid_argument);
}
