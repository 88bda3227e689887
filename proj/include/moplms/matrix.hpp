#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace moplms {

// Dense row-major matrix of doubles, the numeric carrier for the whole
// toolkit. Every public constructor enforces positive dimensions and finite
// entries; a default-constructed Matrix is an empty 0x0 placeholder and is
// rejected by any operation with a shape precondition.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// a * b. Throws std::invalid_argument on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// a^T * b without forming the transpose. Requires a.rows() == b.rows().
Matrix transpose_matmul(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double factor);

// Sum of squared entries, i.e. the squared Frobenius norm.
double frobenius_sq(const Matrix& m);

// Euclidean norm of each row; the L1-of-L2 group norm is the sum of these.
std::vector<double> row_l2_norms(const Matrix& m);

// Sum of absolute entries.
double elementwise_l1(const Matrix& m);

// Per-column means and column-wise centering.
std::vector<double> column_means(const Matrix& m);
Matrix center_columns(const Matrix& m, std::span<const double> means);
Matrix select_columns(const Matrix& m, std::span<const std::size_t> indices);

// Cholesky factorization of a symmetric positive-definite matrix; throws
// std::runtime_error if a pivot collapses.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& spd);
  Matrix solve(const Matrix& rhs) const;
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  Matrix lower_;
};

// argmin_W ||Y - XW||_F^2 + lambda_ridge ||W||_F^2 via the normal equations
// (X^T X + lambda_ridge I) W = X^T Y, factored with Cholesky. A singular
// system at lambda_ridge == 0 is reported with advice to use a positive
// ridge.
Matrix ridge_solve(const Matrix& x, const Matrix& y, double lambda_ridge);

struct SvdResult {
  Matrix u;                             // rows x r, orthonormal columns
  std::vector<double> singular_values;  // length r, nonincreasing
  Matrix v;                             // cols x r, orthonormal columns
};

// Economy SVD (r = min(rows, cols)) via one-sided Jacobi rotations, capped at
// 100 sweeps. u * diag(s) * v^T reconstructs the input to ~1e-8 relative
// Frobenius error at desk scale.
SvdResult svd(const Matrix& m);

// Largest squared singular value of x (power iteration on x^T x).
double largest_sq_singular_value(const Matrix& x);

// Power iteration for the top eigenvalue of a symmetric PSD operator given by
// its matrix-vector product. Deterministic start vector.
double symmetric_top_eigenvalue(std::size_t dim,
                                const std::function<void(std::span<const double>,
                                                         std::span<double>)>& apply,
                                double tol = 1e-10, std::size_t max_iter = 10000);

}  // namespace moplms
