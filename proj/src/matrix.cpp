#include "moplms/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "moplms/rng.hpp"

namespace moplms {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("Matrix: dimensions must be positive, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void check_finite(const std::vector<double>& values, std::size_t cols) {
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (!std::isfinite(values[idx])) {
      throw std::invalid_argument("Matrix: non-finite entry at (" +
                                  std::to_string(idx / cols) + ", " +
                                  std::to_string(idx % cols) + ")");
    }
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
  check_dims(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_dims(rows, cols);
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: expected " + std::to_string(rows * cols) +
                                " values, got " + std::to_string(values_.size()));
  }
  check_finite(values_, cols_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  check_dims(rows_, cols_);
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("Matrix: ragged initializer row");
    }
    values_.insert(values_.end(), r.begin(), r.end());
  }
  check_finite(values_, cols_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch (" + shape_of(a) +
                                " vs " + shape_of(b) + ")");
  }
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), p = a.cols(), k = b.cols();
  const double* ad = a.data();
  const double* bd = b.data();
  double* cd = c.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < p; ++l) {
      const double ail = ad[i * p + l];
      if (ail == 0.0) continue;
      const double* brow = bd + l * k;
      double* crow = cd + i * k;
      for (std::size_t j = 0; j < k; ++j) crow[j] += ail * brow[j];
    }
  }
  return c;
}

Matrix transpose_matmul(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("transpose_matmul: dimension mismatch (" +
                                shape_of(a) + " vs " + shape_of(b) + ")");
  }
  Matrix c(a.cols(), b.cols());
  const std::size_t n = a.rows(), p = a.cols(), k = b.cols();
  const double* ad = a.data();
  const double* bd = b.data();
  double* cd = c.data();
  for (std::size_t l = 0; l < n; ++l) {
    const double* arow = ad + l * p;
    const double* brow = bd + l * k;
    for (std::size_t i = 0; i < p; ++i) {
      const double ali = arow[i];
      if (ali == 0.0) continue;
      double* crow = cd + i * k;
      for (std::size_t j = 0; j < k; ++j) crow[j] += ali * brow[j];
    }
  }
  return c;
}

namespace {

Matrix elementwise(const Matrix& a, const Matrix& b, bool subtract_b,
                   const char* op_name) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op_name) + ": dimension mismatch (" +
                                shape_of(a) + " vs " + shape_of(b) + ")");
  }
  Matrix c(a.rows(), a.cols());
  const double sgn = subtract_b ? -1.0 : 1.0;
  for (std::size_t idx = 0; idx < a.values().size(); ++idx) {
    c.data()[idx] = a.data()[idx] + sgn * b.data()[idx];
  }
  return c;
}

}  // namespace

Matrix add(const Matrix& a, const Matrix& b) { return elementwise(a, b, false, "add"); }

Matrix subtract(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, true, "subtract");
}

Matrix scale(const Matrix& m, double factor) {
  Matrix c(m.rows(), m.cols());
  for (std::size_t idx = 0; idx < m.values().size(); ++idx) {
    c.data()[idx] = m.data()[idx] * factor;
  }
  return c;
}

double frobenius_sq(const Matrix& m) {
  double sum = 0.0;
  for (double v : m.values()) sum += v * v;
  return sum;
}

std::vector<double> row_l2_norms(const Matrix& m) {
  std::vector<double> norms(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (double v : m.row(i)) sum += v * v;
    norms[i] = std::sqrt(sum);
  }
  return norms;
}

double elementwise_l1(const Matrix& m) {
  double sum = 0.0;
  for (double v : m.values()) sum += std::abs(v);
  return sum;
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> means(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) means[j] += r[j];
  }
  for (double& v : means) v /= static_cast<double>(m.rows());
  return means;
}

Matrix center_columns(const Matrix& m, std::span<const double> means) {
  if (means.size() != m.cols()) {
    throw std::invalid_argument("center_columns: means length " +
                                std::to_string(means.size()) + " does not match " +
                                shape_of(m));
  }
  Matrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j) - means[j];
  return c;
}

Matrix select_columns(const Matrix& m, std::span<const std::size_t> indices) {
  if (indices.empty()) {
    throw std::invalid_argument("select_columns: empty index set");
  }
  for (std::size_t j : indices) {
    if (j >= m.cols()) {
      throw std::invalid_argument("select_columns: index " + std::to_string(j) +
                                  " out of range for " + shape_of(m));
    }
  }
  Matrix c(m.rows(), indices.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < indices.size(); ++j) c(i, j) = m(i, indices[j]);
  return c;
}

Cholesky::Cholesky(const Matrix& spd) : lower_(spd.rows(), spd.cols()) {
  if (spd.rows() != spd.cols()) {
    throw std::invalid_argument("Cholesky: matrix must be square, got " + shape_of(spd));
  }
  const std::size_t n = spd.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(spd(i, i)));
  const double pivot_floor = 1e-13 * std::max(max_diag, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = spd(i, j);
      for (std::size_t l = 0; l < j; ++l) sum -= lower_(i, l) * lower_(j, l);
      if (i == j) {
        if (sum <= pivot_floor) {
          throw std::runtime_error("Cholesky: matrix is not positive definite "
                                   "(pivot " + std::to_string(sum) + " at row " +
                                   std::to_string(i) + ")");
        }
        lower_(i, i) = std::sqrt(sum);
      } else {
        lower_(i, j) = sum / lower_(j, j);
      }
    }
  }
}

std::vector<double> Cholesky::solve(std::span<const double> rhs) const {
  const std::size_t n = lower_.rows();
  if (rhs.size() != n) {
    throw std::invalid_argument("Cholesky::solve: rhs length mismatch");
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = rhs[i];
    for (std::size_t l = 0; l < i; ++l) sum -= lower_(i, l) * y[l];
    y[i] = sum / lower_(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = y[ii];
    for (std::size_t l = ii + 1; l < n; ++l) sum -= lower_(l, ii) * y[l];
    y[ii] = sum / lower_(ii, ii);
  }
  return y;
}

Matrix Cholesky::solve(const Matrix& rhs) const {
  const std::size_t n = lower_.rows();
  if (rhs.rows() != n) {
    throw std::invalid_argument("Cholesky::solve: rhs has " +
                                std::to_string(rhs.rows()) + " rows, expected " +
                                std::to_string(n));
  }
  Matrix out(rhs.rows(), rhs.cols());
  std::vector<double> column(n);
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rhs(i, j);
    const std::vector<double> solved = solve(std::span<const double>(column));
    for (std::size_t i = 0; i < n; ++i) out(i, j) = solved[i];
  }
  return out;
}

Matrix ridge_solve(const Matrix& x, const Matrix& y, double lambda_ridge) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("ridge_solve: X has " + std::to_string(x.rows()) +
                                " rows, Y has " + std::to_string(y.rows()));
  }
  if (lambda_ridge < 0.0) {
    throw std::invalid_argument("ridge_solve: lambda_ridge must be nonnegative");
  }
  Matrix gram = transpose_matmul(x, x);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += lambda_ridge;
  const Matrix rhs = transpose_matmul(x, y);
  try {
    return Cholesky(gram).solve(rhs);
  } catch (const std::runtime_error&) {
    if (lambda_ridge == 0.0) {
      throw std::runtime_error(
          "ridge_solve: X^T X is singular at lambda_ridge == 0; "
          "supply a positive ridge penalty");
    }
    throw;
  }
}

namespace {

// One-sided Jacobi on a tall copy of the input: rotate column pairs until all
// are mutually orthogonal, then read off singular values as column norms.
SvdResult svd_tall(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix work = m;
  Matrix v = Matrix::identity(cols);

  constexpr std::size_t kMaxSweeps = 100;
  const double tol = 1e-15;
  bool converged = false;
  for (std::size_t sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          const double cp = work(i, p), cq = work(i, q);
          app += cp * cp;
          aqq += cq * cq;
          apq += cp * cq;
        }
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double cp = work(i, p), cq = work(i, q);
          work(i, p) = c * cp - s * cq;
          work(i, q) = s * cp + c * cq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) {
    throw std::runtime_error("svd: Jacobi sweeps did not converge within 100 sweeps");
  }

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) sum += work(i, j) * work(i, j);
    sigma[j] = std::sqrt(sum);
  }
  std::vector<std::size_t> order(cols);
  for (std::size_t j = 0; j < cols; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  Matrix u(rows, cols);
  Matrix v_sorted(cols, cols);
  std::vector<double> s_sorted(cols);
  const double s_max = sigma[order[0]];
  std::vector<std::size_t> null_cols;
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t src = order[j];
    s_sorted[j] = sigma[src];
    for (std::size_t i = 0; i < cols; ++i) v_sorted(i, j) = v(i, src);
    if (sigma[src] > 1e-14 * std::max(s_max, 1e-300)) {
      for (std::size_t i = 0; i < rows; ++i) u(i, j) = work(i, src) / sigma[src];
    } else {
      null_cols.push_back(j);
    }
  }

  // Complete U with orthonormal columns for (numerically) zero singular
  // values so that U^T U = I also holds for rank-deficient inputs.
  for (std::size_t j : null_cols) {
    for (std::size_t basis = 0; basis < rows; ++basis) {
      std::vector<double> cand(rows, 0.0);
      cand[basis] = 1.0;
      for (std::size_t other = 0; other < cols; ++other) {
        if (other == j) continue;
        bool other_is_null = false;
        for (std::size_t nc : null_cols) {
          if (nc == other && nc > j) other_is_null = true;
        }
        if (other_is_null) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += cand[i] * u(i, other);
        for (std::size_t i = 0; i < rows; ++i) cand[i] -= dot * u(i, other);
      }
      double norm = 0.0;
      for (double c : cand) norm += c * c;
      norm = std::sqrt(norm);
      if (norm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) u(i, j) = cand[i] / norm;
        break;
      }
    }
  }

  return SvdResult{std::move(u), std::move(s_sorted), std::move(v_sorted)};
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (m.empty()) {
    throw std::invalid_argument("svd: empty matrix");
  }
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.transposed());
  return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

double symmetric_top_eigenvalue(
    std::size_t dim,
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    double tol, std::size_t max_iter) {
  Rng rng(0x0FF1CE5EEDULL);
  std::vector<double> v(dim), w(dim);
  double norm = 0.0;
  for (double& vi : v) {
    vi = rng.normal();
    norm += vi * vi;
  }
  norm = std::sqrt(norm);
  for (double& vi : v) vi /= norm;

  double eigenvalue = 0.0;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    apply(v, w);
    double rayleigh = 0.0, wnorm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      rayleigh += v[i] * w[i];
      wnorm += w[i] * w[i];
    }
    wnorm = std::sqrt(wnorm);
    if (wnorm == 0.0) return 0.0;
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / wnorm;
    if (iter > 0 && std::abs(rayleigh - eigenvalue) <= tol * std::max(std::abs(rayleigh), 1e-300)) {
      return rayleigh;
    }
    eigenvalue = rayleigh;
  }
  return eigenvalue;
}

double largest_sq_singular_value(const Matrix& x) {
  const std::size_t p = x.cols();
  std::vector<double> tmp(x.rows());
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double sum = 0.0;
      auto r = x.row(i);
      for (std::size_t j = 0; j < p; ++j) sum += r[j] * in[j];
      tmp[i] = sum;
    }
    for (std::size_t j = 0; j < p; ++j) out[j] = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto r = x.row(i);
      const double ti = tmp[i];
      for (std::size_t j = 0; j < p; ++j) out[j] += r[j] * ti;
    }
  };
  return symmetric_top_eigenvalue(p, apply, 1e-10, 1000);
}

}  // namespace moplms
