#include "numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "core/error.hpp"

namespace argviz {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require(std::isfinite(fill), "matrix fill value must be finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows_ * cols_,
          "matrix data length " + std::to_string(data_.size()) +
              " does not match shape " + shape(*this));
  require(std::all_of(data_.begin(), data_.end(),
                      [](double v) { return std::isfinite(v); }),
          "matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    require(row.size() == c, "from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

// Loop orders below are fixed (i-k-j) so every entry is accumulated in the
// same order on every run.
Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: shape mismatch " + shape(a) + " * " + shape(b));
  Matrix out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out_row = out.row(i).data();
    const double* a_row = a.row(i).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const double scale = a_row[k];
      if (scale == 0.0) continue;
      const double* b_row = b.row(k).data();
      for (std::size_t j = 0; j < cols; ++j) out_row[j] += scale * b_row[j];
    }
  }
  return out;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(),
          "matmul_at_b: shape mismatch " + shape(a) + "^T * " + shape(b));
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* a_row = a.row(k).data();
    const double* b_row = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double scale = a_row[i];
      if (scale == 0.0) continue;
      double* out_row = out.row(i).data();
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += scale * b_row[j];
    }
  }
  return out;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(),
          "matmul_a_bt: shape mismatch " + shape(a) + " * " + shape(b) + "^T");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* a_row = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* b_row = b.row(j).data();
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) sum += a_row[k] * b_row[k];
      out(i, j) = sum;
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out = a;
  add_in_place(out, b);
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out = a;
  add_in_place(out, b, -1.0);
  return out;
}

Matrix scale(const Matrix& a, double factor) {
  Matrix out = a;
  for (double& v : out.data()) v *= factor;
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= src[i];
  return out;
}

void add_in_place(Matrix& target, const Matrix& other, double factor) {
  require_same_shape(target, other, "add_in_place");
  auto dst = target.data();
  auto src = other.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "hconcat: row mismatch " + shape(a) + " | " + shape(b));
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), dst.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), dst.begin() + a.cols());
  }
  return out;
}

Matrix scale_columns(const Matrix& a, std::span<const double> factors) {
  require(factors.size() == a.cols(), "scale_columns: factor count mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= factors[j];
  }
  return out;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (const double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

double infinity_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (const double v : a.row(i)) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

double max_abs(const Matrix& a) {
  double best = 0.0;
  for (const double v : a.data()) best = std::max(best, std::abs(v));
  return best;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require(a.rows() == a.cols(), "solve: matrix must be square, got " + shape(a));
  require(b.rows() == a.rows(), "solve: right-hand side " + shape(b) +
                                    " does not conform to " + shape(a));
  const std::size_t n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  const double threshold = static_cast<double>(std::max<std::size_t>(n, 1)) *
                           std::numeric_limits<double>::epsilon() * max_abs(a);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (std::abs(lu(pivot, col)) <= threshold || lu(pivot, col) == 0.0)
      fail(ErrorKind::singular_matrix,
           "solve: matrix is singular to working precision (pivot column " +
               std::to_string(col) + ")");
    if (pivot != col) {
      std::swap_ranges(lu.row(col).begin(), lu.row(col).end(), lu.row(pivot).begin());
      std::swap_ranges(x.row(col).begin(), x.row(col).end(), x.row(pivot).begin());
    }
    const double diag = lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = lu(r, col) / diag;
      if (factor == 0.0) continue;
      lu(r, col) = factor;
      double* lu_r = lu.row(r).data();
      const double* lu_c = lu.row(col).data();
      for (std::size_t j = col + 1; j < n; ++j) lu_r[j] -= factor * lu_c[j];
      double* x_r = x.row(r).data();
      const double* x_c = x.row(col).data();
      for (std::size_t j = 0; j < x.cols(); ++j) x_r[j] -= factor * x_c[j];
    }
  }

  for (std::size_t i = n; i-- > 0;) {
    double* x_i = x.row(i).data();
    for (std::size_t k = i + 1; k < n; ++k) {
      const double u = lu(i, k);
      if (u == 0.0) continue;
      const double* x_k = x.row(k).data();
      for (std::size_t j = 0; j < x.cols(); ++j) x_i[j] -= u * x_k[j];
    }
    const double diag = lu(i, i);
    for (std::size_t j = 0; j < x.cols(); ++j) x_i[j] /= diag;
  }
  return x;
}

}  // namespace argviz
