#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace argviz {

// Dense row-major double matrix. Entries supplied at construction must be
// finite; arithmetic results are not re-validated.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
// aᵀ·b without materializing the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
// a·bᵀ without materializing the transpose.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);
Matrix hadamard(const Matrix& a, const Matrix& b);
void add_in_place(Matrix& target, const Matrix& other, double factor = 1.0);

// Horizontal concatenation [a | b]; row counts must agree.
Matrix hconcat(const Matrix& a, const Matrix& b);
// Scales column j by factors[j].
Matrix scale_columns(const Matrix& a, std::span<const double> factors);

double frobenius_norm(const Matrix& a);
// Max absolute row sum; an upper bound on the spectral radius.
double infinity_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

// Solves a·x = b by LU factorization with partial pivoting.
// Throws ErrorKind::singular_matrix when a pivot vanishes to working precision.
Matrix solve(const Matrix& a, const Matrix& b);

}  // namespace argviz
