#include "numerics/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "core/error.hpp"
#include "core/random.hpp"

namespace argviz {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Rows of `basis` are made orthonormal in order. Working on rows keeps every
// inner product contiguous in memory.
void orthonormalize_rows(Matrix& basis) {
  const std::size_t count = basis.rows();
  const std::size_t dim = basis.cols();
  std::size_t next_fill = 0;  // next standard basis vector to try

  for (std::size_t i = 0; i < count; ++i) {
    auto row = basis.row(i);
    const double original = norm(row);
    bool replaced = false;
    for (;;) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < i; ++j) {
          const auto prev = basis.row(j);
          const double proj = dot(row, prev);
          for (std::size_t k = 0; k < dim; ++k) row[k] -= proj * prev[k];
        }
      }
      const double remaining = norm(row);
      const double reference = replaced ? 1.0 : original;
      if (remaining > 1e-10 * reference && remaining > 0.0) {
        for (double& v : row) v /= remaining;
        break;
      }
      require(next_fill < dim, "orthonormalize: more vectors than dimensions");
      std::fill(row.begin(), row.end(), 0.0);
      row[next_fill++] = 1.0;
      replaced = true;
    }
  }
}

// One-sided Jacobi on the rows of b: rotations from the left make the rows
// mutually orthogonal, and the same rotations are accumulated in `left`.
void jacobi_orthogonalize_rows(Matrix& b, Matrix& left) {
  const std::size_t count = b.rows();
  const std::size_t dim = b.cols();
  constexpr double tolerance = 1e-15;
  constexpr int max_sweeps = 80;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < count; ++p) {
      for (std::size_t q = p + 1; q < count; ++q) {
        auto bp = b.row(p);
        auto bq = b.row(q);
        const double alpha = dot(bp, bp);
        const double beta = dot(bq, bq);
        const double gamma = dot(bp, bq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < dim; ++k) {
          const double x = bp[k];
          const double y = bq[k];
          bp[k] = c * x - s * y;
          bq[k] = s * x + c * y;
        }
        auto lp = left.row(p);
        auto lq = left.row(q);
        for (std::size_t k = 0; k < left.cols(); ++k) {
          const double x = lp[k];
          const double y = lq[k];
          lp[k] = c * x - s * y;
          lq[k] = s * x + c * y;
        }
      }
    }
    if (!rotated) return;
  }
}

struct RowFactors {
  Matrix u_rows;                 // d x rows(M)
  std::vector<double> sigma;     // d
  Matrix v_rows;                 // d x cols(M)
};

// Given an orthonormal row basis q_rows (l x m) for the range of M, computes the
// top-d singular triplets of the projection Qᵀ M.
RowFactors project_and_factor(const Matrix& m, const Matrix& q_rows, std::size_t d) {
  const std::size_t l = q_rows.rows();
  Matrix b = matmul(q_rows, m);  // l x n
  Matrix left = Matrix::identity(l);
  jacobi_orthogonalize_rows(b, left);

  std::vector<double> sigma(l);
  for (std::size_t i = 0; i < l; ++i) sigma[i] = norm(b.row(i));
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double sigma_max = sigma.empty() ? 0.0 : sigma[order[0]];
  const double zero_cut = sigma_max * static_cast<double>(std::max(m.rows(), m.cols())) *
                          std::numeric_limits<double>::epsilon();

  // All l right vectors are kept until orthonormalization so that completion
  // vectors for zero singular values avoid the span of the nonzero ones.
  RowFactors out{Matrix(d, m.rows()), std::vector<double>(d), Matrix(d, m.cols())};
  Matrix v_all(l, m.cols());
  Matrix left_sorted(l, l);
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t src = order[i];
    const double s = sigma[src];
    if (s > zero_cut && s > 0.0) {
      auto dst = v_all.row(i);
      const auto row = b.row(src);
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = row[k] / s;
    }
    std::copy(left.row(src).begin(), left.row(src).end(), left_sorted.row(i).begin());
    if (i < d) out.sigma[i] = s;
  }
  orthonormalize_rows(v_all);

  // U = Q·Gᵀ, so the rows of Uᵀ are G·Qᵀ.
  const Matrix u_all = matmul(left_sorted, q_rows);
  for (std::size_t i = 0; i < d; ++i) {
    std::copy(u_all.row(i).begin(), u_all.row(i).end(), out.u_rows.row(i).begin());
    std::copy(v_all.row(i).begin(), v_all.row(i).end(), out.v_rows.row(i).begin());
  }
  return out;
}

double residual_from_rows(const Matrix& m, const RowFactors& f) {
  const Matrix mv = matmul_a_bt(m, f.v_rows);  // rows(M) x d
  double worst = 0.0;
  for (std::size_t i = 0; i < f.sigma.size(); ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double diff = mv(r, i) - f.sigma[i] * f.u_rows(i, r);
      sum += diff * diff;
    }
    worst = std::max(worst, std::sqrt(sum));
  }
  return worst;
}

}  // namespace

void orthonormalize_columns(Matrix& q) {
  Matrix rows = transpose(q);
  orthonormalize_rows(rows);
  q = transpose(rows);
}

SvdResult truncated_svd(const Matrix& m, std::size_t d, std::uint64_t seed,
                        const SvdOptions& options) {
  const std::size_t smaller = std::min(m.rows(), m.cols());
  require(d >= 1 && d <= smaller,
          "truncated_svd: rank " + std::to_string(d) + " outside [1, " +
              std::to_string(smaller) + "]");
  const std::size_t l = std::min(d + options.oversampling, smaller);

  Rng rng(seed);
  Matrix omega_rows(l, m.cols());
  for (double& v : omega_rows.data()) v = rng.normal();

  // Range basis, stored as rows: Qᵀ = (M Ω)ᵀ.
  Matrix q_rows = matmul_a_bt(omega_rows, m);
  orthonormalize_rows(q_rows);

  auto power_step = [&] {
    Matrix z_rows = matmul(q_rows, m);  // (Mᵀ Q)ᵀ
    orthonormalize_rows(z_rows);
    q_rows = matmul_a_bt(z_rows, m);    // (M Z)ᵀ
    orthonormalize_rows(q_rows);
  };

  for (std::size_t it = 0; it < options.min_power_iterations; ++it) power_step();

  RowFactors factors = project_and_factor(m, q_rows, d);
  for (std::size_t it = options.min_power_iterations;; ++it) {
    const double bound = 1e-6 * factors.sigma[0] + 1e-10;
    if (residual_from_rows(m, factors) <= bound || it >= options.max_power_iterations)
      break;
    power_step();
    factors = project_and_factor(m, q_rows, d);
  }

  return SvdResult{transpose(factors.u_rows), std::move(factors.sigma),
                   transpose(factors.v_rows)};
}

double max_triplet_residual(const Matrix& m, const SvdResult& svd) {
  RowFactors f{transpose(svd.u), svd.singular_values, transpose(svd.v)};
  return residual_from_rows(m, f);
}

}  // namespace argviz
