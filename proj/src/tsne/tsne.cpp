#include "tsne/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/error.hpp"
#include "core/random.hpp"

namespace argviz {

namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr double kPerplexityTolerance = 1e-5;
constexpr int kMaxBisectionSteps = 64;
constexpr int kMaxBracketSteps = 200;

// Row distribution for precision `beta` over shifted distances. Returns the
// perplexity e^H (H in nats, identical to 2^H in bits) and fills `weights`.
double evaluate_row(std::span<const double> shifted, double beta,
                    std::vector<double>& weights) {
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    weights[j] = std::exp(-beta * shifted[j]);
    sum += weights[j];
    weighted += shifted[j] * weights[j];
  }
  for (double& w : weights) w /= sum;
  const double entropy = std::log(sum) + beta * weighted / sum;
  return std::exp(entropy);
}

}  // namespace

Matrix squared_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = x.row(j);
      double sum = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double diff = xi[k] - xj[k];
        sum += diff * diff;
      }
      d(i, j) = sum;
      d(j, i) = sum;
    }
  }
  return d;
}

ConditionalAffinities conditional_affinities(const Matrix& x, double perplexity) {
  const std::size_t n = x.rows();
  require(n >= 2, "conditional_affinities: need at least 2 points");
  require(perplexity > 1.0 && perplexity < static_cast<double>(n),
          "conditional_affinities: perplexity " + std::to_string(perplexity) +
              " must lie in (1, " + std::to_string(n) + ")");
  const Matrix d = squared_distances(x);
  require(max_abs(d) > 0.0, "conditional_affinities: all input points are identical");

  ConditionalAffinities out{Matrix(n, n), std::vector<double>(n)};
  std::vector<double> shifted(n - 1);
  std::vector<double> weights(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = 0;
    double nearest = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      shifted[pos++] = d(i, j);
      nearest = std::min(nearest, d(i, j));
      total += d(i, j);
    }
    for (double& v : shifted) v -= nearest;
    const double spread = total / static_cast<double>(n - 1) - nearest;

    // Bracket first: too-high perplexity means the kernel is too wide.
    double beta = spread > 0.0 ? 1.0 / spread : 1.0;
    double lo = beta;
    double hi = beta;
    double current = evaluate_row(shifted, beta, weights);
    if (current > perplexity) {
      for (int s = 0; s < kMaxBracketSteps && current > perplexity; ++s) {
        lo = hi;
        hi *= 2.0;
        current = evaluate_row(shifted, hi, weights);
      }
      beta = hi;
    } else {
      for (int s = 0; s < kMaxBracketSteps && current < perplexity; ++s) {
        hi = lo;
        lo /= 2.0;
        current = evaluate_row(shifted, lo, weights);
      }
      beta = lo;
    }
    for (int step = 0; step < kMaxBisectionSteps &&
                       std::abs(current - perplexity) > kPerplexityTolerance;
         ++step) {
      beta = std::sqrt(lo * hi);
      current = evaluate_row(shifted, beta, weights);
      if (current > perplexity) lo = beta;
      else hi = beta;
    }

    pos = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) out.p(i, j) = weights[pos++];
    out.sigma[i] = std::sqrt(1.0 / (2.0 * beta));
  }
  return out;
}

double row_perplexity(const Matrix& p_conditional, std::size_t row) {
  double entropy = 0.0;
  for (const double p : p_conditional.row(row))
    if (p > 0.0) entropy -= p * std::log2(p);
  return std::exp2(entropy);
}

Matrix symmetrize(const Matrix& p_conditional) {
  require(p_conditional.rows() == p_conditional.cols(), "symmetrize: matrix must be square");
  const std::size_t n = p_conditional.rows();
  Matrix p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p(i, j) = (p_conditional(i, j) + p_conditional(j, i)) / denom;
  return p;
}

namespace {

// Gradient given the unnormalized kernel w_ij = (1 + d_ij)⁻¹ and its sum z.
Matrix gradient_from_kernel(const Matrix& p, double p_factor, const Matrix& kernel,
                            double z, const Matrix& y) {
  const std::size_t n = y.rows();
  Matrix grad(n, y.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto gi = grad.row(i);
    const auto yi = y.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = kernel(i, j);
      const double coeff = 4.0 * (p_factor * p(i, j) - w / z) * w;
      const auto yj = y.row(j);
      for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += coeff * (yi[k] - yj[k]);
    }
  }
  return grad;
}

Matrix student_kernel(const Matrix& y, double& z) {
  Matrix w = squared_distances(y);
  z = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      w(i, j) = i == j ? 0.0 : 1.0 / (1.0 + w(i, j));
      z += w(i, j);
    }
  return w;
}

double kl_from_kernel(const Matrix& p, const Matrix& kernel, double z) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (i == j) continue;
      const double pij = p(i, j);
      if (pij <= 0.0) continue;
      const double qij = kernel(i, j) / z;
      kl += pij * std::log(std::max(pij, kProbabilityFloor) / std::max(qij, kProbabilityFloor));
    }
  return kl;
}

}  // namespace

StudentT student_t_affinities(const Matrix& y) {
  require(y.rows() >= 2, "student_t_affinities: need at least 2 points");
  double z = 0.0;
  Matrix q = student_kernel(y, z);
  for (double& v : q.data()) v /= z;
  return {std::move(q), z};
}

Matrix tsne_gradient(const Matrix& p, const Matrix& y) {
  require(p.rows() == y.rows() && p.cols() == y.rows(),
          "tsne_gradient: affinity matrix does not match layout");
  double z = 0.0;
  const Matrix kernel = student_kernel(y, z);
  return gradient_from_kernel(p, 1.0, kernel, z, y);
}

double kl_divergence(const Matrix& p, const Matrix& q) {
  require(p.rows() == q.rows() && p.cols() == q.cols(), "kl_divergence: shape mismatch");
  return kl_from_kernel(p, q, 1.0);
}

Layout2D tsne_embed(const Matrix& x, const TsneConfig& config) {
  const std::size_t n = x.rows();
  require(config.output_dims >= 1, "tsne: output_dims must be positive");
  require(config.iterations >= 1, "tsne: iterations must be positive");
  require(config.iterations >= config.exaggeration_iterations,
          "tsne: iterations must cover the exaggeration phase");
  require(config.kl_interval >= 1, "tsne: kl_interval must be positive");

  const Matrix p = symmetrize(conditional_affinities(x, config.perplexity).p);
  const double learning_rate =
      config.learning_rate.value_or(std::max(static_cast<double>(n) / 12.0, 50.0));
  require(learning_rate > 0.0, "tsne: learning rate must be positive");

  Rng rng(config.seed);
  Layout2D out;
  out.y = Matrix(n, config.output_dims);
  for (double& v : out.y.data()) v = config.init_stddev * rng.normal();

  Matrix update(n, config.output_dims);
  Matrix gains(n, config.output_dims, 1.0);
  double z = 0.0;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const double exaggeration =
        it < config.exaggeration_iterations ? config.exaggeration_factor : 1.0;
    const double momentum =
        it < config.momentum_switch_iteration ? config.momentum_early : config.momentum_late;

    const Matrix kernel = student_kernel(out.y, z);
    const Matrix grad = gradient_from_kernel(p, exaggeration, kernel, z, out.y);

    auto g = grad.data();
    auto u = update.data();
    auto gain = gains.data();
    auto y = out.y.data();
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (config.adaptive_gains) {
        gain[i] = (g[i] > 0.0) != (u[i] > 0.0) ? gain[i] + 0.2 : gain[i] * 0.8;
        gain[i] = std::max(gain[i], config.min_gain);
      }
      u[i] = momentum * u[i] - learning_rate * gain[i] * g[i];
      y[i] += u[i];
    }
    if (!all_finite(out.y))
      fail(ErrorKind::divergence,
           "tsne: non-finite coordinates at iteration " + std::to_string(it + 1));

    if ((it + 1) % config.kl_interval == 0) {
      double z_now = 0.0;
      const Matrix kernel_now = student_kernel(out.y, z_now);
      out.kl_history.push_back({it + 1, kl_from_kernel(p, kernel_now, z_now)});
    }
  }

  if (!out.kl_history.empty() && out.kl_history.back().iteration == config.iterations) {
    out.final_kl = out.kl_history.back().kl;
  } else {
    const Matrix kernel_now = student_kernel(out.y, z);
    out.final_kl = kl_from_kernel(p, kernel_now, z);
  }
  return out;
}

}  // namespace argviz
