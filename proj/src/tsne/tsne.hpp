#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "numerics/matrix.hpp"

namespace argviz {

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t output_dims = 2;
  std::size_t iterations = 1000;
  std::optional<double> learning_rate;  // max(n / 12, 50) when unset
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  std::size_t momentum_switch_iteration = 250;
  double exaggeration_factor = 12.0;
  std::size_t exaggeration_iterations = 250;
  // Per-coordinate step gains: +0.2 when the gradient sign flips against the
  // running update, ×0.8 otherwise, floored at min_gain.
  bool adaptive_gains = true;
  double min_gain = 0.01;
  double init_stddev = 1e-4;
  std::size_t kl_interval = 10;
  std::uint64_t seed = 0;
};

struct ConditionalAffinities {
  Matrix p;                   // row i holds p_{j|i}; zero diagonal, rows sum to 1
  std::vector<double> sigma;  // Gaussian bandwidth per point
};

struct KlSample {
  std::size_t iteration;  // number of completed iterations
  double kl;
};

struct Layout2D {
  Matrix y;
  double final_kl = 0.0;
  std::vector<KlSample> kl_history;
};

// Pairwise squared Euclidean distances between rows.
Matrix squared_distances(const Matrix& x);

// Gaussian conditionals with each σᵢ calibrated by bisection so that
// 2^H(Pᵢ) matches the perplexity. Throws if every point is identical.
ConditionalAffinities conditional_affinities(const Matrix& x, double perplexity);

// 2^H of row i of a conditional affinity matrix.
double row_perplexity(const Matrix& p_conditional, std::size_t row);

// p_ij = (p_{j|i} + p_{i|j}) / 2n
Matrix symmetrize(const Matrix& p_conditional);

struct StudentT {
  Matrix q;                 // normalized affinities, zero diagonal
  double normalizer = 0.0;  // Z = Σ_{k≠l} (1 + ‖y_k − y_l‖²)⁻¹
};

StudentT student_t_affinities(const Matrix& y);

// grad_i = 4 Σ_j (p_ij − q_ij)(1 + ‖yᵢ − yⱼ‖²)⁻¹ (yᵢ − yⱼ)
Matrix tsne_gradient(const Matrix& p, const Matrix& y);

// KL(P ‖ Q) with both affinities floored at 1e-12 inside the logarithm.
double kl_divergence(const Matrix& p, const Matrix& q);

Layout2D tsne_embed(const Matrix& x, const TsneConfig& config);

}  // namespace argviz
