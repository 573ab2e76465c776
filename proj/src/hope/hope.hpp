#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "graph/framework.hpp"
#include "numerics/matrix.hpp"

namespace argviz {

// Asymmetric node embedding of a directed graph: source and target halves
// whose product approximates the Katz proximity matrix.
struct HopeEmbedding {
  Matrix source;                        // n x d
  Matrix target;                        // n x d
  std::vector<double> singular_values;  // d, non-increasing
  double beta = 0.0;
  std::size_t dims = 0;
};

// S = (I − βA)⁻¹ βA = Σ_{l≥1} (βA)^l. Requires β > 0 and β·‖A‖∞ < 1.
Matrix katz_matrix(const Matrix& adjacency, double beta);

// 0.5 / (1 + ‖A‖∞); always inside the convergence region of katz_matrix.
double default_beta(const Matrix& adjacency);

struct HopeOptions {
  std::size_t dims = 64;
  std::optional<double> beta;  // default_beta when unset
  std::uint64_t seed = 0;
};

HopeEmbedding hope_embed(const ArgumentationFramework& af, const HopeOptions& options);

// source · targetᵀ
Matrix reconstruct(const HopeEmbedding& embedding);

enum class FeatureMode { concatenated, source_only };

// concatenated: [source | target], n x 2d. source_only: source, n x d.
Matrix node_feature_matrix(const HopeEmbedding& embedding,
                           FeatureMode mode = FeatureMode::concatenated);

}  // namespace argviz
