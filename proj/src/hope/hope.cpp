#include "hope/hope.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"
#include "numerics/svd.hpp"

namespace argviz {

Matrix katz_matrix(const Matrix& adjacency, double beta) {
  require(adjacency.rows() == adjacency.cols(), "katz_matrix: adjacency must be square");
  const double norm = infinity_norm(adjacency);
  require(beta > 0.0 && beta * norm < 1.0,
          "katz_matrix: beta " + std::to_string(beta) +
              " violates 0 < beta * ||A||_inf < 1 (||A||_inf = " + std::to_string(norm) + ")");
  const Matrix scaled = scale(adjacency, beta);
  Matrix system = Matrix::identity(adjacency.rows());
  add_in_place(system, scaled, -1.0);
  return solve(system, scaled);
}

double default_beta(const Matrix& adjacency) {
  return 0.5 / (1.0 + infinity_norm(adjacency));
}

HopeEmbedding hope_embed(const ArgumentationFramework& af, const HopeOptions& options) {
  require(options.dims >= 1, "hope: dims must be at least 1");
  require(options.dims <= af.size(),
          "hope: dims " + std::to_string(options.dims) + " exceeds argument count " +
              std::to_string(af.size()));
  const Matrix adjacency = adjacency_matrix(af);
  const double beta = options.beta.value_or(default_beta(adjacency));
  const Matrix proximity = katz_matrix(adjacency, beta);

  SvdResult svd = truncated_svd(proximity, options.dims, options.seed);
  std::vector<double> root(options.dims);
  for (std::size_t i = 0; i < options.dims; ++i) root[i] = std::sqrt(svd.singular_values[i]);

  return HopeEmbedding{scale_columns(svd.u, root), scale_columns(svd.v, root),
                       std::move(svd.singular_values), beta, options.dims};
}

Matrix reconstruct(const HopeEmbedding& embedding) {
  return matmul_a_bt(embedding.source, embedding.target);
}

Matrix node_feature_matrix(const HopeEmbedding& embedding, FeatureMode mode) {
  if (mode == FeatureMode::source_only) return embedding.source;
  return hconcat(embedding.source, embedding.target);
}

}  // namespace argviz
