#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcn/gcn.hpp"
#include "graph/framework.hpp"
#include "hope/hope.hpp"
#include "numerics/matrix.hpp"
#include "tsne/tsne.hpp"

namespace argviz {

struct LayoutMetrics {
  double knn_agreement = 0.0;
  double silhouette = 0.0;
  std::size_t knn_k = 0;
};

using StageTimings = std::vector<std::pair<std::string, double>>;  // name, seconds

// Stage seeds are derived from the global seed with derive_seed(seed, "<stage>");
// the explicit seeds inside hope/tsne/train options are ignored.
struct NodePipelineConfig {
  HopeOptions hope;
  FeatureMode feature_mode = FeatureMode::concatenated;
  TsneConfig tsne;
  std::size_t knn_k = 10;
  std::string title;
  std::uint64_t seed = 42;
};

struct NodePipelineResult {
  double beta = 0.0;
  Matrix features;
  Layout2D layout;
  std::vector<std::string> ids;
  std::vector<std::string> labels;  // empty strings when the input has no node labels
  std::optional<LayoutMetrics> metrics;
  std::string svg;
  std::string layout_csv;
  std::string kl_csv;
  std::string features_csv;
  StageTimings timings;
};

NodePipelineResult run_node_pipeline(const LabeledFramework& input,
                                     const NodePipelineConfig& config);

struct GraphPipelineConfig {
  TrainConfig train;
  TsneConfig tsne;
  std::size_t knn_k = 5;
  std::size_t threads = 1;
  std::string title;
  std::uint64_t seed = 42;
};

struct GraphPipelineResult {
  GcnModel model;
  std::optional<TrainReport> report;  // absent when a model was supplied
  double validation_accuracy = 0.0;
  std::vector<std::size_t> validation_indices;
  Matrix embeddings;  // graphs x embedding width
  Layout2D layout;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  LayoutMetrics metrics;
  std::string svg;
  std::string layout_csv;
  std::string kl_csv;
  std::string embeddings_csv;
  std::vector<std::string> warnings;
  StageTimings timings;
};

// Trains (unless `model` is given), embeds every graph with the last
// propagation layer, projects the embeddings with t-SNE and plots them by
// graph label. `ids` names each graph in the CSV outputs.
GraphPipelineResult run_graph_pipeline(const std::vector<LabeledFramework>& dataset,
                                       const std::vector<std::string>& ids,
                                       const GraphPipelineConfig& config,
                                       const GcnModel* model = nullptr);

// Embeds every graph; rows follow dataset order regardless of thread count.
Matrix embed_dataset(const GcnModel& model, const std::vector<LabeledFramework>& dataset,
                     std::size_t threads);

}  // namespace argviz
