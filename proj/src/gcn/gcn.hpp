#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graph/framework.hpp"
#include "numerics/adam.hpp"
#include "numerics/matrix.hpp"

namespace argviz {

// Width of node_features rows.
inline constexpr std::size_t kNodeFeatureWidth = 4;

struct GcnDims {
  std::size_t input = kNodeFeatureWidth;
  std::size_t hidden = 64;
  std::size_t embedding = 32;
  std::size_t fc_hidden = 32;
  std::size_t classes = 2;

  bool operator==(const GcnDims&) const = default;
};

// Four propagation layers (no bias) followed by two dense layers.
struct GcnParameters {
  std::array<Matrix, 4> conv;  // input×hidden, hidden×hidden, hidden×hidden, hidden×embedding
  Matrix fc1_weight;           // embedding × fc_hidden
  Matrix fc1_bias;             // 1 × fc_hidden
  Matrix fc2_weight;           // fc_hidden × classes
  Matrix fc2_bias;             // 1 × classes

  static GcnParameters zeros(const GcnDims& dims);

  static constexpr std::size_t kBlockCount = 8;
  static const std::array<std::string_view, kBlockCount>& block_names();
  std::array<Matrix*, kBlockCount> blocks();
  std::array<const Matrix*, kBlockCount> blocks() const;

  bool operator==(const GcnParameters&) const = default;
};

struct GcnModel {
  GcnDims dims;
  GcnParameters params;
  std::vector<std::string> class_names;
  std::uint64_t seed = 0;

  bool operator==(const GcnModel&) const = default;
};

// Glorot-uniform weights (limit √(6 / (fan_in + fan_out))), zero biases.
GcnModel init_model(const GcnDims& dims, std::vector<std::string> class_names,
                    std::uint64_t seed);

// Per node: [1, in_degree / n, out_degree / n, self_attack].
Matrix node_features(const ArgumentationFramework& af);

// D̃^{-1/2} Ã D̃^{-1/2} with Ã = sign(A + Aᵀ) + I.
Matrix normalized_adjacency(const ArgumentationFramework& af);

// Graph prepared for repeated propagation: features plus the normalized
// adjacency held as per-row neighbour lists.
class GraphInput {
 public:
  explicit GraphInput(const ArgumentationFramework& af);

  std::size_t nodes() const noexcept { return features_.rows(); }
  const Matrix& features() const noexcept { return features_; }
  // Â · h
  Matrix propagate(const Matrix& h) const;

 private:
  struct Entry {
    std::size_t column;
    double weight;
  };
  Matrix features_;
  std::vector<std::vector<Entry>> rows_;
};

struct GcnCache {
  std::size_t nodes = 0;
  std::uint64_t digest = 0;            // parameter fingerprint of the forward model
  std::array<Matrix, 5> activations;   // H0..H4
  std::array<Matrix, 4> propagated;    // Â·H_l
  std::array<Matrix, 4> pre_activation;
  Matrix embedding;                    // 1 × embedding
  Matrix fc1_pre;
  Matrix fc1_act;
  Matrix logits;                       // 1 × classes
};

struct GcnOutput {
  std::vector<double> logits;
  std::vector<double> embedding;
  GcnCache cache;
};

std::uint64_t parameter_digest(const GcnParameters& params);

GcnOutput gcn_forward(const GcnModel& model, const GraphInput& graph);
GcnOutput gcn_forward(const GcnModel& model, const ArgumentationFramework& af);

// Gradients of cross_entropy(softmax(logits), target) for every parameter block.
// Throws ErrorKind::stale_cache when the cache was produced by a different
// model or graph.
GcnParameters gcn_backward(const GcnModel& model, const GraphInput& graph,
                           std::size_t target_class, const GcnCache& cache);

std::vector<double> softmax(const std::vector<double>& logits);
double cross_entropy(const std::vector<double>& logits, std::size_t target_class);

// Mean-pooled output of the last propagation layer.
std::vector<double> extract_embedding(const GcnModel& model, const ArgumentationFramework& af);

std::size_t predict(const GcnModel& model, const GraphInput& graph);

struct TrainConfig {
  std::size_t hidden = 64;
  std::size_t embedding = 32;
  std::size_t fc_hidden = 32;
  std::size_t max_epochs = 200;
  std::size_t patience = 20;
  double validation_fraction = 0.2;
  AdamConfig adam;
  // Expected classes; when set, each must occur in the dataset.
  std::vector<std::string> classes;
  std::uint64_t seed = 0;
};

struct TrainReport {
  std::vector<double> loss;                 // mean training loss per epoch
  std::vector<double> train_accuracy;       // accuracy of in-epoch predictions
  std::vector<double> validation_accuracy;  // after each epoch
  double initial_loss = 0.0;                // mean training loss before any update
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;               // 1-based
  double best_validation_accuracy = 0.0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
  std::string init_scheme = "glorot_uniform";
  std::uint64_t seed = 0;
};

struct TrainResult {
  GcnModel model;  // best-validation parameters
  TrainReport report;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Per class (classes in sorted order), indices are shuffled and
// round(count · fraction) of them, clamped to [1, count − 1], go to validation.
Split stratified_split(const std::vector<std::string>& labels, double validation_fraction,
                       std::uint64_t seed);

TrainResult train(const std::vector<LabeledFramework>& dataset, const TrainConfig& config);

double accuracy(const GcnModel& model, const std::vector<LabeledFramework>& dataset,
                const std::vector<std::size_t>& indices);

// Versioned little-endian binary container; load(save(m)) == m bit for bit.
std::string save_checkpoint(const GcnModel& model);
GcnModel load_checkpoint(std::string_view bytes);

}  // namespace argviz
