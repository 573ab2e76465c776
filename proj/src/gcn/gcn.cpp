#include "gcn/gcn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "core/error.hpp"
#include "core/random.hpp"

namespace argviz {

namespace {

void relu_in_place(Matrix& m) {
  for (double& v : m.data()) v = std::max(v, 0.0);
}

// grad ⊙ 1[pre > 0]
Matrix relu_backward(const Matrix& grad, const Matrix& pre) {
  Matrix out = grad;
  auto g = out.data();
  auto p = pre.data();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (p[i] <= 0.0) g[i] = 0.0;
  return out;
}

Matrix row_vector(const std::vector<double>& v) { return Matrix(1, v.size(), v); }

std::vector<double> to_vector(const Matrix& m) {
  return {m.data().begin(), m.data().end()};
}

std::size_t class_index(const std::vector<std::string>& class_names,
                        const LabeledFramework& graph) {
  require(graph.graph_label.has_value(), "gcn: every graph needs a graph label");
  const auto it = std::find(class_names.begin(), class_names.end(), *graph.graph_label);
  require(it != class_names.end(), "gcn: unknown class '" + *graph.graph_label + "'");
  return static_cast<std::size_t>(it - class_names.begin());
}

}  // namespace

GcnParameters GcnParameters::zeros(const GcnDims& dims) {
  GcnParameters p;
  p.conv[0] = Matrix(dims.input, dims.hidden);
  p.conv[1] = Matrix(dims.hidden, dims.hidden);
  p.conv[2] = Matrix(dims.hidden, dims.hidden);
  p.conv[3] = Matrix(dims.hidden, dims.embedding);
  p.fc1_weight = Matrix(dims.embedding, dims.fc_hidden);
  p.fc1_bias = Matrix(1, dims.fc_hidden);
  p.fc2_weight = Matrix(dims.fc_hidden, dims.classes);
  p.fc2_bias = Matrix(1, dims.classes);
  return p;
}

const std::array<std::string_view, GcnParameters::kBlockCount>& GcnParameters::block_names() {
  static const std::array<std::string_view, kBlockCount> names = {
      "conv0", "conv1", "conv2", "conv3", "fc1_weight", "fc1_bias", "fc2_weight", "fc2_bias"};
  return names;
}

std::array<Matrix*, GcnParameters::kBlockCount> GcnParameters::blocks() {
  return {&conv[0], &conv[1], &conv[2], &conv[3], &fc1_weight, &fc1_bias, &fc2_weight, &fc2_bias};
}

std::array<const Matrix*, GcnParameters::kBlockCount> GcnParameters::blocks() const {
  return {&conv[0], &conv[1], &conv[2], &conv[3], &fc1_weight, &fc1_bias, &fc2_weight, &fc2_bias};
}

GcnModel init_model(const GcnDims& dims, std::vector<std::string> class_names,
                    std::uint64_t seed) {
  require(dims.input >= 1 && dims.hidden >= 1 && dims.embedding >= 1 && dims.fc_hidden >= 1,
          "gcn: layer widths must be positive");
  require(dims.classes >= 2, "gcn: at least two classes required");
  require(class_names.size() == dims.classes, "gcn: class name count does not match classes");
  GcnModel model{dims, GcnParameters::zeros(dims), std::move(class_names), seed};
  Rng rng(seed);
  for (Matrix* block : model.params.blocks()) {
    if (block->rows() == 1) continue;  // biases stay zero
    const double limit =
        std::sqrt(6.0 / static_cast<double>(block->rows() + block->cols()));
    for (double& v : block->data()) v = rng.uniform(-limit, limit);
  }
  return model;
}

Matrix node_features(const ArgumentationFramework& af) {
  const std::size_t n = af.size();
  Matrix out(n, kNodeFeatureWidth);
  if (n == 0) return out;
  std::vector<double> in_degree(n, 0.0), out_degree(n, 0.0);
  for (const auto& [from, to] : af.attacks()) {
    out_degree[from] += 1.0;
    in_degree[to] += 1.0;
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, 0) = 1.0;
    out(i, 1) = in_degree[i] * scale;
    out(i, 2) = out_degree[i] * scale;
    out(i, 3) = af.attacks_between(i, i) ? 1.0 : 0.0;
  }
  return out;
}

namespace {

// Symmetrized neighbour sets including the node itself.
std::vector<std::vector<std::size_t>> symmetric_neighbours(const ArgumentationFramework& af) {
  std::vector<std::set<std::size_t>> sets(af.size());
  for (std::size_t i = 0; i < af.size(); ++i) sets[i].insert(i);
  for (const auto& [from, to] : af.attacks()) {
    sets[from].insert(to);
    sets[to].insert(from);
  }
  std::vector<std::vector<std::size_t>> out(af.size());
  for (std::size_t i = 0; i < af.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
  return out;
}

}  // namespace

Matrix normalized_adjacency(const ArgumentationFramework& af) {
  const auto neighbours = symmetric_neighbours(af);
  Matrix out(af.size(), af.size());
  for (std::size_t i = 0; i < af.size(); ++i)
    for (const std::size_t j : neighbours[i])
      out(i, j) = 1.0 / std::sqrt(static_cast<double>(neighbours[i].size() *
                                                      neighbours[j].size()));
  return out;
}

GraphInput::GraphInput(const ArgumentationFramework& af) : features_(node_features(af)) {
  require(af.size() >= 1, "gcn: graph must have at least one argument");
  const auto neighbours = symmetric_neighbours(af);
  rows_.resize(af.size());
  for (std::size_t i = 0; i < af.size(); ++i) {
    rows_[i].reserve(neighbours[i].size());
    for (const std::size_t j : neighbours[i])
      rows_[i].push_back({j, 1.0 / std::sqrt(static_cast<double>(neighbours[i].size() *
                                                                 neighbours[j].size()))});
  }
}

Matrix GraphInput::propagate(const Matrix& h) const {
  require(h.rows() == rows_.size(), "gcn: propagation input has wrong node count");
  Matrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double* dst = out.row(i).data();
    for (const Entry& e : rows_[i]) {
      const double* src = h.row(e.column).data();
      for (std::size_t k = 0; k < h.cols(); ++k) dst[k] += e.weight * src[k];
    }
  }
  return out;
}

std::uint64_t parameter_digest(const GcnParameters& params) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const Matrix* block : params.blocks()) {
    hash = Rng::mix(hash ^ block->rows() ^ (block->cols() << 32));
    for (const double v : block->data()) hash = Rng::mix(hash ^ std::bit_cast<std::uint64_t>(v));
  }
  return hash;
}

GcnOutput gcn_forward(const GcnModel& model, const GraphInput& graph) {
  require(graph.features().cols() == model.dims.input,
          "gcn_forward: feature width " + std::to_string(graph.features().cols()) +
              " does not match model input " + std::to_string(model.dims.input));
  GcnOutput out;
  GcnCache& cache = out.cache;
  cache.nodes = graph.nodes();
  cache.digest = parameter_digest(model.params);
  cache.activations[0] = graph.features();
  for (std::size_t layer = 0; layer < 4; ++layer) {
    cache.propagated[layer] = graph.propagate(cache.activations[layer]);
    cache.pre_activation[layer] = matmul(cache.propagated[layer], model.params.conv[layer]);
    cache.activations[layer + 1] = cache.pre_activation[layer];
    relu_in_place(cache.activations[layer + 1]);
  }

  const Matrix& last = cache.activations[4];
  cache.embedding = Matrix(1, last.cols());
  for (std::size_t i = 0; i < last.rows(); ++i)
    for (std::size_t k = 0; k < last.cols(); ++k) cache.embedding(0, k) += last(i, k);
  for (double& v : cache.embedding.data()) v /= static_cast<double>(last.rows());

  cache.fc1_pre = add(matmul(cache.embedding, model.params.fc1_weight), model.params.fc1_bias);
  cache.fc1_act = cache.fc1_pre;
  relu_in_place(cache.fc1_act);
  cache.logits = add(matmul(cache.fc1_act, model.params.fc2_weight), model.params.fc2_bias);

  out.logits = to_vector(cache.logits);
  out.embedding = to_vector(cache.embedding);
  return out;
}

GcnOutput gcn_forward(const GcnModel& model, const ArgumentationFramework& af) {
  return gcn_forward(model, GraphInput(af));
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double cross_entropy(const std::vector<double>& logits, std::size_t target_class) {
  require(target_class < logits.size(), "cross_entropy: target class out of range");
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double l : logits) sum += std::exp(l - top);
  return std::log(sum) + top - logits[target_class];
}

GcnParameters gcn_backward(const GcnModel& model, const GraphInput& graph,
                           std::size_t target_class, const GcnCache& cache) {
  if (cache.nodes != graph.nodes() || cache.digest != parameter_digest(model.params))
    fail(ErrorKind::stale_cache, "gcn_backward: cache does not match this model and graph");
  require(target_class < model.dims.classes, "gcn_backward: target class out of range");

  GcnParameters grads;
  Matrix d_logits = row_vector(softmax(to_vector(cache.logits)));
  d_logits(0, target_class) -= 1.0;

  grads.fc2_bias = d_logits;
  grads.fc2_weight = matmul_at_b(cache.fc1_act, d_logits);
  const Matrix d_fc1 = relu_backward(matmul_a_bt(d_logits, model.params.fc2_weight), cache.fc1_pre);
  grads.fc1_bias = d_fc1;
  grads.fc1_weight = matmul_at_b(cache.embedding, d_fc1);
  const Matrix d_embedding = matmul_a_bt(d_fc1, model.params.fc1_weight);

  // Mean pooling spreads the embedding gradient evenly over the nodes.
  Matrix d_h(cache.nodes, d_embedding.cols());
  const double inv_n = 1.0 / static_cast<double>(cache.nodes);
  for (std::size_t i = 0; i < cache.nodes; ++i)
    for (std::size_t k = 0; k < d_h.cols(); ++k) d_h(i, k) = d_embedding(0, k) * inv_n;

  for (std::size_t layer = 4; layer-- > 0;) {
    const Matrix d_pre = relu_backward(d_h, cache.pre_activation[layer]);
    grads.conv[layer] = matmul_at_b(cache.propagated[layer], d_pre);
    if (layer == 0) break;
    // Â is symmetric, so the adjoint of propagation is propagation.
    d_h = graph.propagate(matmul_a_bt(d_pre, model.params.conv[layer]));
  }
  return grads;
}

std::vector<double> extract_embedding(const GcnModel& model, const ArgumentationFramework& af) {
  return gcn_forward(model, af).embedding;
}

std::size_t predict(const GcnModel& model, const GraphInput& graph) {
  const auto logits = gcn_forward(model, graph).logits;
  return static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) -
                                  logits.begin());
}

Split stratified_split(const std::vector<std::string>& labels, double validation_fraction,
                       std::uint64_t seed) {
  require(validation_fraction >= 0.0 && validation_fraction < 1.0,
          "split: validation fraction must lie in [0, 1)");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  Split split;
  for (auto& [label, members] : by_class) {
    for (std::size_t i = members.size(); i > 1; --i)
      std::swap(members[i - 1], members[rng.uniform_index(i)]);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(static_cast<double>(members.size()) * validation_fraction));
    if (members.size() >= 2 && validation_fraction > 0.0)
      n_val = std::clamp<std::size_t>(n_val, 1, members.size() - 1);
    else
      n_val = 0;
    split.validation.insert(split.validation.end(), members.begin(),
                            members.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val),
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

double accuracy(const GcnModel& model, const std::vector<LabeledFramework>& dataset,
                const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0;
  std::size_t correct = 0;
  for (const std::size_t i : indices) {
    const GraphInput graph(dataset[i].framework);
    if (predict(model, graph) == class_index(model.class_names, dataset[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

TrainResult train(const std::vector<LabeledFramework>& dataset, const TrainConfig& config) {
  require(!dataset.empty(), "train: empty dataset");
  std::vector<std::string> labels;
  labels.reserve(dataset.size());
  for (const auto& graph : dataset) {
    require(graph.graph_label.has_value(), "train: every graph needs a graph label");
    labels.push_back(*graph.graph_label);
  }
  std::set<std::string> present(labels.begin(), labels.end());
  std::vector<std::string> class_names(present.begin(), present.end());
  if (!config.classes.empty()) {
    for (const auto& c : config.classes)
      require(present.count(c) != 0, "train: class '" + c + "' has no graphs");
    for (const auto& c : present)
      require(std::find(config.classes.begin(), config.classes.end(), c) != config.classes.end(),
              "train: graph label '" + c + "' is not a configured class");
  }
  require(class_names.size() >= 2, "train: at least two classes required, found " +
                                       std::to_string(class_names.size()));
  require(config.max_epochs >= 1, "train: max_epochs must be positive");

  const Split split =
      stratified_split(labels, config.validation_fraction, derive_seed(config.seed, "split"));
  require(!split.train.empty(), "train: empty training split");

  const GcnDims dims{kNodeFeatureWidth, config.hidden, config.embedding, config.fc_hidden,
                     class_names.size()};
  GcnModel model = init_model(dims, class_names, derive_seed(config.seed, "init"));
  model.seed = config.seed;

  std::vector<GraphInput> inputs;
  std::vector<std::size_t> targets;
  inputs.reserve(dataset.size());
  for (const auto& graph : dataset) {
    inputs.emplace_back(graph.framework);
    targets.push_back(class_index(class_names, graph));
  }

  const auto validation_accuracy = [&](const GcnModel& m) {
    if (split.validation.empty()) return 0.0;
    std::size_t correct = 0;
    for (const std::size_t i : split.validation)
      if (predict(m, inputs[i]) == targets[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(split.validation.size());
  };

  TrainResult result{model, {}};
  TrainReport& report = result.report;
  report.seed = config.seed;
  report.train_indices = split.train;
  report.validation_indices = split.validation;

  double initial = 0.0;
  for (const std::size_t i : split.train)
    initial += cross_entropy(gcn_forward(model, inputs[i]).logits, targets[i]);
  report.initial_loss = initial / static_cast<double>(split.train.size());

  std::array<AdamState, GcnParameters::kBlockCount> states;
  {
    const auto blocks = model.params.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) states[b] = AdamState::zeros_like(*blocks[b]);
  }

  Rng order_rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::size_t> order = split.train;
  double best = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[order_rng.uniform_index(i)]);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (const std::size_t idx : order) {
      const GcnOutput out = gcn_forward(model, inputs[idx]);
      loss_sum += cross_entropy(out.logits, targets[idx]);
      const auto predicted = static_cast<std::size_t>(
          std::max_element(out.logits.begin(), out.logits.end()) - out.logits.begin());
      if (predicted == targets[idx]) ++correct;

      GcnParameters grads = gcn_backward(model, inputs[idx], targets[idx], out.cache);
      auto params = model.params.blocks();
      const auto grad_blocks = std::as_const(grads).blocks();
      for (std::size_t b = 0; b < params.size(); ++b)
        adam_step(*params[b], *grad_blocks[b], states[b], config.adam);
    }
    for (const Matrix* block : std::as_const(model.params).blocks())
      if (!all_finite(*block))
        fail(ErrorKind::divergence, "train: non-finite parameters in epoch " + std::to_string(epoch));

    const double n_train = static_cast<double>(order.size());
    report.loss.push_back(loss_sum / n_train);
    report.train_accuracy.push_back(static_cast<double>(correct) / n_train);
    const double val = validation_accuracy(model);
    report.validation_accuracy.push_back(val);
    report.epochs_run = epoch;

    if (val > best) {
      best = val;
      since_best = 0;
      result.model = model;
      report.best_epoch = epoch;
      report.best_validation_accuracy = val;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoint layout (all integers little-endian):
//   8 bytes  magic "ARGVZGCN"
//   u32      format version (1)
//   u64      training seed
//   u32 x 5  input, hidden, embedding, fc_hidden, classes
//   per class: u32 byte length, UTF-8 name
//   per block (conv0..3, fc1_weight, fc1_bias, fc2_weight, fc2_bias):
//            u32 rows, u32 cols, rows*cols IEEE-754 doubles (row-major)
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'A', 'R', 'G', 'V', 'Z', 'G', 'C', 'N'};
constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t count) {
    need(count);
    const auto out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t count) const {
    if (bytes_.size() - pos_ < count) fail(ErrorKind::parse, "checkpoint: truncated file");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string save_checkpoint(const GcnModel& model) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, model.seed);
  for (const std::size_t d : {model.dims.input, model.dims.hidden, model.dims.embedding,
                              model.dims.fc_hidden, model.dims.classes})
    put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (const auto& name : model.class_names) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
  }
  for (const Matrix* block : model.params.blocks()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(block->rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(block->cols()));
    for (const double v : block->data()) put<double>(out, v);
  }
  return out;
}

GcnModel load_checkpoint(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic)))
    fail(ErrorKind::parse, "checkpoint: bad magic");
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    fail(ErrorKind::parse, "checkpoint: unsupported version " + std::to_string(version));

  GcnModel model;
  model.seed = in.get<std::uint64_t>();
  model.dims.input = in.get<std::uint32_t>();
  model.dims.hidden = in.get<std::uint32_t>();
  model.dims.embedding = in.get<std::uint32_t>();
  model.dims.fc_hidden = in.get<std::uint32_t>();
  model.dims.classes = in.get<std::uint32_t>();
  if (model.dims.classes < 2 || model.dims.classes > 100000)
    fail(ErrorKind::parse, "checkpoint: implausible class count");
  for (std::size_t c = 0; c < model.dims.classes; ++c) {
    const auto len = in.get<std::uint32_t>();
    model.class_names.emplace_back(in.take(len));
  }

  const GcnParameters expected = GcnParameters::zeros(model.dims);
  const auto expected_blocks = expected.blocks();
  auto blocks = model.params.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto rows = in.get<std::uint32_t>();
    const auto cols = in.get<std::uint32_t>();
    if (rows != expected_blocks[b]->rows() || cols != expected_blocks[b]->cols())
      fail(ErrorKind::parse, "checkpoint: block " +
                                 std::string(GcnParameters::block_names()[b]) +
                                 " has unexpected shape");
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& v : data) v = in.get<double>();
    try {
      *blocks[b] = Matrix(rows, cols, std::move(data));
    } catch (const Error& e) {
      fail(ErrorKind::parse, std::string("checkpoint: ") + e.what());
    }
  }
  if (!in.done()) fail(ErrorKind::parse, "checkpoint: trailing bytes");
  return model;
}

}  // namespace argviz
