#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <exception>
#include <thread>
#include <type_traits>

#include "core/error.hpp"
#include "core/random.hpp"
#include "metrics/metrics.hpp"
#include "viz/csv.hpp"
#include "viz/plot.hpp"

namespace argviz {

namespace {

class StageClock {
 public:
  explicit StageClock(StageTimings& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      sink_.emplace_back(name, elapsed.count());
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto value = fn();
      finish();
      return value;
    }
  }

 private:
  StageTimings& sink_;
};

PlotSpec make_plot(const Matrix& layout, const std::vector<std::string>& labels,
                   const std::string& title) {
  PlotSpec spec;
  spec.points = layout;
  spec.labels = labels;
  spec.palette = default_palette(labels);
  spec.title = title;
  return spec;
}

}  // namespace

NodePipelineResult run_node_pipeline(const LabeledFramework& input,
                                     const NodePipelineConfig& config) {
  validate(input);
  NodePipelineResult result;
  StageClock clock(result.timings);
  const ArgumentationFramework& af = input.framework;

  result.ids = af.arguments();
  result.labels.assign(af.size(), std::string());
  for (const auto& [index, label] : input.node_labels) result.labels[index] = label;

  HopeOptions hope = config.hope;
  hope.seed = derive_seed(config.seed, "hope");
  const HopeEmbedding embedding = clock.run("hope", [&] { return hope_embed(af, hope); });
  result.beta = embedding.beta;
  result.features = node_feature_matrix(embedding, config.feature_mode);

  TsneConfig tsne = config.tsne;
  tsne.seed = derive_seed(config.seed, "tsne");
  result.layout = clock.run("tsne", [&] { return tsne_embed(result.features, tsne); });

  const bool fully_labeled = input.node_labels.size() == af.size();
  const std::set<std::string> distinct(result.labels.begin(), result.labels.end());
  if (fully_labeled && distinct.size() >= 2) {
    clock.run("metrics", [&] {
      const LabeledPoints points{result.layout.y, result.labels};
      result.metrics = LayoutMetrics{knn_label_agreement(points, config.knn_k),
                                     silhouette(points), config.knn_k};
    });
  }

  clock.run("render", [&] {
    result.svg = render_svg(make_plot(result.layout.y, result.labels, config.title));
    result.layout_csv = export_csv(result.layout.y, result.labels, result.ids);
    result.kl_csv = export_kl_csv(result.layout.kl_history);
    result.features_csv = export_features_csv(result.features, result.ids);
  });
  return result;
}

Matrix embed_dataset(const GcnModel& model, const std::vector<LabeledFramework>& dataset,
                     std::size_t threads) {
  Matrix out(dataset.size(), model.dims.embedding);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto e = extract_embedding(model, dataset[i].framework);
      std::copy(e.begin(), e.end(), out.row(i).begin());
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(dataset.size(), 1));
  if (workers == 1) {
    work(0, dataset.size());
    return out;
  }
  // Each worker owns a contiguous block of rows, so the result does not depend
  // on scheduling.
  std::vector<std::thread> pool;
  const std::size_t chunk = (dataset.size() + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(dataset.size(), begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

GraphPipelineResult run_graph_pipeline(const std::vector<LabeledFramework>& dataset,
                                       const std::vector<std::string>& ids,
                                       const GraphPipelineConfig& config,
                                       const GcnModel* model) {
  require(ids.size() == dataset.size(), "graph pipeline: id count does not match dataset");
  GraphPipelineResult result;
  StageClock clock(result.timings);
  result.ids = ids;

  std::map<std::string, std::size_t> counts;
  for (const auto& graph : dataset) {
    require(graph.graph_label.has_value(), "graph pipeline: every graph needs a domain label");
    result.labels.push_back(*graph.graph_label);
    counts[*graph.graph_label] += 1;
  }
  require(counts.size() >= 2, "graph pipeline: at least two domains required, found " +
                                  std::to_string(counts.size()));
  const auto [min_it, max_it] = std::minmax_element(
      counts.begin(), counts.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  if (min_it->second != max_it->second)
    result.warnings.push_back("unbalanced dataset: domain '" + min_it->first + "' has " +
                              std::to_string(min_it->second) + " graphs, '" + max_it->first +
                              "' has " + std::to_string(max_it->second));

  TrainConfig train_config = config.train;
  train_config.seed = derive_seed(config.seed, "gcn");
  if (model != nullptr) {
    result.model = *model;
  } else {
    TrainResult trained = clock.run("train", [&] { return train(dataset, train_config); });
    result.model = std::move(trained.model);
    result.report = std::move(trained.report);
  }

  const Split split = stratified_split(result.labels, train_config.validation_fraction,
                                       derive_seed(train_config.seed, "split"));
  result.validation_indices = split.validation;
  result.validation_accuracy = clock.run(
      "evaluate", [&] { return accuracy(result.model, dataset, split.validation); });

  result.embeddings =
      clock.run("embed", [&] { return embed_dataset(result.model, dataset, config.threads); });

  TsneConfig tsne = config.tsne;
  tsne.seed = derive_seed(config.seed, "tsne");
  result.layout = clock.run("tsne", [&] { return tsne_embed(result.embeddings, tsne); });

  clock.run("metrics", [&] {
    const LabeledPoints points{result.layout.y, result.labels};
    result.metrics = LayoutMetrics{knn_label_agreement(points, config.knn_k),
                                   silhouette(points), config.knn_k};
  });

  clock.run("render", [&] {
    result.svg = render_svg(make_plot(result.layout.y, result.labels, config.title));
    result.layout_csv = export_csv(result.layout.y, result.labels, result.ids);
    result.kl_csv = export_kl_csv(result.layout.kl_history);
    result.embeddings_csv = export_features_csv(result.embeddings, result.ids, result.labels);
  });
  return result;
}

}  // namespace argviz
