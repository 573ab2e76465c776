#include "argviz/argviz.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/random.hpp"
#include "gcn/gcn.hpp"
#include "generators/generators.hpp"
#include "graph/framework.hpp"
#include "hope/hope.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/pipeline.hpp"
#include "tsne/tsne.hpp"
#include "viz/csv.hpp"
#include "viz/plot.hpp"

using namespace argviz;

struct argviz_matrix {
  Matrix value;
};

struct argviz_framework {
  LabeledFramework value;
};

struct argviz_layout {
  Layout2D value;
  argviz_matrix points;
};

struct argviz_table {
  Table value;
  argviz_matrix values;
};

struct argviz_dataset {
  std::vector<argviz_framework> graphs;  // graph_label always set
  std::vector<std::string> ids;
};

struct argviz_model {
  GcnModel value;
};

struct argviz_train_report {
  TrainReport value;
};

struct argviz_node_result {
  NodePipelineResult value;
};

struct argviz_graph_result {
  GraphPipelineResult value;
  argviz_model model;
  std::optional<argviz_train_report> report;
};

namespace {

thread_local std::string last_error;

argviz_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return ARGVIZ_ERR_INVALID_ARGUMENT;
    case ErrorKind::parse: return ARGVIZ_ERR_PARSE;
    case ErrorKind::io: return ARGVIZ_ERR_IO;
    case ErrorKind::singular_matrix: return ARGVIZ_ERR_SINGULAR_MATRIX;
    case ErrorKind::divergence: return ARGVIZ_ERR_DIVERGENCE;
    case ErrorKind::stale_cache: return ARGVIZ_ERR_STALE_CACHE;
    case ErrorKind::unavailable: return ARGVIZ_ERR_UNAVAILABLE;
  }
  return ARGVIZ_ERR_INTERNAL;
}

template <typename Fn>
argviz_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return ARGVIZ_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ARGVIZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ARGVIZ_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return ARGVIZ_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorKind::invalid_argument, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, std::string("cannot open '") + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, std::string("cannot read '") + path + "'");
  return buffer.str();
}

GraphFormat to_format(argviz_format format) {
  switch (format) {
    case ARGVIZ_FORMAT_APX: return GraphFormat::apx;
    case ARGVIZ_FORMAT_TGF: return GraphFormat::tgf;
  }
  fail(ErrorKind::invalid_argument, "unknown graph format");
}

std::vector<std::string> string_array(const char* const* items, std::size_t n) {
  std::vector<std::string> out;
  if (items == nullptr) return out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    need(items[i], "array entry");
    out.emplace_back(items[i]);
  }
  return out;
}

std::vector<std::string> required_labels(const char* const* labels, std::size_t n) {
  need(labels, "labels");
  return string_array(labels, n);
}

HopeOptions hope_options(const argviz_hope_options& o) {
  HopeOptions out;
  out.dims = o.dims;
  if (o.beta > 0.0) out.beta = o.beta;
  out.seed = o.seed;
  return out;
}

TsneConfig tsne_config(const argviz_tsne_options& o) {
  TsneConfig c;
  c.perplexity = o.perplexity;
  c.output_dims = o.output_dims;
  c.iterations = o.iterations;
  if (o.learning_rate > 0.0) c.learning_rate = o.learning_rate;
  c.momentum_early = o.momentum_early;
  c.momentum_late = o.momentum_late;
  c.momentum_switch_iteration = o.momentum_switch_iteration;
  c.exaggeration_factor = o.exaggeration_factor;
  c.exaggeration_iterations = o.exaggeration_iterations;
  c.adaptive_gains = o.adaptive_gains != 0;
  c.min_gain = o.min_gain;
  c.init_stddev = o.init_stddev;
  c.kl_interval = o.kl_interval;
  c.seed = o.seed;
  return c;
}

TrainConfig train_config(const argviz_train_options& o) {
  TrainConfig c;
  c.hidden = o.hidden;
  c.embedding = o.embedding;
  c.fc_hidden = o.fc_hidden;
  c.max_epochs = o.max_epochs;
  c.patience = o.patience;
  c.validation_fraction = o.validation_fraction;
  c.adam.learning_rate = o.learning_rate;
  c.adam.beta1 = o.beta1;
  c.adam.beta2 = o.beta2;
  c.adam.epsilon = o.epsilon;
  c.seed = o.seed;
  return c;
}

std::vector<LabeledFramework> graphs_of(const argviz_dataset& dataset) {
  std::vector<LabeledFramework> out;
  out.reserve(dataset.graphs.size());
  for (const auto& g : dataset.graphs) out.push_back(g.value);
  return out;
}

const std::string& output_text(const NodePipelineResult& r, argviz_output which) {
  switch (which) {
    case ARGVIZ_OUTPUT_SVG: return r.svg;
    case ARGVIZ_OUTPUT_LAYOUT_CSV: return r.layout_csv;
    case ARGVIZ_OUTPUT_KL_CSV: return r.kl_csv;
    case ARGVIZ_OUTPUT_FEATURES_CSV: return r.features_csv;
  }
  return r.svg;
}

const std::string& output_text(const GraphPipelineResult& r, argviz_output which) {
  switch (which) {
    case ARGVIZ_OUTPUT_SVG: return r.svg;
    case ARGVIZ_OUTPUT_LAYOUT_CSV: return r.layout_csv;
    case ARGVIZ_OUTPUT_KL_CSV: return r.kl_csv;
    case ARGVIZ_OUTPUT_FEATURES_CSV: return r.embeddings_csv;
  }
  return r.svg;
}

}  // namespace

extern "C" {

/* ---- general ---- */

const char* argviz_version(void) { return "0.1.0"; }

const char* argviz_last_error(void) { return last_error.c_str(); }

const char* argviz_status_name(argviz_status status) {
  switch (status) {
    case ARGVIZ_OK: return "ok";
    case ARGVIZ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ARGVIZ_ERR_PARSE: return "parse";
    case ARGVIZ_ERR_IO: return "io";
    case ARGVIZ_ERR_SINGULAR_MATRIX: return "singular_matrix";
    case ARGVIZ_ERR_DIVERGENCE: return "divergence";
    case ARGVIZ_ERR_STALE_CACHE: return "stale_cache";
    case ARGVIZ_ERR_UNAVAILABLE: return "unavailable";
    case ARGVIZ_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void argviz_string_free(char* s) { delete[] s; }

uint64_t argviz_derive_seed(uint64_t seed, const char* stage) {
  return derive_seed(seed, stage == nullptr ? "" : stage);
}

/* ---- matrices ---- */

argviz_status argviz_matrix_create(size_t rows, size_t cols, const double* data,
                                   argviz_matrix** out) {
  return guarded([&] {
    need(out, "out");
    std::vector<double> values(rows * cols, 0.0);
    if (data != nullptr) std::copy(data, data + rows * cols, values.begin());
    *out = new argviz_matrix{Matrix(rows, cols, std::move(values))};
  });
}

size_t argviz_matrix_rows(const argviz_matrix* m) { return m ? m->value.rows() : 0; }
size_t argviz_matrix_cols(const argviz_matrix* m) { return m ? m->value.cols() : 0; }
const double* argviz_matrix_data(const argviz_matrix* m) {
  return m ? m->value.data().data() : nullptr;
}
void argviz_matrix_free(argviz_matrix* m) { delete m; }

/* ---- frameworks ---- */

argviz_status argviz_framework_parse(const char* text, size_t length, argviz_format format,
                                     argviz_framework** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    auto af = parse(std::string_view(text, length), to_format(format));
    *out = new argviz_framework{LabeledFramework{std::move(af), std::nullopt, {}}};
  });
}

argviz_status argviz_framework_load(const char* path, argviz_framework** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    const auto format = format_from_path(path);
    if (!format)
      fail(ErrorKind::invalid_argument,
           std::string("cannot infer graph format of '") + path + "' (expected .apx or .tgf)");
    auto af = parse(read_file(path), *format);
    *out = new argviz_framework{LabeledFramework{std::move(af), std::nullopt, {}}};
  });
}

argviz_status argviz_framework_serialize(const argviz_framework* af, argviz_format format,
                                         char** out) {
  return guarded([&] {
    need(af, "framework");
    need(out, "out");
    *out = copy_string(serialize(af->value.framework, to_format(format)));
  });
}

size_t argviz_framework_argument_count(const argviz_framework* af) {
  return af ? af->value.framework.size() : 0;
}

size_t argviz_framework_attack_count(const argviz_framework* af) {
  return af ? af->value.framework.attack_count() : 0;
}

const char* argviz_framework_argument(const argviz_framework* af, size_t index) {
  if (af == nullptr || index >= af->value.framework.size()) return nullptr;
  return af->value.framework.arguments()[index].c_str();
}

argviz_status argviz_framework_attack(const argviz_framework* af, size_t index,
                                      size_t* attacker, size_t* target) {
  return guarded([&] {
    need(af, "framework");
    need(attacker, "attacker");
    need(target, "target");
    const auto& attacks = af->value.framework.attacks();
    require(index < attacks.size(), "attack index out of range");
    *attacker = attacks[index].first;
    *target = attacks[index].second;
  });
}

argviz_status argviz_framework_adjacency(const argviz_framework* af, argviz_matrix** out) {
  return guarded([&] {
    need(af, "framework");
    need(out, "out");
    *out = new argviz_matrix{adjacency_matrix(af->value.framework)};
  });
}

size_t argviz_framework_node_label_count(const argviz_framework* af) {
  return af ? af->value.node_labels.size() : 0;
}

const char* argviz_framework_node_label(const argviz_framework* af, size_t index) {
  if (af == nullptr) return nullptr;
  const auto it = af->value.node_labels.find(index);
  return it == af->value.node_labels.end() ? nullptr : it->second.c_str();
}

argviz_status argviz_framework_set_node_label(argviz_framework* af, size_t index,
                                              const char* label) {
  return guarded([&] {
    need(af, "framework");
    require(index < af->value.framework.size(), "node index out of range");
    if (label == nullptr) af->value.node_labels.erase(index);
    else af->value.node_labels[index] = label;
  });
}

argviz_status argviz_framework_node_labels_csv(const argviz_framework* af, char** out) {
  return guarded([&] {
    need(af, "framework");
    need(out, "out");
    std::string text = "id,label\n";
    for (const auto& [index, label] : af->value.node_labels)
      text += af->value.framework.arguments()[index] + "," + label + "\n";
    *out = copy_string(text);
  });
}

argviz_status argviz_framework_apply_node_labels_csv(argviz_framework* af, const char* text,
                                                     size_t length) {
  return guarded([&] {
    need(af, "framework");
    need(text, "text");
    const Table table = parse_table_csv(std::string_view(text, length));
    if (table.labels.empty() && !table.ids.empty())
      fail(ErrorKind::parse, "node label csv: missing 'label' column");
    std::map<std::size_t, std::string> labels;
    for (std::size_t r = 0; r < table.ids.size(); ++r) {
      const auto index = af->value.framework.index_of(table.ids[r]);
      if (!index)
        fail(ErrorKind::parse, "node label csv: unknown argument '" + table.ids[r] + "'");
      if (!labels.emplace(*index, table.labels[r]).second)
        fail(ErrorKind::parse, "node label csv: duplicate argument '" + table.ids[r] + "'");
    }
    af->value.node_labels = std::move(labels);
  });
}

const char* argviz_framework_graph_label(const argviz_framework* af) {
  if (af == nullptr || !af->value.graph_label) return nullptr;
  return af->value.graph_label->c_str();
}

argviz_status argviz_framework_set_graph_label(argviz_framework* af, const char* label) {
  return guarded([&] {
    need(af, "framework");
    if (label == nullptr) af->value.graph_label.reset();
    else af->value.graph_label = label;
  });
}

void argviz_framework_free(argviz_framework* af) { delete af; }

/* ---- generators ---- */

void argviz_generator_spec_defaults(argviz_generator_spec* spec) {
  if (spec == nullptr) return;
  const GeneratorSpec d;
  spec->domain = "sembuster";
  spec->k = d.k;
  spec->n = d.n;
  spec->p = d.p;
  spec->m = d.m;
  spec->k_ring = d.k_ring;
  spec->rewire = d.rewire;
  spec->depth = d.depth;
  spec->components = d.components;
  spec->component_size = d.component_size;
  spec->p_intra = d.p_intra;
  spec->p_inter = d.p_inter;
  spec->seed = d.seed;
}

argviz_status argviz_generate(const argviz_generator_spec* spec, argviz_framework** out) {
  return guarded([&] {
    need(spec, "spec");
    need(spec->domain, "spec.domain");
    need(out, "out");
    const auto domain = parse_domain(spec->domain);
    if (!domain)
      fail(ErrorKind::invalid_argument,
           std::string("unknown domain '") + spec->domain +
               "' (expected sembuster, admbuster, BA, ER, WS, grd or scc)");
    GeneratorSpec g;
    g.domain = *domain;
    g.k = spec->k;
    g.n = spec->n;
    g.p = spec->p;
    g.m = spec->m;
    g.k_ring = spec->k_ring;
    g.rewire = spec->rewire;
    g.depth = spec->depth;
    g.components = spec->components;
    g.component_size = spec->component_size;
    g.p_intra = spec->p_intra;
    g.p_inter = spec->p_inter;
    g.seed = spec->seed;
    *out = new argviz_framework{generate(g)};
  });
}

/* ---- HOPE ---- */

void argviz_hope_options_defaults(argviz_hope_options* options) {
  if (options == nullptr) return;
  const HopeOptions d;
  options->dims = d.dims;
  options->beta = 0.0;
  options->source_only = 0;
  options->seed = d.seed;
}

argviz_status argviz_hope_features(const argviz_framework* af,
                                   const argviz_hope_options* options,
                                   argviz_matrix** features, double* beta_used) {
  return guarded([&] {
    need(af, "framework");
    need(options, "options");
    need(features, "features");
    const HopeEmbedding e = hope_embed(af->value.framework, hope_options(*options));
    const FeatureMode mode =
        options->source_only ? FeatureMode::source_only : FeatureMode::concatenated;
    *features = new argviz_matrix{node_feature_matrix(e, mode)};
    if (beta_used != nullptr) *beta_used = e.beta;
  });
}

argviz_status argviz_katz_matrix(const argviz_matrix* adjacency, double beta,
                                 argviz_matrix** out) {
  return guarded([&] {
    need(adjacency, "adjacency");
    need(out, "out");
    *out = new argviz_matrix{katz_matrix(adjacency->value, beta)};
  });
}

/* ---- t-SNE ---- */

void argviz_tsne_options_defaults(argviz_tsne_options* options) {
  if (options == nullptr) return;
  const TsneConfig d;
  options->perplexity = d.perplexity;
  options->output_dims = d.output_dims;
  options->iterations = d.iterations;
  options->learning_rate = 0.0;
  options->momentum_early = d.momentum_early;
  options->momentum_late = d.momentum_late;
  options->momentum_switch_iteration = d.momentum_switch_iteration;
  options->exaggeration_factor = d.exaggeration_factor;
  options->exaggeration_iterations = d.exaggeration_iterations;
  options->adaptive_gains = d.adaptive_gains ? 1 : 0;
  options->min_gain = d.min_gain;
  options->init_stddev = d.init_stddev;
  options->kl_interval = d.kl_interval;
  options->seed = d.seed;
}

argviz_status argviz_tsne(const argviz_matrix* x, const argviz_tsne_options* options,
                          argviz_layout** out) {
  return guarded([&] {
    need(x, "x");
    need(options, "options");
    need(out, "out");
    Layout2D layout = tsne_embed(x->value, tsne_config(*options));
    auto* result = new argviz_layout{std::move(layout), {}};
    result->points.value = result->value.y;
    *out = result;
  });
}

const argviz_matrix* argviz_layout_points(const argviz_layout* layout) {
  return layout ? &layout->points : nullptr;
}

double argviz_layout_final_kl(const argviz_layout* layout) {
  return layout ? layout->value.final_kl : 0.0;
}

argviz_status argviz_layout_kl_csv(const argviz_layout* layout, char** out) {
  return guarded([&] {
    need(layout, "layout");
    need(out, "out");
    *out = copy_string(export_kl_csv(layout->value.kl_history));
  });
}

void argviz_layout_free(argviz_layout* layout) { delete layout; }

/* ---- tables ---- */

argviz_status argviz_table_parse(const char* text, size_t length, argviz_table** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    Table table = parse_table_csv(std::string_view(text, length));
    auto* result = new argviz_table{std::move(table), {}};
    result->values.value = result->value.values;
    *out = result;
  });
}

size_t argviz_table_rows(const argviz_table* table) { return table ? table->value.ids.size() : 0; }

const char* argviz_table_id(const argviz_table* table, size_t row) {
  if (table == nullptr || row >= table->value.ids.size()) return nullptr;
  return table->value.ids[row].c_str();
}

int argviz_table_has_labels(const argviz_table* table) {
  return table != nullptr && !table->value.labels.empty() ? 1 : 0;
}

const char* argviz_table_label(const argviz_table* table, size_t row) {
  if (table == nullptr || row >= table->value.labels.size()) return nullptr;
  return table->value.labels[row].c_str();
}

const argviz_matrix* argviz_table_values(const argviz_table* table) {
  return table ? &table->values : nullptr;
}

void argviz_table_free(argviz_table* table) { delete table; }

argviz_status argviz_export_layout_csv(const argviz_matrix* points, const char* const* labels,
                                       const char* const* ids, char** out) {
  return guarded([&] {
    need(points, "points");
    need(out, "out");
    const std::size_t n = points->value.rows();
    auto label_vec = string_array(labels, n);
    if (label_vec.empty()) label_vec.assign(n, std::string());
    *out = copy_string(export_csv(points->value, label_vec, string_array(ids, n)));
  });
}

argviz_status argviz_export_features_csv(const argviz_matrix* features,
                                         const char* const* labels, const char* const* ids,
                                         char** out) {
  return guarded([&] {
    need(features, "features");
    need(out, "out");
    const std::size_t n = features->value.rows();
    auto id_vec = string_array(ids, n);
    if (id_vec.empty())
      for (std::size_t i = 0; i < n; ++i) id_vec.push_back(std::to_string(i));
    *out = copy_string(export_features_csv(features->value, id_vec, string_array(labels, n)));
  });
}

/* ---- metrics and plotting ---- */

argviz_status argviz_knn_agreement(const argviz_matrix* points, const char* const* labels,
                                   size_t k, double* out) {
  return guarded([&] {
    need(points, "points");
    need(out, "out");
    const LabeledPoints lp{points->value, required_labels(labels, points->value.rows())};
    *out = knn_label_agreement(lp, k);
  });
}

argviz_status argviz_silhouette(const argviz_matrix* points, const char* const* labels,
                                double* out) {
  return guarded([&] {
    need(points, "points");
    need(out, "out");
    const LabeledPoints lp{points->value, required_labels(labels, points->value.rows())};
    *out = silhouette(lp);
  });
}

argviz_status argviz_render_svg(const argviz_matrix* points, const char* const* labels,
                                const char* title, char** out) {
  return guarded([&] {
    need(points, "points");
    need(out, "out");
    PlotSpec spec;
    spec.points = points->value;
    spec.labels = string_array(labels, points->value.rows());
    if (spec.labels.empty()) spec.labels.assign(points->value.rows(), std::string());
    spec.palette = default_palette(spec.labels);
    if (title != nullptr) spec.title = title;
    *out = copy_string(render_svg(spec));
  });
}

/* ---- datasets ---- */

void argviz_synthetic_spec_defaults(argviz_synthetic_spec* spec) {
  if (spec == nullptr) return;
  const SyntheticDatasetSpec d;
  spec->domains = nullptr;
  spec->domain_count = 0;
  spec->graphs_per_domain = d.graphs_per_domain;
  spec->min_size = d.min_size;
  spec->max_size = d.max_size;
  spec->seed = d.seed;
}

argviz_status argviz_dataset_create(argviz_dataset** out) {
  return guarded([&] {
    need(out, "out");
    *out = new argviz_dataset{};
  });
}

argviz_status argviz_dataset_synthetic(const argviz_synthetic_spec* spec, argviz_dataset** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    SyntheticDatasetSpec s;
    if (spec->domains != nullptr) {
      s.domains.clear();
      for (const auto& id : string_array(spec->domains, spec->domain_count)) {
        const auto domain = parse_domain(id);
        if (!domain) fail(ErrorKind::invalid_argument, "unknown domain '" + id + "'");
        s.domains.push_back(*domain);
      }
    }
    s.graphs_per_domain = spec->graphs_per_domain;
    s.min_size = spec->min_size;
    s.max_size = spec->max_size;
    s.seed = spec->seed;
    auto graphs = synthetic_domain_dataset(s);
    auto* dataset = new argviz_dataset{};
    std::map<std::string, std::size_t> counters;
    for (auto& g : graphs) {
      const std::string label = *g.graph_label;
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_%03zu", counters[label]++);
      dataset->ids.push_back(label + suffix);
      dataset->graphs.push_back(argviz_framework{std::move(g)});
    }
    *out = dataset;
  });
}

argviz_status argviz_dataset_add(argviz_dataset* dataset, const argviz_framework* af,
                                 const char* label, const char* id) {
  return guarded([&] {
    need(dataset, "dataset");
    need(af, "framework");
    need(label, "label");
    need(id, "id");
    require(*label != '\0', "graph label must not be empty");
    argviz_framework copy = *af;
    copy.value.graph_label = label;
    dataset->graphs.push_back(std::move(copy));
    dataset->ids.emplace_back(id);
  });
}

size_t argviz_dataset_size(const argviz_dataset* dataset) {
  return dataset ? dataset->graphs.size() : 0;
}

const argviz_framework* argviz_dataset_graph(const argviz_dataset* dataset, size_t index) {
  if (dataset == nullptr || index >= dataset->graphs.size()) return nullptr;
  return &dataset->graphs[index];
}

const char* argviz_dataset_id(const argviz_dataset* dataset, size_t index) {
  if (dataset == nullptr || index >= dataset->ids.size()) return nullptr;
  return dataset->ids[index].c_str();
}

const char* argviz_dataset_label(const argviz_dataset* dataset, size_t index) {
  if (dataset == nullptr || index >= dataset->graphs.size()) return nullptr;
  return dataset->graphs[index].value.graph_label->c_str();
}

void argviz_dataset_free(argviz_dataset* dataset) { delete dataset; }

/* ---- GCN ---- */

void argviz_train_options_defaults(argviz_train_options* options) {
  if (options == nullptr) return;
  const TrainConfig d;
  options->hidden = d.hidden;
  options->embedding = d.embedding;
  options->fc_hidden = d.fc_hidden;
  options->max_epochs = d.max_epochs;
  options->patience = d.patience;
  options->validation_fraction = d.validation_fraction;
  options->learning_rate = d.adam.learning_rate;
  options->beta1 = d.adam.beta1;
  options->beta2 = d.adam.beta2;
  options->epsilon = d.adam.epsilon;
  options->seed = d.seed;
}

argviz_status argviz_gcn_train(const argviz_dataset* dataset,
                               const argviz_train_options* options, argviz_model** model,
                               argviz_train_report** report) {
  return guarded([&] {
    need(dataset, "dataset");
    need(options, "options");
    need(model, "model");
    TrainResult result = train(graphs_of(*dataset), train_config(*options));
    auto* m = new argviz_model{std::move(result.model)};
    if (report != nullptr) *report = new argviz_train_report{std::move(result.report)};
    *model = m;
  });
}

argviz_status argviz_gcn_save(const argviz_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    const std::string bytes = save_checkpoint(model->value);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, std::string("cannot write '") + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, std::string("cannot write '") + path + "'");
  });
}

argviz_status argviz_gcn_load(const char* path, argviz_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new argviz_model{load_checkpoint(read_file(path))};
  });
}

size_t argviz_model_class_count(const argviz_model* model) {
  return model ? model->value.class_names.size() : 0;
}

const char* argviz_model_class_name(const argviz_model* model, size_t index) {
  if (model == nullptr || index >= model->value.class_names.size()) return nullptr;
  return model->value.class_names[index].c_str();
}

size_t argviz_model_embedding_width(const argviz_model* model) {
  return model ? model->value.dims.embedding : 0;
}

argviz_status argviz_gcn_embed(const argviz_model* model, const argviz_dataset* dataset,
                               size_t threads, argviz_matrix** out) {
  return guarded([&] {
    need(model, "model");
    need(dataset, "dataset");
    need(out, "out");
    *out = new argviz_matrix{embed_dataset(model->value, graphs_of(*dataset), threads)};
  });
}

argviz_status argviz_gcn_predict(const argviz_model* model, const argviz_framework* af,
                                 size_t* class_index) {
  return guarded([&] {
    need(model, "model");
    need(af, "framework");
    need(class_index, "class_index");
    *class_index = predict(model->value, GraphInput(af->value.framework));
  });
}

argviz_status argviz_gcn_accuracy(const argviz_model* model, const argviz_dataset* dataset,
                                  double* out) {
  return guarded([&] {
    need(model, "model");
    need(dataset, "dataset");
    need(out, "out");
    std::vector<std::size_t> all(dataset->graphs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    *out = accuracy(model->value, graphs_of(*dataset), all);
  });
}

void argviz_model_free(argviz_model* model) { delete model; }

size_t argviz_train_report_epochs(const argviz_train_report* r) {
  return r ? r->value.epochs_run : 0;
}
size_t argviz_train_report_best_epoch(const argviz_train_report* r) {
  return r ? r->value.best_epoch : 0;
}
double argviz_train_report_best_validation_accuracy(const argviz_train_report* r) {
  return r ? r->value.best_validation_accuracy : 0.0;
}
double argviz_train_report_initial_loss(const argviz_train_report* r) {
  return r ? r->value.initial_loss : 0.0;
}
uint64_t argviz_train_report_seed(const argviz_train_report* r) { return r ? r->value.seed : 0; }
const char* argviz_train_report_init_scheme(const argviz_train_report* r) {
  return r ? r->value.init_scheme.c_str() : nullptr;
}
double argviz_train_report_loss(const argviz_train_report* r, size_t epoch) {
  return r && epoch < r->value.loss.size() ? r->value.loss[epoch] : 0.0;
}
double argviz_train_report_train_accuracy(const argviz_train_report* r, size_t epoch) {
  return r && epoch < r->value.train_accuracy.size() ? r->value.train_accuracy[epoch] : 0.0;
}
double argviz_train_report_validation_accuracy(const argviz_train_report* r, size_t epoch) {
  return r && epoch < r->value.validation_accuracy.size() ? r->value.validation_accuracy[epoch]
                                                          : 0.0;
}
void argviz_train_report_free(argviz_train_report* r) { delete r; }

/* ---- pipelines ---- */

void argviz_node_pipeline_options_defaults(argviz_node_pipeline_options* options) {
  if (options == nullptr) return;
  const NodePipelineConfig d;
  argviz_hope_options_defaults(&options->hope);
  argviz_tsne_options_defaults(&options->tsne);
  options->knn_k = d.knn_k;
  options->title = nullptr;
  options->seed = d.seed;
}

argviz_status argviz_node_pipeline(const argviz_framework* af,
                                   const argviz_node_pipeline_options* options,
                                   argviz_node_result** out) {
  return guarded([&] {
    need(af, "framework");
    need(options, "options");
    need(out, "out");
    NodePipelineConfig c;
    c.hope = hope_options(options->hope);
    c.feature_mode =
        options->hope.source_only ? FeatureMode::source_only : FeatureMode::concatenated;
    c.tsne = tsne_config(options->tsne);
    c.knn_k = options->knn_k;
    if (options->title != nullptr) c.title = options->title;
    c.seed = options->seed;
    *out = new argviz_node_result{run_node_pipeline(af->value, c)};
  });
}

const char* argviz_node_result_output(const argviz_node_result* result, argviz_output which) {
  return result ? output_text(result->value, which).c_str() : nullptr;
}

double argviz_node_result_beta(const argviz_node_result* result) {
  return result ? result->value.beta : 0.0;
}

double argviz_node_result_final_kl(const argviz_node_result* result) {
  return result ? result->value.layout.final_kl : 0.0;
}

int argviz_node_result_metrics(const argviz_node_result* result, double* knn,
                               double* silhouette_out) {
  if (result == nullptr || !result->value.metrics) return 0;
  if (knn != nullptr) *knn = result->value.metrics->knn_agreement;
  if (silhouette_out != nullptr) *silhouette_out = result->value.metrics->silhouette;
  return 1;
}

size_t argviz_node_result_stage_count(const argviz_node_result* result) {
  return result ? result->value.timings.size() : 0;
}

const char* argviz_node_result_stage_name(const argviz_node_result* result, size_t index) {
  if (result == nullptr || index >= result->value.timings.size()) return nullptr;
  return result->value.timings[index].first.c_str();
}

double argviz_node_result_stage_seconds(const argviz_node_result* result, size_t index) {
  if (result == nullptr || index >= result->value.timings.size()) return 0.0;
  return result->value.timings[index].second;
}

void argviz_node_result_free(argviz_node_result* result) { delete result; }

void argviz_graph_pipeline_options_defaults(argviz_graph_pipeline_options* options) {
  if (options == nullptr) return;
  const GraphPipelineConfig d;
  argviz_train_options_defaults(&options->train);
  argviz_tsne_options_defaults(&options->tsne);
  options->knn_k = d.knn_k;
  options->threads = d.threads;
  options->title = nullptr;
  options->seed = d.seed;
}

argviz_status argviz_graph_pipeline(const argviz_dataset* dataset,
                                    const argviz_graph_pipeline_options* options,
                                    const argviz_model* model, argviz_graph_result** out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(options, "options");
    need(out, "out");
    GraphPipelineConfig c;
    c.train = train_config(options->train);
    c.tsne = tsne_config(options->tsne);
    c.knn_k = options->knn_k;
    c.threads = options->threads;
    if (options->title != nullptr) c.title = options->title;
    c.seed = options->seed;
    GraphPipelineResult r = run_graph_pipeline(graphs_of(*dataset), dataset->ids, c,
                                               model ? &model->value : nullptr);
    auto* result = new argviz_graph_result{};
    result->model.value = r.model;
    if (r.report) result->report = argviz_train_report{*r.report};
    result->value = std::move(r);
    *out = result;
  });
}

const char* argviz_graph_result_output(const argviz_graph_result* result, argviz_output which) {
  return result ? output_text(result->value, which).c_str() : nullptr;
}

const argviz_model* argviz_graph_result_model(const argviz_graph_result* result) {
  return result ? &result->model : nullptr;
}

const argviz_train_report* argviz_graph_result_report(const argviz_graph_result* result) {
  return result && result->report ? &*result->report : nullptr;
}

double argviz_graph_result_validation_accuracy(const argviz_graph_result* result) {
  return result ? result->value.validation_accuracy : 0.0;
}

void argviz_graph_result_metrics(const argviz_graph_result* result, double* knn,
                                 double* silhouette_out) {
  if (result == nullptr) return;
  if (knn != nullptr) *knn = result->value.metrics.knn_agreement;
  if (silhouette_out != nullptr) *silhouette_out = result->value.metrics.silhouette;
}

double argviz_graph_result_final_kl(const argviz_graph_result* result) {
  return result ? result->value.layout.final_kl : 0.0;
}

size_t argviz_graph_result_warning_count(const argviz_graph_result* result) {
  return result ? result->value.warnings.size() : 0;
}

const char* argviz_graph_result_warning(const argviz_graph_result* result, size_t index) {
  if (result == nullptr || index >= result->value.warnings.size()) return nullptr;
  return result->value.warnings[index].c_str();
}

size_t argviz_graph_result_stage_count(const argviz_graph_result* result) {
  return result ? result->value.timings.size() : 0;
}

const char* argviz_graph_result_stage_name(const argviz_graph_result* result, size_t index) {
  if (result == nullptr || index >= result->value.timings.size()) return nullptr;
  return result->value.timings[index].first.c_str();
}

double argviz_graph_result_stage_seconds(const argviz_graph_result* result, size_t index) {
  if (result == nullptr || index >= result->value.timings.size()) return 0.0;
  return result->value.timings[index].second;
}

void argviz_graph_result_free(argviz_graph_result* result) { delete result; }

}  // extern "C"
