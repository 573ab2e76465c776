#ifndef ARGVIZ_ARGVIZ_H
#define ARGVIZ_ARGVIZ_H

/* C interface to the argviz library: argumentation framework I/O and
 * generators, HOPE node embeddings, exact t-SNE, the graph-level GCN,
 * separation metrics, SVG/CSV output and the two end-to-end pipelines.
 *
 * Conventions
 *   - Every fallible call returns argviz_status; on failure the message is
 *     available from argviz_last_error() on the same thread.
 *   - Objects are opaque handles created by the library and released with the
 *     matching *_free function. Passing NULL to a *_free function is a no-op.
 *   - char* results are NUL-terminated, owned by the caller and released with
 *     argviz_string_free. `const char*` results are borrowed from their handle.
 *   - Matrices are row-major doubles.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ARGVIZ_BUILDING_LIBRARY)
#define ARGVIZ_API __declspec(dllexport)
#else
#define ARGVIZ_API __declspec(dllimport)
#endif
#else
#define ARGVIZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum argviz_status {
  ARGVIZ_OK = 0,
  ARGVIZ_ERR_INVALID_ARGUMENT = 1,
  ARGVIZ_ERR_PARSE = 2,
  ARGVIZ_ERR_IO = 3,
  ARGVIZ_ERR_SINGULAR_MATRIX = 4,
  ARGVIZ_ERR_DIVERGENCE = 5,
  ARGVIZ_ERR_STALE_CACHE = 6,
  ARGVIZ_ERR_UNAVAILABLE = 7,
  ARGVIZ_ERR_INTERNAL = 8
} argviz_status;

typedef enum argviz_format { ARGVIZ_FORMAT_APX = 0, ARGVIZ_FORMAT_TGF = 1 } argviz_format;

typedef struct argviz_framework argviz_framework;
typedef struct argviz_matrix argviz_matrix;
typedef struct argviz_layout argviz_layout;
typedef struct argviz_table argviz_table;
typedef struct argviz_dataset argviz_dataset;
typedef struct argviz_model argviz_model;
typedef struct argviz_train_report argviz_train_report;
typedef struct argviz_node_result argviz_node_result;
typedef struct argviz_graph_result argviz_graph_result;

/* ---- general ---------------------------------------------------------- */

ARGVIZ_API const char* argviz_version(void);
/* Message of the most recent failure on the calling thread ("" if none). */
ARGVIZ_API const char* argviz_last_error(void);
ARGVIZ_API const char* argviz_status_name(argviz_status status);
ARGVIZ_API void argviz_string_free(char* s);
/* Per-stage seed: mix(seed ^ fnv1a(stage)). */
ARGVIZ_API uint64_t argviz_derive_seed(uint64_t seed, const char* stage);

/* ---- matrices --------------------------------------------------------- */

/* `data` may be NULL for a zero matrix; otherwise rows*cols finite values. */
ARGVIZ_API argviz_status argviz_matrix_create(size_t rows, size_t cols, const double* data,
                                              argviz_matrix** out);
ARGVIZ_API size_t argviz_matrix_rows(const argviz_matrix* m);
ARGVIZ_API size_t argviz_matrix_cols(const argviz_matrix* m);
ARGVIZ_API const double* argviz_matrix_data(const argviz_matrix* m);
ARGVIZ_API void argviz_matrix_free(argviz_matrix* m);

/* ---- argumentation frameworks ---------------------------------------- */

ARGVIZ_API argviz_status argviz_framework_parse(const char* text, size_t length,
                                                argviz_format format, argviz_framework** out);
/* Format chosen from the .apx / .tgf extension. */
ARGVIZ_API argviz_status argviz_framework_load(const char* path, argviz_framework** out);
ARGVIZ_API argviz_status argviz_framework_serialize(const argviz_framework* af,
                                                    argviz_format format, char** out);
ARGVIZ_API size_t argviz_framework_argument_count(const argviz_framework* af);
ARGVIZ_API size_t argviz_framework_attack_count(const argviz_framework* af);
ARGVIZ_API const char* argviz_framework_argument(const argviz_framework* af, size_t index);
ARGVIZ_API argviz_status argviz_framework_attack(const argviz_framework* af, size_t index,
                                                 size_t* attacker, size_t* target);
ARGVIZ_API argviz_status argviz_framework_adjacency(const argviz_framework* af,
                                                    argviz_matrix** out);

/* Node labels (e.g. Sembuster partitions). NULL when the node is unlabelled. */
ARGVIZ_API size_t argviz_framework_node_label_count(const argviz_framework* af);
ARGVIZ_API const char* argviz_framework_node_label(const argviz_framework* af, size_t index);
ARGVIZ_API argviz_status argviz_framework_set_node_label(argviz_framework* af, size_t index,
                                                         const char* label);
/* Node label sidecar: CSV with header `id,label`, one row per labelled
 * argument in argument order. Loading matches rows by argument name. */
ARGVIZ_API argviz_status argviz_framework_node_labels_csv(const argviz_framework* af,
                                                          char** out);
ARGVIZ_API argviz_status argviz_framework_apply_node_labels_csv(argviz_framework* af,
                                                                const char* text, size_t length);
/* Graph label (domain); NULL when unset. */
ARGVIZ_API const char* argviz_framework_graph_label(const argviz_framework* af);
ARGVIZ_API argviz_status argviz_framework_set_graph_label(argviz_framework* af,
                                                          const char* label);
ARGVIZ_API void argviz_framework_free(argviz_framework* af);

/* ---- generators ------------------------------------------------------- */

typedef struct argviz_generator_spec {
  const char* domain; /* sembuster, admbuster, BA, ER, WS, grd, scc (any case) */
  size_t k;           /* sembuster */
  size_t n;           /* ER, BA, WS, grd */
  double p;           /* ER */
  size_t m;           /* BA */
  size_t k_ring;      /* WS */
  double rewire;      /* WS */
  size_t depth;       /* grd */
  size_t components;  /* scc */
  size_t component_size;
  double p_intra;
  double p_inter;
  uint64_t seed;
} argviz_generator_spec;

ARGVIZ_API void argviz_generator_spec_defaults(argviz_generator_spec* spec);
ARGVIZ_API argviz_status argviz_generate(const argviz_generator_spec* spec,
                                         argviz_framework** out);

/* ---- HOPE ------------------------------------------------------------- */

typedef struct argviz_hope_options {
  size_t dims;      /* default 64 */
  double beta;      /* <= 0 selects 0.5 / (1 + ||A||_inf) */
  int source_only;  /* 0: [source | target] features, 1: source only */
  uint64_t seed;
} argviz_hope_options;

ARGVIZ_API void argviz_hope_options_defaults(argviz_hope_options* options);
ARGVIZ_API argviz_status argviz_hope_features(const argviz_framework* af,
                                              const argviz_hope_options* options,
                                              argviz_matrix** features, double* beta_used);
ARGVIZ_API argviz_status argviz_katz_matrix(const argviz_matrix* adjacency, double beta,
                                            argviz_matrix** out);

/* ---- t-SNE ------------------------------------------------------------ */

typedef struct argviz_tsne_options {
  double perplexity;
  size_t output_dims;
  size_t iterations;
  double learning_rate; /* <= 0 selects max(n / 12, 50) */
  double momentum_early;
  double momentum_late;
  size_t momentum_switch_iteration;
  double exaggeration_factor;
  size_t exaggeration_iterations;
  int adaptive_gains;
  double min_gain;
  double init_stddev;
  size_t kl_interval;
  uint64_t seed;
} argviz_tsne_options;

ARGVIZ_API void argviz_tsne_options_defaults(argviz_tsne_options* options);
ARGVIZ_API argviz_status argviz_tsne(const argviz_matrix* x, const argviz_tsne_options* options,
                                     argviz_layout** out);
ARGVIZ_API const argviz_matrix* argviz_layout_points(const argviz_layout* layout);
ARGVIZ_API double argviz_layout_final_kl(const argviz_layout* layout);
/* `iteration,kl` samples. */
ARGVIZ_API argviz_status argviz_layout_kl_csv(const argviz_layout* layout, char** out);
ARGVIZ_API void argviz_layout_free(argviz_layout* layout);

/* ---- CSV tables ------------------------------------------------------- */

ARGVIZ_API argviz_status argviz_table_parse(const char* text, size_t length, argviz_table** out);
ARGVIZ_API size_t argviz_table_rows(const argviz_table* table);
ARGVIZ_API const char* argviz_table_id(const argviz_table* table, size_t row);
ARGVIZ_API int argviz_table_has_labels(const argviz_table* table);
ARGVIZ_API const char* argviz_table_label(const argviz_table* table, size_t row);
ARGVIZ_API const argviz_matrix* argviz_table_values(const argviz_table* table);
ARGVIZ_API void argviz_table_free(argviz_table* table);

/* `labels` and `ids` hold `argviz_matrix_rows(points)` entries or are NULL. */
ARGVIZ_API argviz_status argviz_export_layout_csv(const argviz_matrix* points,
                                                  const char* const* labels,
                                                  const char* const* ids, char** out);
ARGVIZ_API argviz_status argviz_export_features_csv(const argviz_matrix* features,
                                                    const char* const* labels,
                                                    const char* const* ids, char** out);

/* ---- metrics and plotting -------------------------------------------- */

ARGVIZ_API argviz_status argviz_knn_agreement(const argviz_matrix* points,
                                              const char* const* labels, size_t k,
                                              double* out);
ARGVIZ_API argviz_status argviz_silhouette(const argviz_matrix* points,
                                           const char* const* labels, double* out);
/* `labels` may be NULL (single colour); `title` may be NULL. */
ARGVIZ_API argviz_status argviz_render_svg(const argviz_matrix* points,
                                           const char* const* labels, const char* title,
                                           char** out);

/* ---- graph datasets --------------------------------------------------- */

typedef struct argviz_synthetic_spec {
  const char* const* domains; /* NULL: sembuster, scc, grd, ER, BA, WS */
  size_t domain_count;
  size_t graphs_per_domain;
  size_t min_size;
  size_t max_size;
  uint64_t seed;
} argviz_synthetic_spec;

ARGVIZ_API void argviz_synthetic_spec_defaults(argviz_synthetic_spec* spec);
ARGVIZ_API argviz_status argviz_dataset_create(argviz_dataset** out);
ARGVIZ_API argviz_status argviz_dataset_synthetic(const argviz_synthetic_spec* spec,
                                                  argviz_dataset** out);
/* Copies `af`; `label` is the graph's domain, `id` names it in outputs. */
ARGVIZ_API argviz_status argviz_dataset_add(argviz_dataset* dataset, const argviz_framework* af,
                                            const char* label, const char* id);
ARGVIZ_API size_t argviz_dataset_size(const argviz_dataset* dataset);
ARGVIZ_API const argviz_framework* argviz_dataset_graph(const argviz_dataset* dataset,
                                                        size_t index);
ARGVIZ_API const char* argviz_dataset_id(const argviz_dataset* dataset, size_t index);
ARGVIZ_API const char* argviz_dataset_label(const argviz_dataset* dataset, size_t index);
ARGVIZ_API void argviz_dataset_free(argviz_dataset* dataset);

/* ---- GCN -------------------------------------------------------------- */

typedef struct argviz_train_options {
  size_t hidden;
  size_t embedding;
  size_t fc_hidden;
  size_t max_epochs;
  size_t patience;
  double validation_fraction;
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  uint64_t seed;
} argviz_train_options;

ARGVIZ_API void argviz_train_options_defaults(argviz_train_options* options);
/* `report` may be NULL. */
ARGVIZ_API argviz_status argviz_gcn_train(const argviz_dataset* dataset,
                                          const argviz_train_options* options,
                                          argviz_model** model, argviz_train_report** report);
ARGVIZ_API argviz_status argviz_gcn_save(const argviz_model* model, const char* path);
ARGVIZ_API argviz_status argviz_gcn_load(const char* path, argviz_model** out);
ARGVIZ_API size_t argviz_model_class_count(const argviz_model* model);
ARGVIZ_API const char* argviz_model_class_name(const argviz_model* model, size_t index);
ARGVIZ_API size_t argviz_model_embedding_width(const argviz_model* model);
/* One row per graph, dataset order, for any thread count >= 1. */
ARGVIZ_API argviz_status argviz_gcn_embed(const argviz_model* model,
                                          const argviz_dataset* dataset, size_t threads,
                                          argviz_matrix** out);
ARGVIZ_API argviz_status argviz_gcn_predict(const argviz_model* model,
                                            const argviz_framework* af, size_t* class_index);
/* Fraction of graphs whose prediction equals their dataset label. */
ARGVIZ_API argviz_status argviz_gcn_accuracy(const argviz_model* model,
                                             const argviz_dataset* dataset, double* out);
ARGVIZ_API void argviz_model_free(argviz_model* model);

ARGVIZ_API size_t argviz_train_report_epochs(const argviz_train_report* report);
ARGVIZ_API size_t argviz_train_report_best_epoch(const argviz_train_report* report);
ARGVIZ_API double argviz_train_report_best_validation_accuracy(const argviz_train_report* report);
ARGVIZ_API double argviz_train_report_initial_loss(const argviz_train_report* report);
ARGVIZ_API uint64_t argviz_train_report_seed(const argviz_train_report* report);
ARGVIZ_API const char* argviz_train_report_init_scheme(const argviz_train_report* report);
/* Per-epoch histories, `epoch` in [0, epochs). */
ARGVIZ_API double argviz_train_report_loss(const argviz_train_report* report, size_t epoch);
ARGVIZ_API double argviz_train_report_train_accuracy(const argviz_train_report* report,
                                                     size_t epoch);
ARGVIZ_API double argviz_train_report_validation_accuracy(const argviz_train_report* report,
                                                          size_t epoch);
ARGVIZ_API void argviz_train_report_free(argviz_train_report* report);

/* ---- pipelines -------------------------------------------------------- */

typedef enum argviz_output {
  ARGVIZ_OUTPUT_SVG = 0,
  ARGVIZ_OUTPUT_LAYOUT_CSV = 1,
  ARGVIZ_OUTPUT_KL_CSV = 2,
  ARGVIZ_OUTPUT_FEATURES_CSV = 3 /* node features, or graph embeddings */
} argviz_output;

typedef struct argviz_node_pipeline_options {
  argviz_hope_options hope;
  argviz_tsne_options tsne;
  size_t knn_k;
  const char* title;
  uint64_t seed; /* stage seeds derive from this; hope.seed and tsne.seed are ignored */
} argviz_node_pipeline_options;

ARGVIZ_API void argviz_node_pipeline_options_defaults(argviz_node_pipeline_options* options);
ARGVIZ_API argviz_status argviz_node_pipeline(const argviz_framework* af,
                                              const argviz_node_pipeline_options* options,
                                              argviz_node_result** out);
ARGVIZ_API const char* argviz_node_result_output(const argviz_node_result* result,
                                                 argviz_output which);
ARGVIZ_API double argviz_node_result_beta(const argviz_node_result* result);
ARGVIZ_API double argviz_node_result_final_kl(const argviz_node_result* result);
/* Returns 0 when metrics were skipped (unlabelled nodes or a single label). */
ARGVIZ_API int argviz_node_result_metrics(const argviz_node_result* result, double* knn,
                                          double* silhouette);
ARGVIZ_API size_t argviz_node_result_stage_count(const argviz_node_result* result);
ARGVIZ_API const char* argviz_node_result_stage_name(const argviz_node_result* result,
                                                     size_t index);
ARGVIZ_API double argviz_node_result_stage_seconds(const argviz_node_result* result,
                                                   size_t index);
ARGVIZ_API void argviz_node_result_free(argviz_node_result* result);

typedef struct argviz_graph_pipeline_options {
  argviz_train_options train;
  argviz_tsne_options tsne;
  size_t knn_k;
  size_t threads;
  const char* title;
  uint64_t seed; /* stage seeds derive from this; train.seed and tsne.seed are ignored */
} argviz_graph_pipeline_options;

ARGVIZ_API void argviz_graph_pipeline_options_defaults(argviz_graph_pipeline_options* options);
/* Trains a model unless `model` is non-NULL. */
ARGVIZ_API argviz_status argviz_graph_pipeline(const argviz_dataset* dataset,
                                               const argviz_graph_pipeline_options* options,
                                               const argviz_model* model,
                                               argviz_graph_result** out);
ARGVIZ_API const char* argviz_graph_result_output(const argviz_graph_result* result,
                                                  argviz_output which);
ARGVIZ_API const argviz_model* argviz_graph_result_model(const argviz_graph_result* result);
/* NULL when the pipeline was given a model. */
ARGVIZ_API const argviz_train_report* argviz_graph_result_report(
    const argviz_graph_result* result);
ARGVIZ_API double argviz_graph_result_validation_accuracy(const argviz_graph_result* result);
ARGVIZ_API void argviz_graph_result_metrics(const argviz_graph_result* result, double* knn,
                                            double* silhouette);
ARGVIZ_API double argviz_graph_result_final_kl(const argviz_graph_result* result);
ARGVIZ_API size_t argviz_graph_result_warning_count(const argviz_graph_result* result);
ARGVIZ_API const char* argviz_graph_result_warning(const argviz_graph_result* result,
                                                   size_t index);
ARGVIZ_API size_t argviz_graph_result_stage_count(const argviz_graph_result* result);
ARGVIZ_API const char* argviz_graph_result_stage_name(const argviz_graph_result* result,
                                                      size_t index);
ARGVIZ_API double argviz_graph_result_stage_seconds(const argviz_graph_result* result,
                                                    size_t index);
ARGVIZ_API void argviz_graph_result_free(argviz_graph_result* result);

#ifdef __cplusplus
}
#endif

#endif
