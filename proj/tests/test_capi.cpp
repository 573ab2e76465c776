#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"

#include "argviz/argviz.h"

namespace {

std::string take(char* s) {
  std::string out(s);
  argviz_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("c api: frameworks and errors") {
  argviz_framework* af = nullptr;
  const std::string text = "arg(a).\narg(b).\natt(a,b).\n";
  REQUIRE(argviz_framework_parse(text.data(), text.size(), ARGVIZ_FORMAT_APX, &af) == ARGVIZ_OK);
  CHECK(argviz_framework_argument_count(af) == 2);
  CHECK(argviz_framework_attack_count(af) == 1);
  CHECK(std::string(argviz_framework_argument(af, 1)) == "b");
  size_t from = 9, to = 9;
  CHECK(argviz_framework_attack(af, 0, &from, &to) == ARGVIZ_OK);
  CHECK(from == 0);
  CHECK(to == 1);
  CHECK(argviz_framework_attack(af, 5, &from, &to) == ARGVIZ_ERR_INVALID_ARGUMENT);

  char* out = nullptr;
  REQUIRE(argviz_framework_serialize(af, ARGVIZ_FORMAT_TGF, &out) == ARGVIZ_OK);
  CHECK(take(out) == "a\nb\n#\na b\n");

  const std::string labels = "id,label\nb,B\n";
  CHECK(argviz_framework_apply_node_labels_csv(af, labels.data(), labels.size()) == ARGVIZ_OK);
  CHECK(argviz_framework_node_label(af, 0) == nullptr);
  CHECK(std::string(argviz_framework_node_label(af, 1)) == "B");
  REQUIRE(argviz_framework_node_labels_csv(af, &out) == ARGVIZ_OK);
  CHECK(take(out) == labels);
  const std::string unknown = "id,label\nzz,B\n";
  CHECK(argviz_framework_apply_node_labels_csv(af, unknown.data(), unknown.size()) ==
        ARGVIZ_ERR_PARSE);
  argviz_framework_free(af);

  argviz_framework* bad = nullptr;
  const std::string broken = "att(a,b).";
  CHECK(argviz_framework_parse(broken.data(), broken.size(), ARGVIZ_FORMAT_APX, &bad) ==
        ARGVIZ_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(argviz_last_error()).find("undeclared") != std::string::npos);
  CHECK(argviz_framework_load("/nonexistent/x.apx", &bad) == ARGVIZ_ERR_IO);
  CHECK(argviz_framework_load("/nonexistent/x.txt", &bad) == ARGVIZ_ERR_INVALID_ARGUMENT);
  CHECK(argviz_framework_parse(nullptr, 0, ARGVIZ_FORMAT_APX, &bad) ==
        ARGVIZ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(argviz_status_name(ARGVIZ_ERR_UNAVAILABLE)) == "unavailable");
  argviz_framework_free(nullptr);
}

TEST_CASE("c api: generators, hope, tsne, metrics, plot") {
  argviz_generator_spec spec;
  argviz_generator_spec_defaults(&spec);
  spec.domain = "sembuster";
  spec.k = 10;
  argviz_framework* af = nullptr;
  REQUIRE(argviz_generate(&spec, &af) == ARGVIZ_OK);
  CHECK(argviz_framework_argument_count(af) == 30);
  CHECK(argviz_framework_attack_count(af) == 130);
  CHECK(argviz_framework_node_label_count(af) == 30);

  spec.domain = "admbuster";
  argviz_framework* adm = nullptr;
  CHECK(argviz_generate(&spec, &adm) == ARGVIZ_ERR_UNAVAILABLE);
  spec.domain = "nope";
  CHECK(argviz_generate(&spec, &adm) == ARGVIZ_ERR_INVALID_ARGUMENT);

  argviz_hope_options hope;
  argviz_hope_options_defaults(&hope);
  hope.dims = 4;
  argviz_matrix* features = nullptr;
  double beta = 0.0;
  REQUIRE(argviz_hope_features(af, &hope, &features, &beta) == ARGVIZ_OK);
  CHECK(argviz_matrix_rows(features) == 30);
  CHECK(argviz_matrix_cols(features) == 8);
  CHECK(beta > 0.0);

  argviz_tsne_options tsne;
  argviz_tsne_options_defaults(&tsne);
  tsne.perplexity = 5.0;
  tsne.iterations = 300;
  argviz_layout* layout = nullptr;
  REQUIRE(argviz_tsne(features, &tsne, &layout) == ARGVIZ_OK);
  const argviz_matrix* points = argviz_layout_points(layout);
  CHECK(argviz_matrix_rows(points) == 30);
  CHECK(argviz_matrix_cols(points) == 2);
  CHECK(std::isfinite(argviz_layout_final_kl(layout)));

  std::vector<const char*> labels(30);
  for (size_t i = 0; i < 30; ++i) labels[i] = argviz_framework_node_label(af, i);
  double knn = -1.0, sil = -2.0;
  CHECK(argviz_knn_agreement(points, labels.data(), 3, &knn) == ARGVIZ_OK);
  CHECK(argviz_silhouette(points, labels.data(), &sil) == ARGVIZ_OK);
  CHECK(knn >= 0.0);
  CHECK(knn <= 1.0);
  CHECK(sil >= -1.0);
  CHECK(sil <= 1.0);
  CHECK(argviz_knn_agreement(points, labels.data(), 30, &knn) == ARGVIZ_ERR_INVALID_ARGUMENT);

  char* svg = nullptr;
  REQUIRE(argviz_render_svg(points, labels.data(), "t", &svg) == ARGVIZ_OK);
  const std::string svg_text = take(svg);
  CHECK(svg_text.find("#00FFFF") != std::string::npos);

  char* csv = nullptr;
  REQUIRE(argviz_export_layout_csv(points, labels.data(), nullptr, &csv) == ARGVIZ_OK);
  const std::string csv_text = take(csv);
  argviz_table* table = nullptr;
  REQUIRE(argviz_table_parse(csv_text.data(), csv_text.size(), &table) == ARGVIZ_OK);
  CHECK(argviz_table_rows(table) == 30);
  CHECK(argviz_table_has_labels(table) == 1);
  CHECK(std::string(argviz_table_label(table, 0)) == "A");
  CHECK(argviz_matrix_cols(argviz_table_values(table)) == 2);
  argviz_table_free(table);

  REQUIRE(argviz_layout_kl_csv(layout, &csv) == ARGVIZ_OK);
  CHECK(take(csv).rfind("iteration,kl\n", 0) == 0);

  argviz_layout_free(layout);
  argviz_matrix_free(features);
  argviz_framework_free(af);
}

TEST_CASE("c api: katz and matrices") {
  const double cycle[] = {0, 1, 1, 0};
  argviz_matrix* a = nullptr;
  REQUIRE(argviz_matrix_create(2, 2, cycle, &a) == ARGVIZ_OK);
  argviz_matrix* s = nullptr;
  REQUIRE(argviz_katz_matrix(a, 0.5, &s) == ARGVIZ_OK);
  CHECK(argviz_matrix_data(s)[1] == doctest::Approx(2.0 / 3.0));
  argviz_matrix* t = nullptr;
  CHECK(argviz_katz_matrix(a, 1.0, &t) == ARGVIZ_ERR_INVALID_ARGUMENT);
  const double nan_data[] = {NAN};
  CHECK(argviz_matrix_create(1, 1, nan_data, &t) == ARGVIZ_ERR_INVALID_ARGUMENT);
  argviz_matrix_free(s);
  argviz_matrix_free(a);
  CHECK(argviz_derive_seed(42, "hope") == argviz_derive_seed(42, "hope"));
  CHECK(argviz_derive_seed(42, "hope") != argviz_derive_seed(42, "tsne"));
}

TEST_CASE("c api: gcn and pipelines") {
  argviz_synthetic_spec spec;
  argviz_synthetic_spec_defaults(&spec);
  const char* domains[] = {"sembuster", "ER"};
  spec.domains = domains;
  spec.domain_count = 2;
  spec.graphs_per_domain = 5;
  spec.seed = 3;
  argviz_dataset* ds = nullptr;
  REQUIRE(argviz_dataset_synthetic(&spec, &ds) == ARGVIZ_OK);
  CHECK(argviz_dataset_size(ds) == 10);
  CHECK(std::string(argviz_dataset_label(ds, 0)) == "sembuster");

  argviz_train_options train;
  argviz_train_options_defaults(&train);
  train.max_epochs = 5;
  argviz_model* model = nullptr;
  argviz_train_report* report = nullptr;
  REQUIRE(argviz_gcn_train(ds, &train, &model, &report) == ARGVIZ_OK);
  CHECK(argviz_model_class_count(model) == 2);
  CHECK(argviz_train_report_epochs(report) >= 1);
  CHECK(std::string(argviz_train_report_init_scheme(report)) == "glorot_uniform");

  const std::string path = "capi_test_model.gcn";
  REQUIRE(argviz_gcn_save(model, path.c_str()) == ARGVIZ_OK);
  argviz_model* loaded = nullptr;
  REQUIRE(argviz_gcn_load(path.c_str(), &loaded) == ARGVIZ_OK);
  std::remove(path.c_str());

  argviz_matrix* e1 = nullptr;
  argviz_matrix* e4 = nullptr;
  REQUIRE(argviz_gcn_embed(model, ds, 1, &e1) == ARGVIZ_OK);
  REQUIRE(argviz_gcn_embed(loaded, ds, 4, &e4) == ARGVIZ_OK);
  CHECK(argviz_matrix_rows(e1) == 10);
  CHECK(argviz_matrix_cols(e1) == argviz_model_embedding_width(model));
  for (size_t i = 0; i < 10 * argviz_matrix_cols(e1); ++i)
    CHECK(argviz_matrix_data(e1)[i] == argviz_matrix_data(e4)[i]);
  size_t cls = 99;
  CHECK(argviz_gcn_predict(model, argviz_dataset_graph(ds, 0), &cls) == ARGVIZ_OK);
  CHECK(cls < 2);
  double acc = -1.0;
  CHECK(argviz_gcn_accuracy(model, ds, &acc) == ARGVIZ_OK);
  CHECK(acc >= 0.0);

  argviz_graph_pipeline_options gp;
  argviz_graph_pipeline_options_defaults(&gp);
  gp.train.max_epochs = 5;
  gp.tsne.perplexity = 3.0;
  gp.knn_k = 3;
  argviz_graph_result* gr = nullptr;
  REQUIRE(argviz_graph_pipeline(ds, &gp, nullptr, &gr) == ARGVIZ_OK);
  CHECK(argviz_graph_result_report(gr) != nullptr);
  CHECK(std::string(argviz_graph_result_output(gr, ARGVIZ_OUTPUT_LAYOUT_CSV)).rfind("id,x,y,label", 0) == 0);
  argviz_graph_result* reuse = nullptr;
  REQUIRE(argviz_graph_pipeline(ds, &gp, argviz_graph_result_model(gr), &reuse) == ARGVIZ_OK);
  CHECK(argviz_graph_result_report(reuse) == nullptr);
  CHECK(std::string(argviz_graph_result_output(gr, ARGVIZ_OUTPUT_SVG)) ==
        argviz_graph_result_output(reuse, ARGVIZ_OUTPUT_SVG));

  argviz_dataset* single = nullptr;
  REQUIRE(argviz_dataset_create(&single) == ARGVIZ_OK);
  CHECK(argviz_dataset_add(single, argviz_dataset_graph(ds, 0), "x", "g0") == ARGVIZ_OK);
  CHECK(argviz_dataset_add(single, argviz_dataset_graph(ds, 1), "x", "g1") == ARGVIZ_OK);
  argviz_graph_result* none = nullptr;
  CHECK(argviz_graph_pipeline(single, &gp, nullptr, &none) == ARGVIZ_ERR_INVALID_ARGUMENT);

  argviz_graph_result_free(reuse);
  argviz_graph_result_free(gr);
  argviz_dataset_free(single);
  argviz_matrix_free(e1);
  argviz_matrix_free(e4);
  argviz_model_free(loaded);
  argviz_model_free(model);
  argviz_train_report_free(report);
  argviz_dataset_free(ds);
}

TEST_CASE("c api: node pipeline") {
  const std::string text = "arg(a).\narg(b).\narg(c).\narg(d).\narg(e).\n"
                           "att(a,b).\natt(b,c).\natt(c,a).\natt(d,e).\n";
  argviz_framework* af = nullptr;
  REQUIRE(argviz_framework_parse(text.data(), text.size(), ARGVIZ_FORMAT_APX, &af) == ARGVIZ_OK);
  argviz_node_pipeline_options o;
  argviz_node_pipeline_options_defaults(&o);
  o.hope.dims = 2;
  o.tsne.perplexity = 2.0;
  o.tsne.iterations = 300;
  argviz_node_result* r = nullptr;
  REQUIRE(argviz_node_pipeline(af, &o, &r) == ARGVIZ_OK);
  CHECK(argviz_node_result_metrics(r, nullptr, nullptr) == 0);
  const std::string svg = argviz_node_result_output(r, ARGVIZ_OUTPUT_SVG);
  size_t circles = 0;
  for (size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1))
    ++circles;
  CHECK(circles == 5);
  CHECK(argviz_node_result_stage_count(r) >= 2);
  argviz_node_result_free(r);
  argviz_framework_free(af);
}
