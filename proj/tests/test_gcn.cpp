#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "core/error.hpp"
#include "core/random.hpp"
#include "gcn/gcn.hpp"
#include "generators/generators.hpp"

using namespace argviz;

namespace {

GcnDims small_dims(std::size_t classes) {
  GcnDims d;
  d.hidden = 6;
  d.embedding = 5;
  d.fc_hidden = 4;
  d.classes = classes;
  return d;
}

ArgumentationFramework six_node_graph() {
  return ArgumentationFramework({"a", "b", "c", "d", "e", "f"},
                                {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 3}, {4, 3}, {5, 4}, {1, 5}});
}

ArgumentationFramework permuted(const ArgumentationFramework& af, std::uint64_t seed) {
  std::vector<std::size_t> perm(af.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  std::vector<std::string> names(af.size());
  for (std::size_t i = 0; i < af.size(); ++i) names[perm[i]] = af.arguments()[i];
  std::vector<Attack> attacks;
  for (const auto& [a, b] : af.attacks()) attacks.emplace_back(perm[a], perm[b]);
  return ArgumentationFramework(names, attacks);
}

LabeledFramework labeled(ArgumentationFramework af, std::string label) {
  return LabeledFramework{std::move(af), std::move(label), {}};
}

}  // namespace

TEST_CASE("node features") {
  CHECK(node_features(ArgumentationFramework({"a", "b", "c"}, {})) ==
        Matrix::from_rows({{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}));
  CHECK(node_features(ArgumentationFramework({"a"}, {{0, 0}})) ==
        Matrix::from_rows({{1, 1, 1, 1}}));
  const auto s = gen_sembuster(2).framework;
  const Matrix f = node_features(s);
  const std::size_t b2 = *s.index_of("b2");
  CHECK(f(b2, 2) == doctest::Approx(4.0 / 6.0));
  CHECK(f(b2, 3) == 0.0);
}

TEST_CASE("normalized adjacency") {
  CHECK(normalized_adjacency(ArgumentationFramework({"a"}, {})) == Matrix::from_rows({{1}}));
  const Matrix two = normalized_adjacency(ArgumentationFramework({"a", "b"}, {{0, 1}}));
  for (double v : two.data()) CHECK(v == doctest::Approx(0.5));
  // Symmetric with spectral radius 1 (row sums themselves may exceed 1).
  const Matrix m = normalized_adjacency(gen_erdos_renyi(20, 0.2, 3).framework);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) CHECK(m(i, j) == m(j, i));
  Matrix v(20, 1, 1.0);
  double norm = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Matrix w = matmul(m, v);
    norm = frobenius_norm(w) / frobenius_norm(v);
    v = scale(w, 1.0 / frobenius_norm(w));
  }
  CHECK(norm <= 1.0 + 1e-9);
  CHECK(norm >= 1.0 - 1e-6);
  // The sparse operator matches the dense one.
  const auto af = gen_erdos_renyi(15, 0.2, 4).framework;
  const GraphInput g(af);
  const Matrix h = node_features(af);
  const Matrix dense = matmul(normalized_adjacency(af), h);
  const Matrix sparse = g.propagate(h);
  for (std::size_t i = 0; i < dense.size(); ++i)
    CHECK(std::abs(dense.data()[i] - sparse.data()[i]) < 1e-14);
}

TEST_CASE("forward pass") {
  const auto af = six_node_graph();
  SUBCASE("zero weights") {
    GcnModel model{small_dims(3), GcnParameters::zeros(small_dims(3)), {"x", "y", "z"}, 0};
    const GcnOutput out = gcn_forward(model, af);
    for (double v : out.logits) CHECK(v == 0.0);
    for (double p : softmax(out.logits)) CHECK(p == doctest::Approx(1.0 / 3.0));
    for (double v : extract_embedding(model, af)) CHECK(v == 0.0);
  }
  SUBCASE("single node trace") {
    GcnDims d;
    d.hidden = 4;
    d.embedding = 4;
    d.fc_hidden = 2;
    d.classes = 2;
    GcnModel model{d, GcnParameters::zeros(d), {"x", "y"}, 0};
    for (auto& w : model.params.conv) w = Matrix::identity(4);
    const ArgumentationFramework one({"a"}, {{0, 0}});
    const auto e = extract_embedding(model, one);
    CHECK(e == std::vector<double>{1, 1, 1, 1});
  }
  SUBCASE("embedding equals forward embedding") {
    const GcnModel model = init_model(small_dims(3), {"x", "y", "z"}, 4);
    CHECK(extract_embedding(model, af) == gcn_forward(model, af).embedding);
  }
  SUBCASE("permutation invariance") {
    const GcnModel model = init_model(GcnDims{4, 16, 8, 8, 3}, {"x", "y", "z"}, 5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = gen_erdos_renyi(25, 0.15, seed).framework;
      const auto p = permuted(g, seed + 100);
      const auto a = gcn_forward(model, g);
      const auto b = gcn_forward(model, p);
      for (std::size_t i = 0; i < a.logits.size(); ++i)
        CHECK(std::abs(a.logits[i] - b.logits[i]) <= 1e-10);
      for (std::size_t i = 0; i < a.embedding.size(); ++i)
        CHECK(std::abs(a.embedding[i] - b.embedding[i]) <= 1e-10);
    }
  }
  SUBCASE("softmax and cross entropy") {
    const auto p = softmax({1000.0, 999.0, -5.0});
    CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) < 1e-12);
    CHECK(cross_entropy({0.0, 0.0}, 1) == doctest::Approx(std::log(2.0)));
    CHECK(cross_entropy({50.0, -50.0}, 0) >= 0.0);
  }
}

TEST_CASE("backward pass") {
  const auto af = six_node_graph();
  const GraphInput g(af);
  GcnModel model = init_model(small_dims(3), {"x", "y", "z"}, 11);
  // Keep every ReLU away from its kink so central differences are clean.
  const std::size_t target = 1;
  const GcnOutput out = gcn_forward(model, g);
  const GcnParameters grads = gcn_backward(model, g, target, out.cache);

  SUBCASE("finite differences per block") {
    const double h = 1e-5;
    const auto names = GcnParameters::block_names();
    const auto analytic = grads.blocks();
    auto params = model.params.blocks();
    for (std::size_t b = 0; b < GcnParameters::kBlockCount; ++b) {
      double err = 0.0, norm = 0.0;
      Matrix& block = *params[b];
      for (std::size_t i = 0; i < block.size(); ++i) {
        const double saved = block.data()[i];
        block.data()[i] = saved + h;
        const double up = cross_entropy(gcn_forward(model, g).logits, target);
        block.data()[i] = saved - h;
        const double down = cross_entropy(gcn_forward(model, g).logits, target);
        block.data()[i] = saved;
        const double fd = (up - down) / (2 * h);
        const double an = analytic[b]->data()[i];
        err += (fd - an) * (fd - an);
        norm += std::max(fd * fd, an * an);
      }
      INFO("block " << names[b]);
      CHECK(std::sqrt(err / std::max(norm, 1e-30)) <= 1e-4);
    }
  }
  SUBCASE("output bias gradient is softmax minus one hot") {
    const auto p = softmax(out.logits);
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(grads.fc2_bias(0, c) == doctest::Approx(p[c] - (c == target ? 1.0 : 0.0)));
  }
  SUBCASE("one hot output gives vanishing gradients") {
    GcnModel sure = model;
    sure.params.fc2_bias(0, target) = 1e4;
    const GcnOutput o = gcn_forward(sure, g);
    const GcnParameters z = gcn_backward(sure, g, target, o.cache);
    for (const Matrix* m : z.blocks()) CHECK(max_abs(*m) <= 1e-10);
  }
  SUBCASE("stale cache") {
    GcnModel changed = model;
    changed.params.fc1_weight(0, 0) += 0.1;
    try {
      (void)gcn_backward(changed, g, target, out.cache);
      FAIL("expected stale cache");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::stale_cache);
    }
    const GraphInput other(gen_erdos_renyi(9, 0.3, 1).framework);
    CHECK_THROWS_AS(gcn_backward(model, other, target, out.cache), Error);
  }
}

TEST_CASE("stratified split") {
  std::vector<std::string> labels;
  for (int i = 0; i < 10; ++i) labels.push_back("a");
  for (int i = 0; i < 5; ++i) labels.push_back("b");
  const Split s = stratified_split(labels, 0.2, 3);
  CHECK(s.train.size() + s.validation.size() == 15);
  std::size_t va = 0, vb = 0;
  for (std::size_t i : s.validation) (labels[i] == "a" ? va : vb) += 1;
  CHECK(va == 2);
  CHECK(vb == 1);
  CHECK(stratified_split(labels, 0.2, 3).validation == s.validation);
}

TEST_CASE("training") {
  std::vector<LabeledFramework> data;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t n = 5 + i % 6;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n; ++j) names.push_back("x" + std::to_string(j));
    std::vector<Attack> all;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) all.emplace_back(a, b);
    data.push_back(labeled(ArgumentationFramework(names, {}), "edgeless"));
    data.push_back(labeled(ArgumentationFramework(names, all), "complete"));
  }
  TrainConfig config;
  config.max_epochs = 50;
  config.patience = 50;
  config.seed = 42;

  const TrainResult r = train(data, config);
  CHECK(r.report.best_validation_accuracy == 1.0);
  CHECK(r.report.epochs_run <= 50);
  CHECK(r.report.init_scheme == "glorot_uniform");
  for (double l : r.report.loss) CHECK(l >= 0.0);
  for (double a : r.report.validation_accuracy) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
  CHECK(r.model.class_names == std::vector<std::string>{"complete", "edgeless"});

  const TrainResult again = train(data, config);
  CHECK(again.model == r.model);
  CHECK(again.report.loss == r.report.loss);
  CHECK(again.report.validation_accuracy == r.report.validation_accuracy);

  SUBCASE("initial loss is near ln C") {
    SyntheticDatasetSpec spec;
    spec.graphs_per_domain = 6;
    spec.seed = 1;
    TrainConfig c;
    c.max_epochs = 1;
    c.seed = 5;
    const TrainResult t = train(synthetic_domain_dataset(spec), c);
    CHECK(std::abs(t.report.initial_loss - std::log(6.0)) < 0.25);
  }
  SUBCASE("preconditions") {
    std::vector<LabeledFramework> one{data[0], data[2], data[4]};
    CHECK_THROWS_AS(train(one, config), Error);
    std::vector<LabeledFramework> unlabeled = data;
    unlabeled[0].graph_label.reset();
    CHECK_THROWS_AS(train(unlabeled, config), Error);
    TrainConfig expect = config;
    expect.classes = {"complete", "edgeless", "missing"};
    CHECK_THROWS_AS(train(data, expect), Error);
  }
}

TEST_CASE("checkpoint") {
  const GcnModel model = init_model(GcnDims{4, 8, 6, 5, 3}, {"p", "q", "r"}, 77);
  const std::string bytes = save_checkpoint(model);
  CHECK(bytes.substr(0, 8) == "ARGVZGCN");
  const GcnModel back = load_checkpoint(bytes);
  CHECK(back == model);
  CHECK(save_checkpoint(back) == bytes);

  CHECK_THROWS_AS(load_checkpoint(bytes.substr(0, bytes.size() - 3)), Error);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(load_checkpoint(bad), Error);
}
