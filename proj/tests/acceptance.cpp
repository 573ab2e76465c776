#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "core/error.hpp"
#include "core/random.hpp"
#include "gcn/gcn.hpp"
#include "generators/generators.hpp"
#include "hope/hope.hpp"
#include "metrics/metrics.hpp"
#include "oracles.hpp"
#include "pipeline/pipeline.hpp"
#include "tsne/tsne.hpp"

using namespace argviz;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note("failed: " + what);
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

Matrix random_points(std::size_t n, std::size_t d, Rng& rng) {
  Matrix m(n, d);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

// 1. Sembuster node-level reproduction.
Outcome sembuster_nodes() {
  Outcome out;
  const LabeledFramework input = gen_sembuster(100);
  std::size_t held = 0;
  for (double perplexity : {10.0, 30.0, 50.0}) {
    NodePipelineConfig config;
    config.hope.dims = 64;
    config.tsne.perplexity = perplexity;
    config.knn_k = 10;
    config.seed = 42;
    const NodePipelineResult r = run_node_pipeline(input, config);
    const bool ok = r.metrics->knn_agreement >= 0.90 && r.metrics->silhouette >= 0.2;
    held += ok ? 1 : 0;
    out.note("perplexity " + fmt("%.0f", perplexity) + " knn=" +
             fmt("%.4f", r.metrics->knn_agreement) + " silhouette=" +
             fmt("%.4f", r.metrics->silhouette));
  }
  out.note(std::to_string(held) + "/3 perplexities meet knn>=0.90 and silhouette>=0.2");
  out.require(held >= 2, "at least 2 of 3 perplexities");
  return out;
}

std::size_t env_threads() {
  const char* env = std::getenv("ARGVIZ_THREADS");
  if (env == nullptr) return 1;
  const long v = std::strtol(env, nullptr, 10);
  return v > 0 ? static_cast<std::size_t>(v) : 1;
}

// 2. Graph-level reproduction.
Outcome graph_domains() {
  Outcome out;
  SyntheticDatasetSpec spec;
  spec.graphs_per_domain = 30;
  spec.min_size = 30;
  spec.max_size = 150;
  spec.seed = derive_seed(42, "dataset");
  const auto dataset = synthetic_domain_dataset(spec);
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> counters;
  for (const auto& g : dataset) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu", g.graph_label->c_str(), counters[*g.graph_label]++);
    ids.emplace_back(buf);
  }
  GraphPipelineConfig config;
  config.knn_k = 5;
  config.seed = 42;
  config.threads = env_threads();
  const GraphPipelineResult r = run_graph_pipeline(dataset, ids, config);
  out.note(std::to_string(spec.domains.size()) + " domains x 30 graphs, " +
           std::to_string(r.report->epochs_run) + " epochs");
  out.note("held-out accuracy=" + fmt("%.4f", r.validation_accuracy));
  out.note("knn(5)=" + fmt("%.4f", r.metrics.knn_agreement));
  out.require(r.validation_accuracy >= 0.80, "accuracy >= 0.80");
  out.require(r.metrics.knn_agreement >= 0.70, "knn(5) >= 0.70");
  return out;
}

// 3. t-SNE correctness suite.
Outcome tsne_suite() {
  Outcome out;
  Rng rng(301);

  double worst_fd = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    const Matrix x = random_points(10, 5, rng);
    const Matrix y = random_points(10, 2, rng);
    const Matrix p = symmetrize(conditional_affinities(x, 3.0).p);
    const Matrix g = tsne_gradient(p, y);
    const double h = 1e-6;
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t c = 0; c < 2; ++c) {
        Matrix plus = y, minus = y;
        plus(i, c) += h;
        minus(i, c) -= h;
        const double fd = (kl_divergence(p, student_t_affinities(plus).q) -
                           kl_divergence(p, student_t_affinities(minus).q)) / (2 * h);
        err += (fd - g(i, c)) * (fd - g(i, c));
        norm += g(i, c) * g(i, c);
      }
    worst_fd = std::max(worst_fd, std::sqrt(err / norm));
  }
  out.note("(a) worst gradient rel. error " + fmt("%.2e", worst_fd));
  out.require(worst_fd <= 1e-5, "(a) gradient rel. error <= 1e-5");

  double worst_asym = 0.0, worst_sum = 0.0, worst_perp = 0.0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t n = 8 + rng.uniform_index(53);
    const std::size_t d = 2 + rng.uniform_index(9);
    const double target = 2.0 + rng.uniform01() * (static_cast<double>(n) / 3.0 - 2.0);
    const Matrix x = random_points(n, d, rng);
    const ConditionalAffinities c = conditional_affinities(x, target);
    for (std::size_t i = 0; i < n; ++i)
      worst_perp = std::max(worst_perp, std::abs(row_perplexity(c.p, i) - target));
    const Matrix p = symmetrize(c.p);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        worst_asym = std::max(worst_asym, std::abs(p(i, j) - p(j, i)));
        total += p(i, j);
      }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }
  out.note("(b) asymmetry " + fmt("%.1e", worst_asym) + ", sum error " + fmt("%.1e", worst_sum) +
           ", perplexity error " + fmt("%.1e", worst_perp));
  out.require(worst_asym <= 1e-15, "(b) symmetry");
  out.require(worst_sum <= 1e-10, "(b) unit sum");
  out.require(worst_perp <= 1e-4, "(b) achieved perplexity");

  std::size_t partners = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r(seed + 100);
    Matrix x(4, 10);
    for (std::size_t c = 0; c < 10; ++c) {
      const double a = r.normal(), b = r.normal();
      x(0, c) = a;
      x(1, c) = a + 0.01 * r.normal();
      x(2, c) = b + 50.0;
      x(3, c) = b + 50.0 + 0.01 * r.normal();
    }
    TsneConfig config;
    config.perplexity = 2.0;
    config.seed = seed;
    const Layout2D layout = tsne_embed(x, config);
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
      const std::size_t partner = i ^ 1U;
      for (std::size_t j = 0; j < 4; ++j)
        if (j != i && j != partner &&
            oracle::euclid(layout.y, i, j) <= oracle::euclid(layout.y, i, partner))
          ok = false;
    }
    partners += ok ? 1 : 0;
  }
  out.note("(c) pair partner is nearest neighbour in " + std::to_string(partners) + "/10 seeds");
  out.require(partners == 10, "(c) 10/10 seeds");
  return out;
}

ArgumentationFramework random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Attack> attacks;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (rng.uniform01() < p) attacks.emplace_back(a, b);
  return ArgumentationFramework(names, attacks);
}

// 4. HOPE correctness suite.
Outcome hope_suite() {
  Outcome out;
  Rng rng(401);

  double worst_katz = 0.0;
  for (int graph = 0; graph < 50; ++graph) {
    const std::size_t n = 2 + rng.uniform_index(19);
    const Matrix a = adjacency_matrix(random_graph(n, 0.05 + 0.4 * rng.uniform01(), rng));
    const double beta = default_beta(a);
    const Matrix exact = katz_matrix(a, beta);
    const Matrix series = oracle::katz_series(a, beta, 30);
    worst_katz = std::max(worst_katz, max_abs(subtract(exact, series)));
  }
  out.note("(a) worst Katz error " + fmt("%.1e", worst_katz));
  out.require(worst_katz <= 1e-8, "(a) Katz vs series <= 1e-8");

  double worst_recon = 0.0;
  for (int graph = 0; graph < 20; ++graph) {
    const std::size_t n = 2 + rng.uniform_index(19);
    const ArgumentationFramework af = random_graph(n, 0.05 + 0.4 * rng.uniform01(), rng);
    const HopeEmbedding e = hope_embed(af, {n, std::nullopt, 7});
    const Matrix s = katz_matrix(adjacency_matrix(af), e.beta);
    const double scale = frobenius_norm(s);
    if (scale == 0.0) continue;
    worst_recon = std::max(worst_recon, frobenius_norm(subtract(reconstruct(e), s)) / scale);
  }
  out.note("(b) worst full-rank relative residual " + fmt("%.1e", worst_recon));
  out.require(worst_recon <= 1e-6, "(b) full-rank reconstruction");

  const ArgumentationFramework af = gen_sembuster(50).framework;
  const Matrix adj = adjacency_matrix(af);
  const Matrix s = katz_matrix(adj, default_beta(adj));
  std::vector<double> errors;
  std::string listing;
  for (std::size_t d : {4, 8, 16, 32, 64}) {
    errors.push_back(frobenius_norm(subtract(reconstruct(hope_embed(af, {d, std::nullopt, 42})), s)));
    listing += (listing.empty() ? "" : ",") + fmt("%.3g", errors.back());
  }
  bool monotone = true;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (errors[i] > errors[i - 1] + 1e-12 * frobenius_norm(s)) monotone = false;
  out.note("(c) errors over d=4..64 [" + listing + "]");
  out.require(monotone, "(c) non-increasing in d");
  return out;
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

// 5. GCN correctness suite.
Outcome gcn_suite() {
  Outcome out;
  const ArgumentationFramework six({"a", "b", "c", "d", "e", "f"},
                                   {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 3}, {4, 3}, {5, 4}, {1, 5}});
  const GraphInput g(six);
  GcnDims dims;
  dims.hidden = 6;
  dims.embedding = 5;
  dims.fc_hidden = 4;
  dims.classes = 3;
  GcnModel model = init_model(dims, {"x", "y", "z"}, 11);
  const std::size_t target = 1;
  const GcnParameters grads = gcn_backward(model, g, target, gcn_forward(model, g).cache);
  const auto analytic = grads.blocks();
  auto params = model.params.blocks();
  double worst = 0.0;
  for (std::size_t b = 0; b < GcnParameters::kBlockCount; ++b) {
    const double h = 1e-5;
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
    worst = std::max(worst, std::sqrt(err / std::max(norm, 1e-30)));
  }
  out.note("(a) worst block rel. error " + fmt("%.1e", worst));
  out.require(worst <= 1e-4, "(a) backprop vs finite differences");

  const GcnModel wide = init_model(GcnDims{4, 64, 32, 32, 3}, {"x", "y", "z"}, 5);
  double drift = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto graph = gen_erdos_renyi(25, 0.15, seed).framework;
    const auto a = gcn_forward(wide, graph);
    const auto b = gcn_forward(wide, permuted(graph, seed + 100));
    for (std::size_t i = 0; i < a.logits.size(); ++i)
      drift = std::max(drift, std::abs(a.logits[i] - b.logits[i]));
    for (std::size_t i = 0; i < a.embedding.size(); ++i)
      drift = std::max(drift, std::abs(a.embedding[i] - b.embedding[i]));
  }
  out.note("(b) permutation drift " + fmt("%.1e", drift));
  out.require(drift <= 1e-10, "(b) permutation invariance");

  std::vector<LabeledFramework> data;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t n = 5 + i % 6;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n; ++j) names.push_back("x" + std::to_string(j));
    std::vector<Attack> all;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) all.emplace_back(a, b);
    data.push_back(LabeledFramework{ArgumentationFramework(names, {}), "edgeless", {}});
    data.push_back(LabeledFramework{ArgumentationFramework(names, all), "complete", {}});
  }
  TrainConfig config;
  config.max_epochs = 50;
  config.patience = 50;
  config.seed = 42;
  const TrainResult r = train(data, config);
  std::size_t first = 0;
  for (std::size_t e = 0; e < r.report.validation_accuracy.size(); ++e)
    if (r.report.validation_accuracy[e] == 1.0) {
      first = e + 1;
      break;
    }
  out.note("(c) sanity dataset validation accuracy " +
           fmt("%.3f", r.report.best_validation_accuracy) +
           (first > 0 ? " first reached at epoch " + std::to_string(first) : ""));
  out.require(first > 0 && first <= 50, "(c) 100% validation accuracy within 50 epochs");
  return out;
}

bool round_trips(const ArgumentationFramework& af) {
  return parse_apx(serialize_apx(af)) == af && parse_tgf(serialize_tgf(af)) == af;
}

// 6. Generator suite.
Outcome generator_suite() {
  Outcome out;
  std::size_t graphs = 0, trips = 0;
  auto trip = [&](const ArgumentationFramework& af) {
    ++graphs;
    trips += round_trips(af) ? 1 : 0;
  };

  bool counts = true;
  for (std::size_t k = 1; k <= 50; ++k) {
    const auto s = gen_sembuster(k);
    counts = counts && s.framework.attack_count() == k * k + 3 * k;
    trip(s.framework);
  }
  out.require(counts, "sembuster attack count k^2+3k");

  Rng rng(601);
  std::size_t acyclic = 0;
  for (int spec = 0; spec < 100; ++spec) {
    const std::size_t n = 5 + rng.uniform_index(146);
    const std::size_t depth = 1 + rng.uniform_index(std::min<std::size_t>(n, 10));
    const auto g = gen_grounded(n, depth, rng.next_u64());
    bool ok = oracle::is_acyclic(g.framework);
    for (const auto& [a, b] : g.framework.attacks())
      ok = ok && std::stoul(g.node_labels.at(a).substr(1)) > std::stoul(g.node_labels.at(b).substr(1));
    acyclic += ok ? 1 : 0;
    trip(g.framework);
  }
  out.note("grd acyclic " + std::to_string(acyclic) + "/100");
  out.require(acyclic == 100, "grd acyclicity");

  std::size_t structured = 0;
  for (int spec = 0; spec < 100; ++spec) {
    const std::size_t comps = 2 + rng.uniform_index(9);
    const std::size_t size = 2 + rng.uniform_index(14);
    const double p_intra = 0.5 * rng.uniform01();
    const double p_inter = 0.2 * rng.uniform01();
    const auto g = gen_scc(comps, size, p_intra, p_inter, rng.next_u64());
    std::size_t count = 0;
    const auto ids = oracle::scc_ids(g.framework, &count);
    std::map<std::size_t, std::set<std::string>> labels;
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t v = 0; v < ids.size(); ++v) {
      labels[ids[v]].insert(g.node_labels.at(v));
      ++sizes[ids[v]];
    }
    bool ok = count == comps;
    for (const auto& [id, l] : labels) ok = ok && l.size() == 1;
    for (const auto& [id, s] : sizes) ok = ok && s == size;
    structured += ok ? 1 : 0;
    trip(g.framework);
  }
  out.note("scc structure " + std::to_string(structured) + "/100");
  out.require(structured == 100, "scc component structure");

  out.note("round trips " + std::to_string(trips) + "/" + std::to_string(graphs));
  out.require(trips == graphs, "APX/TGF round trip");
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. Determinism of pipeline commands.
Outcome determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.require(false, "CLI path not given");
    return out;
  }
  const fs::path root =
      fs::temp_directory_path() / ("argviz_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::string> commands = {
      "generate --domain scc --components 4 --component-size 6 --p-intra 0.2 --p-inter 0.1 "
      "--out {}/g.apx",
      "node-pipeline --domain sembuster --k 30 --dims 16 --out {}/node",
      "tsne --input {}/node.features.csv --perplexity 10 --out {}/again",
      "graph-pipeline --synthetic --graphs-per-domain 6 --min-size 30 --max-size 60 "
      "--epochs 15 --out {}/graph",
  };
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    fs::create_directories(dir);
    for (std::string c : commands) {
      for (auto at = c.find("{}"); at != std::string::npos; at = c.find("{}"))
        c.replace(at, 2, dir.string());
      const std::string line = "ARGVIZ_THREADS=" + std::string(run == 0 ? "1" : "4") + " \"" +
                               cli + "\" " + c + " --seed 7 >/dev/null 2>&1";
      if (std::system(line.c_str()) != 0) out.require(false, "command exited non-zero: " + c);
    }
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "run0")) {
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".svg" && ext != ".apx") continue;
    const fs::path twin = root / "run1" / entry.path().filename();
    ++compared;
    out.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                "identical " + entry.path().filename().string());
  }
  out.note(std::to_string(compared) + " CSV/SVG/APX outputs compared across two runs (1 and 4 threads)");
  out.require(compared >= 8, "expected outputs present");
  fs::remove_all(root);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sembuster node layout separates partitions", sembuster_nodes},
      {"graph-level domain classification and layout", graph_domains},
      {"t-SNE correctness suite", tsne_suite},
      {"HOPE correctness suite", hope_suite},
      {"GCN correctness suite", gcn_suite},
      {"generator suite", generator_suite},
      {"pipeline determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s [%.1fs]\n    %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), seconds, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
