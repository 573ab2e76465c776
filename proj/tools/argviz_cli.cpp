// argviz command line front end. Talks to the library only through the C API.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "argviz/argviz.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(argviz_status status) {
  if (status != ARGVIZ_OK)
    throw CliError(std::string(argviz_status_name(status)) + ": " + argviz_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Framework = Handle<argviz_framework, argviz_framework_free>;
using MatrixH = Handle<argviz_matrix, argviz_matrix_free>;
using LayoutH = Handle<argviz_layout, argviz_layout_free>;
using TableH = Handle<argviz_table, argviz_table_free>;
using Dataset = Handle<argviz_dataset, argviz_dataset_free>;
using Model = Handle<argviz_model, argviz_model_free>;
using ReportH = Handle<argviz_train_report, argviz_train_report_free>;
using NodeResult = Handle<argviz_node_result, argviz_node_result_free>;
using GraphResult = Handle<argviz_graph_result, argviz_graph_result_free>;

std::string take(char* s) {
  std::string out(s);
  argviz_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("io: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---- options ---------------------------------------------------------------

struct Options {
  std::uint64_t seed = 42;
  std::string config;
  std::string out;
  std::string format = "apx";

  std::string input;
  std::string labels;

  // generators
  std::string domain;
  std::size_t k = 0, n = 0, m = 0, k_ring = 0, depth = 0, components = 0, component_size = 0;
  double p = 0, rewire = 0, p_intra = 0, p_inter = 0;

  // HOPE
  std::size_t dims = 64;
  double beta = 0.0;
  bool source_only = false;

  // t-SNE
  argviz_tsne_options tsne{};

  // datasets
  std::string dataset;
  bool synthetic = false;
  std::vector<std::string> domains;
  std::size_t graphs_per_domain = 30, min_size = 30, max_size = 150;

  // GCN
  argviz_train_options train{};
  std::string model;
  std::string load;

  std::size_t knn_k = 0;
  std::string title;
};

void add_common(CLI::App* sub, Options& o, bool graph_format) {
  sub->add_option("--seed", o.seed, "Global seed")->capture_default_str();
  sub->add_option("--config", o.config, "JSON file of option values; flags win")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "Output prefix");
  auto* fmt = sub->add_option("--format", o.format, "Graph format for written graphs")
                  ->check(CLI::IsMember({"apx", "tgf"}))
                  ->capture_default_str();
  if (!graph_format) fmt->description("Graph format (unused by this command)");
}

void add_generator(CLI::App* sub, Options& o, bool required) {
  auto* d = sub->add_option("--domain", o.domain, "sembuster, admbuster, BA, ER, WS, grd, scc")
                ->check(CLI::IsMember({"sembuster", "admbuster", "BA", "ER", "WS", "grd", "scc"},
                                      CLI::ignore_case));
  if (required) d->required();
  sub->add_option("--k", o.k, "Sembuster size");
  sub->add_option("--n", o.n, "Argument count (ER, BA, WS, grd)");
  sub->add_option("--p", o.p, "ER attack probability");
  sub->add_option("--m", o.m, "BA edges per new node");
  sub->add_option("--k-ring", o.k_ring, "WS ring neighbours");
  sub->add_option("--rewire", o.rewire, "WS rewiring probability");
  sub->add_option("--depth", o.depth, "grd layer count");
  sub->add_option("--components", o.components, "scc block count");
  sub->add_option("--component-size", o.component_size, "scc block size");
  sub->add_option("--p-intra", o.p_intra, "scc intra-block probability");
  sub->add_option("--p-inter", o.p_inter, "scc forward cross-block probability");
}

void add_hope(CLI::App* sub, Options& o) {
  sub->add_option("--dims", o.dims, "Embedding dimension per side")->capture_default_str();
  sub->add_option("--beta", o.beta, "Katz decay; 0 selects 0.5/(1+||A||inf)");
  sub->add_flag("--source-only", o.source_only, "Use source vectors only as features");
}

void add_tsne(CLI::App* sub, Options& o) {
  auto& t = o.tsne;
  sub->add_option("--perplexity", t.perplexity)->capture_default_str();
  sub->add_option("--iterations", t.iterations)->capture_default_str();
  sub->add_option("--learning-rate", t.learning_rate, "0 selects max(n/12, 50)");
  sub->add_option("--exaggeration", t.exaggeration_factor)->capture_default_str();
  sub->add_option("--exaggeration-iterations", t.exaggeration_iterations)->capture_default_str();
  sub->add_option("--momentum-early", t.momentum_early)->capture_default_str();
  sub->add_option("--momentum-late", t.momentum_late)->capture_default_str();
  sub->add_option("--momentum-switch", t.momentum_switch_iteration)->capture_default_str();
  sub->add_option("--adaptive-gains", t.adaptive_gains, "1 to enable, 0 to disable")
      ->capture_default_str();
  sub->add_option("--min-gain", t.min_gain)->capture_default_str();
  sub->add_option("--init-stddev", t.init_stddev)->capture_default_str();
  sub->add_option("--kl-interval", t.kl_interval)->capture_default_str();
}

void add_dataset(CLI::App* sub, Options& o) {
  sub->add_option("--dataset", o.dataset, "Directory with one subdirectory per domain")
      ->check(CLI::ExistingDirectory);
  sub->add_flag("--synthetic", o.synthetic, "Generate the synthetic domain corpus");
  sub->add_option("--domains", o.domains, "Synthetic domains")->delimiter(',');
  sub->add_option("--graphs-per-domain", o.graphs_per_domain)->capture_default_str();
  sub->add_option("--min-size", o.min_size)->capture_default_str();
  sub->add_option("--max-size", o.max_size)->capture_default_str();
}

void add_train(CLI::App* sub, Options& o) {
  auto& t = o.train;
  sub->add_option("--hidden", t.hidden)->capture_default_str();
  sub->add_option("--embedding", t.embedding)->capture_default_str();
  sub->add_option("--fc-hidden", t.fc_hidden)->capture_default_str();
  sub->add_option("--epochs", t.max_epochs)->capture_default_str();
  sub->add_option("--patience", t.patience)->capture_default_str();
  sub->add_option("--validation-fraction", t.validation_fraction)->capture_default_str();
  sub->add_option("--lr", t.learning_rate)->capture_default_str();
}

// ---- config files ----------------------------------------------------------

std::string scalar_text(const json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
    return buf;
  }
  throw CliError("config: unsupported value for '" + key + "'");
}

// Turns a flat JSON object into `--key=value` arguments. Keys may use '_' or
// '-'; keys that are not options of the command are rejected.
std::vector<std::string> config_arguments(const std::string& path, CLI::App* sub) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw CliError("config: " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw CliError("config: " + path + ": top level must be an object");
  std::vector<std::string> args;
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || key == "help")
      throw CliError("config: key '" + raw_key + "' is not allowed");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw CliError("config: unknown key '" + raw_key + "'");
    if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += scalar_text(item, raw_key);
      }
      args.push_back("--" + key + "=" + joined);
    } else if (opt->get_type_size() == 0) {
      if (!value.is_boolean()) throw CliError("config: '" + raw_key + "' must be a boolean");
      args.push_back("--" + key + "=" + (value.get<bool>() ? "true" : "false"));
    } else {
      args.push_back("--" + key + "=" + scalar_text(value, raw_key));
    }
  }
  return args;
}

json config_echo(CLI::App* sub) {
  json echo = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    if (opt->get_type_size() == 0) {
      echo[key] = opt->as<bool>();
      continue;
    }
    if (opt->count() == 0 && opt->get_default_str().empty()) continue;
    const std::vector<std::string> values =
        opt->count() > 0 ? opt->results() : std::vector<std::string>{opt->get_default_str()};
    auto typed = [](const std::string& s) -> json {
      char* end = nullptr;
      const double d = std::strtod(s.c_str(), &end);
      if (!s.empty() && end != nullptr && *end == '\0') {
        if (s.find_first_of(".eEnN") == std::string::npos) {
          if (s[0] == '-') return std::stoll(s);
          return std::stoull(s);
        }
        return d;
      }
      return s;
    };
    if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) arr.push_back(typed(v));
      echo[key] = arr;
    } else {
      echo[key] = typed(values.back());
    }
  }
  return echo;
}

// ---- outputs ---------------------------------------------------------------

class Outputs {
 public:
  // Writes through a temporary so that a failed run leaves no partial file.
  void write(const std::string& role, const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw CliError("io: cannot write '" + path + "'");
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) {
        out.close();
        fs::remove(tmp);
        throw CliError("io: cannot write '" + path + "'");
      }
    }
    fs::rename(tmp, path);
    record(role, path);
  }

  void record(const std::string& role, const std::string& path) {
    manifest_.push_back({{"role", role}, {"path", path}});
  }

  const json& manifest() const { return manifest_; }

 private:
  json manifest_ = json::array();
};

struct Stages {
  json timings = json::array();

  template <typename Fn>
  auto run(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      const std::chrono::duration<double> s = std::chrono::steady_clock::now() - start;
      timings.push_back({{"stage", name}, {"seconds", s.count()}});
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto value = fn();
      record();
      return value;
    }
  }
};

struct Context {
  Options& o;
  CLI::App* sub;
  Outputs outputs;
  Stages stages;
  json metrics = json::object();
  json extra = json::object();
};

void require_out(const Options& o) {
  if (o.out.empty()) throw CliError("--out is required");
}

void validate_out_prefix(const std::string& prefix) {
  if (prefix.empty()) return;
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw CliError("io: output directory '" + parent.string() + "' does not exist");
}

void require_file(const std::string& path, const std::string& flag) {
  if (path.empty()) throw CliError(flag + " is required");
  if (!fs::is_regular_file(path)) throw CliError("io: " + flag + " '" + path + "' not found");
}

argviz_format graph_format(const std::string& name) {
  return name == "tgf" ? ARGVIZ_FORMAT_TGF : ARGVIZ_FORMAT_APX;
}

std::size_t thread_budget() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ARGVIZ_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
      throw CliError("ARGVIZ_THREADS must be a positive integer, got '" + std::string(env) + "'");
    threads = std::min<std::size_t>(threads, static_cast<std::size_t>(v));
  }
  return threads;
}

Framework load_framework(const Options& o) {
  argviz_framework* raw = nullptr;
  check(argviz_framework_load(o.input.c_str(), &raw));
  Framework af(raw);
  if (!o.labels.empty()) {
    const std::string text = read_text(o.labels);
    check(argviz_framework_apply_node_labels_csv(af.get(), text.data(), text.size()));
  }
  return af;
}

Framework generate_framework(const Options& o) {
  argviz_generator_spec spec;
  argviz_generator_spec_defaults(&spec);
  spec.domain = o.domain.c_str();
  if (o.k) spec.k = o.k;
  if (o.n) spec.n = o.n;
  if (o.p) spec.p = o.p;
  if (o.m) spec.m = o.m;
  if (o.k_ring) spec.k_ring = o.k_ring;
  if (o.rewire) spec.rewire = o.rewire;
  if (o.depth) spec.depth = o.depth;
  if (o.components) spec.components = o.components;
  if (o.component_size) spec.component_size = o.component_size;
  if (o.p_intra) spec.p_intra = o.p_intra;
  if (o.p_inter) spec.p_inter = o.p_inter;
  spec.seed = argviz_derive_seed(o.seed, "generate");
  argviz_framework* raw = nullptr;
  check(argviz_generate(&spec, &raw));
  return Framework(raw);
}

std::vector<const char*> node_label_array(const argviz_framework* af, bool& complete) {
  const std::size_t n = argviz_framework_argument_count(af);
  std::vector<const char*> labels(n);
  complete = n > 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = argviz_framework_node_label(af, i);
    if (labels[i] == nullptr) {
      labels[i] = "";
      complete = false;
    }
  }
  return labels;
}

std::vector<const char*> argument_names(const argviz_framework* af) {
  std::vector<const char*> out(argviz_framework_argument_count(af));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = argviz_framework_argument(af, i);
  return out;
}

Dataset load_dataset(const Options& o) {
  if (o.synthetic == !o.dataset.empty())
    throw CliError("exactly one of --dataset or --synthetic is required");
  argviz_dataset* raw = nullptr;
  if (o.synthetic) {
    argviz_synthetic_spec spec;
    argviz_synthetic_spec_defaults(&spec);
    std::vector<const char*> names;
    for (const auto& d : o.domains) names.push_back(d.c_str());
    if (!names.empty()) {
      spec.domains = names.data();
      spec.domain_count = names.size();
    }
    spec.graphs_per_domain = o.graphs_per_domain;
    spec.min_size = o.min_size;
    spec.max_size = o.max_size;
    spec.seed = argviz_derive_seed(o.seed, "dataset");
    check(argviz_dataset_synthetic(&spec, &raw));
    return Dataset(raw);
  }
  check(argviz_dataset_create(&raw));
  Dataset dataset(raw);
  std::vector<fs::path> domains;
  for (const auto& entry : fs::directory_iterator(o.dataset))
    if (entry.is_directory()) domains.push_back(entry.path());
  std::sort(domains.begin(), domains.end());
  for (const auto& dir : domains) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".apx" || ext == ".tgf"))
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string label = dir.filename().string();
    for (const auto& file : files) {
      argviz_framework* af = nullptr;
      check(argviz_framework_load(file.string().c_str(), &af));
      Framework holder(af);
      const std::string id = label + "/" + file.filename().string();
      check(argviz_dataset_add(dataset.get(), af, label.c_str(), id.c_str()));
    }
  }
  if (argviz_dataset_size(dataset.get()) == 0)
    throw CliError("dataset '" + o.dataset + "' contains no .apx or .tgf files");
  return dataset;
}

argviz_tsne_options tsne_for(const Options& o, const char* stage) {
  argviz_tsne_options t = o.tsne;
  t.seed = argviz_derive_seed(o.seed, stage);
  return t;
}

argviz_train_options train_for(const Options& o) {
  argviz_train_options t = o.train;
  t.seed = argviz_derive_seed(o.seed, "gcn");
  return t;
}

TableH load_table(const std::string& path) {
  const std::string text = read_text(path);
  argviz_table* raw = nullptr;
  check(argviz_table_parse(text.data(), text.size(), &raw));
  return TableH(raw);
}

std::vector<const char*> table_ids(const argviz_table* t) {
  std::vector<const char*> out(argviz_table_rows(t));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = argviz_table_id(t, i);
  return out;
}

std::vector<const char*> table_labels(const argviz_table* t) {
  std::vector<const char*> out;
  if (!argviz_table_has_labels(t)) return out;
  out.resize(argviz_table_rows(t));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = argviz_table_label(t, i);
  return out;
}

json report_history(const argviz_train_report* r) {
  json h = json::object();
  json loss = json::array(), train = json::array(), val = json::array();
  for (std::size_t e = 0; e < argviz_train_report_epochs(r); ++e) {
    loss.push_back(argviz_train_report_loss(r, e));
    train.push_back(argviz_train_report_train_accuracy(r, e));
    val.push_back(argviz_train_report_validation_accuracy(r, e));
  }
  h["epochs_run"] = argviz_train_report_epochs(r);
  h["best_epoch"] = argviz_train_report_best_epoch(r);
  h["best_validation_accuracy"] = argviz_train_report_best_validation_accuracy(r);
  h["initial_loss"] = argviz_train_report_initial_loss(r);
  h["init_scheme"] = argviz_train_report_init_scheme(r);
  h["seed"] = argviz_train_report_seed(r);
  h["loss"] = loss;
  h["train_accuracy"] = train;
  h["validation_accuracy"] = val;
  return h;
}

// ---- commands --------------------------------------------------------------

// `--out` may name the graph file itself (s.apx) or a prefix.
std::pair<std::string, std::string> graph_target(const Options& o) {
  const fs::path out(o.out);
  const auto ext = out.extension().string();
  if (ext == ".apx" || ext == ".tgf")
    return {o.out, (out.parent_path() / out.stem()).string()};
  return {o.out + "." + o.format, o.out};
}

void cmd_generate(Context& c) {
  Options& o = c.o;
  Framework af = c.stages.run("generate", [&] { return generate_framework(o); });
  const std::size_t args = argviz_framework_argument_count(af.get());
  const std::size_t attacks = argviz_framework_attack_count(af.get());
  c.metrics["arguments"] = args;
  c.metrics["attacks"] = attacks;
  if (o.out.empty()) {
    char* text = nullptr;
    const auto fmt = graph_format(o.format);
    check(argviz_framework_serialize(af.get(), fmt, &text));
    std::cout << take(text);
    std::cerr << "arguments " << args << " attacks " << attacks << "\n";
    return;
  }
  auto [graph_path, prefix] = graph_target(o);
  const fs::path gp(graph_path);
  const auto fmt = graph_format(gp.extension() == ".tgf" ? "tgf" : "apx");
  char* text = nullptr;
  check(argviz_framework_serialize(af.get(), fmt, &text));
  c.outputs.write("graph", graph_path, take(text));
  if (argviz_framework_node_label_count(af.get()) > 0) {
    check(argviz_framework_node_labels_csv(af.get(), &text));
    c.outputs.write("node_labels", prefix + ".labels.csv", take(text));
  }
  c.extra["report_prefix"] = prefix;
  std::cout << "arguments " << args << " attacks " << attacks << "\n";
}

void cmd_ingest(Context& c) {
  Options& o = c.o;
  Framework af = c.stages.run("parse", [&] { return load_framework(o); });
  const std::size_t args = argviz_framework_argument_count(af.get());
  const std::size_t attacks = argviz_framework_attack_count(af.get());
  std::size_t self = 0;
  for (std::size_t i = 0; i < attacks; ++i) {
    std::size_t a = 0, b = 0;
    check(argviz_framework_attack(af.get(), i, &a, &b));
    if (a == b) ++self;
  }
  c.metrics["arguments"] = args;
  c.metrics["attacks"] = attacks;
  c.metrics["self_attacks"] = self;
  c.metrics["labelled_arguments"] = argviz_framework_node_label_count(af.get());
  if (!o.out.empty()) {
    char* text = nullptr;
    check(argviz_framework_serialize(af.get(), graph_format(o.format), &text));
    c.outputs.write("graph", o.out + "." + o.format, take(text));
  }
  std::cout << "arguments " << args << " attacks " << attacks << "\n";
}

void cmd_embed_hope(Context& c) {
  Options& o = c.o;
  require_out(o);
  Framework af = c.stages.run("parse", [&] { return load_framework(o); });
  argviz_hope_options h;
  argviz_hope_options_defaults(&h);
  h.dims = o.dims;
  h.beta = o.beta;
  h.source_only = o.source_only ? 1 : 0;
  h.seed = argviz_derive_seed(o.seed, "hope");
  double beta = 0.0;
  MatrixH features = c.stages.run("hope", [&] {
    argviz_matrix* raw = nullptr;
    check(argviz_hope_features(af.get(), &h, &raw, &beta));
    return MatrixH(raw);
  });
  c.metrics["beta"] = beta;
  c.metrics["feature_columns"] = argviz_matrix_cols(features.get());
  bool complete = false;
  const auto labels = node_label_array(af.get(), complete);
  const auto ids = argument_names(af.get());
  char* text = nullptr;
  check(argviz_export_features_csv(features.get(),
                                   argviz_framework_node_label_count(af.get()) ? labels.data()
                                                                               : nullptr,
                                   ids.data(), &text));
  c.outputs.write("features_csv", o.out + ".features.csv", take(text));
}

void cmd_tsne(Context& c) {
  Options& o = c.o;
  require_out(o);
  TableH table = load_table(o.input);
  const auto t = tsne_for(o, "tsne");
  LayoutH layout = c.stages.run("tsne", [&] {
    argviz_layout* raw = nullptr;
    check(argviz_tsne(argviz_table_values(table.get()), &t, &raw));
    return LayoutH(raw);
  });
  c.metrics["final_kl"] = argviz_layout_final_kl(layout.get());
  const auto ids = table_ids(table.get());
  const auto labels = table_labels(table.get());
  char* text = nullptr;
  check(argviz_export_layout_csv(argviz_layout_points(layout.get()),
                                 labels.empty() ? nullptr : labels.data(), ids.data(), &text));
  c.outputs.write("layout_csv", o.out + ".layout.csv", take(text));
  check(argviz_layout_kl_csv(layout.get(), &text));
  c.outputs.write("kl_csv", o.out + ".kl.csv", take(text));
}

void cmd_train_gcn(Context& c) {
  Options& o = c.o;
  require_out(o);
  Dataset dataset = c.stages.run("dataset", [&] { return load_dataset(o); });
  const auto t = train_for(o);
  argviz_model* raw_model = nullptr;
  argviz_train_report* raw_report = nullptr;
  c.stages.run("train", [&] { check(argviz_gcn_train(dataset.get(), &t, &raw_model, &raw_report)); });
  Model model(raw_model);
  ReportH report(raw_report);
  c.metrics["validation_accuracy"] = argviz_train_report_best_validation_accuracy(report.get());
  c.extra["training"] = report_history(report.get());
  const std::string path = o.out + ".gcn";
  check(argviz_gcn_save(model.get(), path.c_str()));
  c.outputs.record("checkpoint", path);
  std::cout << "validation accuracy "
            << argviz_train_report_best_validation_accuracy(report.get()) << "\n";
}

void cmd_embed_gcn(Context& c) {
  Options& o = c.o;
  require_out(o);
  require_file(o.model, "--model");
  argviz_model* raw = nullptr;
  check(argviz_gcn_load(o.model.c_str(), &raw));
  Model model(raw);
  Dataset dataset = c.stages.run("dataset", [&] { return load_dataset(o); });
  MatrixH emb = c.stages.run("embed", [&] {
    argviz_matrix* m = nullptr;
    check(argviz_gcn_embed(model.get(), dataset.get(), thread_budget(), &m));
    return MatrixH(m);
  });
  double acc = 0.0;
  check(argviz_gcn_accuracy(model.get(), dataset.get(), &acc));
  c.metrics["accuracy"] = acc;
  const std::size_t n = argviz_dataset_size(dataset.get());
  std::vector<const char*> ids(n), labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = argviz_dataset_id(dataset.get(), i);
    labels[i] = argviz_dataset_label(dataset.get(), i);
  }
  char* text = nullptr;
  check(argviz_export_features_csv(emb.get(), labels.data(), ids.data(), &text));
  c.outputs.write("embeddings_csv", o.out + ".embeddings.csv", take(text));
}

void cmd_plot(Context& c) {
  Options& o = c.o;
  require_out(o);
  TableH table = load_table(o.input);
  const auto labels = table_labels(table.get());
  char* text = nullptr;
  c.stages.run("render", [&] {
    check(argviz_render_svg(argviz_table_values(table.get()),
                            labels.empty() ? nullptr : labels.data(), o.title.c_str(), &text));
  });
  c.outputs.write("svg", o.out + ".svg", take(text));
}

void cmd_metrics(Context& c) {
  Options& o = c.o;
  TableH table = load_table(o.input);
  const auto labels = table_labels(table.get());
  if (labels.empty()) throw CliError("metrics: '" + o.input + "' has no label column");
  const argviz_matrix* points = argviz_table_values(table.get());
  double knn = 0.0, sil = 0.0;
  c.stages.run("metrics", [&] {
    check(argviz_knn_agreement(points, labels.data(), o.knn_k, &knn));
    check(argviz_silhouette(points, labels.data(), &sil));
  });
  c.metrics["knn_agreement"] = knn;
  c.metrics["knn_k"] = o.knn_k;
  c.metrics["silhouette"] = sil;
  std::cout << "knn_agreement " << knn << " silhouette " << sil << "\n";
}

void cmd_node_pipeline(Context& c) {
  Options& o = c.o;
  require_out(o);
  if (o.input.empty() == o.domain.empty())
    throw CliError("exactly one of --input or --domain is required");
  Framework af = c.stages.run("load", [&] {
    return o.input.empty() ? generate_framework(o) : load_framework(o);
  });
  argviz_node_pipeline_options p;
  argviz_node_pipeline_options_defaults(&p);
  p.hope.dims = o.dims;
  p.hope.beta = o.beta;
  p.hope.source_only = o.source_only ? 1 : 0;
  p.tsne = o.tsne;
  p.knn_k = o.knn_k;
  p.title = o.title.c_str();
  p.seed = o.seed;
  argviz_node_result* raw = nullptr;
  check(argviz_node_pipeline(af.get(), &p, &raw));
  NodeResult r(raw);
  for (std::size_t i = 0; i < argviz_node_result_stage_count(r.get()); ++i)
    c.stages.timings.push_back({{"stage", argviz_node_result_stage_name(r.get(), i)},
                                {"seconds", argviz_node_result_stage_seconds(r.get(), i)}});
  c.metrics["beta"] = argviz_node_result_beta(r.get());
  c.metrics["final_kl"] = argviz_node_result_final_kl(r.get());
  double knn = 0.0, sil = 0.0;
  if (argviz_node_result_metrics(r.get(), &knn, &sil)) {
    c.metrics["knn_agreement"] = knn;
    c.metrics["knn_k"] = o.knn_k;
    c.metrics["silhouette"] = sil;
    std::cout << "knn_agreement " << knn << " silhouette " << sil << "\n";
  }
  c.outputs.write("svg", o.out + ".svg", argviz_node_result_output(r.get(), ARGVIZ_OUTPUT_SVG));
  c.outputs.write("layout_csv", o.out + ".layout.csv",
                  argviz_node_result_output(r.get(), ARGVIZ_OUTPUT_LAYOUT_CSV));
  c.outputs.write("kl_csv", o.out + ".kl.csv",
                  argviz_node_result_output(r.get(), ARGVIZ_OUTPUT_KL_CSV));
  c.outputs.write("features_csv", o.out + ".features.csv",
                  argviz_node_result_output(r.get(), ARGVIZ_OUTPUT_FEATURES_CSV));
}

void cmd_graph_pipeline(Context& c) {
  Options& o = c.o;
  require_out(o);
  Model loaded;
  if (!o.load.empty()) {
    require_file(o.load, "--load");
    argviz_model* raw = nullptr;
    check(argviz_gcn_load(o.load.c_str(), &raw));
    loaded.reset(raw);
  }
  Dataset dataset = c.stages.run("dataset", [&] { return load_dataset(o); });
  argviz_graph_pipeline_options p;
  argviz_graph_pipeline_options_defaults(&p);
  p.train = o.train;
  p.tsne = o.tsne;
  p.knn_k = o.knn_k;
  p.threads = thread_budget();
  p.title = o.title.c_str();
  p.seed = o.seed;
  argviz_graph_result* raw = nullptr;
  check(argviz_graph_pipeline(dataset.get(), &p, loaded.get(), &raw));
  GraphResult r(raw);
  for (std::size_t i = 0; i < argviz_graph_result_stage_count(r.get()); ++i)
    c.stages.timings.push_back({{"stage", argviz_graph_result_stage_name(r.get(), i)},
                                {"seconds", argviz_graph_result_stage_seconds(r.get(), i)}});
  json warnings = json::array();
  for (std::size_t i = 0; i < argviz_graph_result_warning_count(r.get()); ++i) {
    warnings.push_back(argviz_graph_result_warning(r.get(), i));
    std::cerr << "warning: " << argviz_graph_result_warning(r.get(), i) << "\n";
  }
  c.extra["warnings"] = warnings;
  double knn = 0.0, sil = 0.0;
  argviz_graph_result_metrics(r.get(), &knn, &sil);
  const double acc = argviz_graph_result_validation_accuracy(r.get());
  c.metrics["validation_accuracy"] = acc;
  c.metrics["knn_agreement"] = knn;
  c.metrics["knn_k"] = o.knn_k;
  c.metrics["silhouette"] = sil;
  c.metrics["final_kl"] = argviz_graph_result_final_kl(r.get());
  if (const argviz_train_report* report = argviz_graph_result_report(r.get()))
    c.extra["training"] = report_history(report);
  if (!loaded) {
    const std::string path = o.out + ".gcn";
    check(argviz_gcn_save(argviz_graph_result_model(r.get()), path.c_str()));
    c.outputs.record("checkpoint", path);
  }
  c.outputs.write("svg", o.out + ".svg", argviz_graph_result_output(r.get(), ARGVIZ_OUTPUT_SVG));
  c.outputs.write("layout_csv", o.out + ".layout.csv",
                  argviz_graph_result_output(r.get(), ARGVIZ_OUTPUT_LAYOUT_CSV));
  c.outputs.write("kl_csv", o.out + ".kl.csv",
                  argviz_graph_result_output(r.get(), ARGVIZ_OUTPUT_KL_CSV));
  c.outputs.write("embeddings_csv", o.out + ".embeddings.csv",
                  argviz_graph_result_output(r.get(), ARGVIZ_OUTPUT_FEATURES_CSV));
  std::cout << "validation_accuracy " << acc << " knn_agreement " << knn << " silhouette "
            << sil << "\n";
}

struct Spec {
  const char* name;
  const char* help;
  void (*run)(Context&);
};

}  // namespace

int main(int argc, char** argv) {
  Options o;
  argviz_tsne_options_defaults(&o.tsne);
  argviz_train_options_defaults(&o.train);

  CLI::App app{"argviz: embeddings and plots of abstract argumentation frameworks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", argviz_version());
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  const Spec specs[] = {
      {"generate", "Generate a framework from a domain generator", cmd_generate},
      {"ingest", "Parse, validate and normalise an APX/TGF file", cmd_ingest},
      {"embed-hope", "HOPE node features for a framework", cmd_embed_hope},
      {"tsne", "t-SNE layout of a feature CSV", cmd_tsne},
      {"train-gcn", "Train the graph classification network", cmd_train_gcn},
      {"embed-gcn", "Graph embeddings from a trained network", cmd_embed_gcn},
      {"plot", "Render a layout CSV as SVG", cmd_plot},
      {"metrics", "kNN agreement and silhouette of a layout CSV", cmd_metrics},
      {"node-pipeline", "HOPE, t-SNE, plot and metrics for one framework", cmd_node_pipeline},
      {"graph-pipeline", "GCN, t-SNE, plot and metrics for a graph corpus", cmd_graph_pipeline},
  };

  std::vector<std::pair<CLI::App*, const Spec*>> subs;
  for (const Spec& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    const std::string name = spec.name;
    add_common(sub, o, name == "generate" || name == "ingest");
    if (name == "generate") add_generator(sub, o, true);
    if (name == "ingest" || name == "embed-hope" || name == "node-pipeline") {
      auto* in = sub->add_option("--input", o.input, "APX or TGF file")->check(CLI::ExistingFile);
      if (name != "node-pipeline") in->required();
      sub->add_option("--labels", o.labels, "Node label CSV (id,label)")->check(CLI::ExistingFile);
    }
    if (name == "tsne" || name == "plot" || name == "metrics")
      sub->add_option("--input", o.input, "CSV table")->required()->check(CLI::ExistingFile);
    if (name == "embed-hope" || name == "node-pipeline") add_hope(sub, o);
    if (name == "node-pipeline") add_generator(sub, o, false);
    if (name == "tsne" || name == "node-pipeline" || name == "graph-pipeline") add_tsne(sub, o);
    if (name == "train-gcn" || name == "embed-gcn" || name == "graph-pipeline")
      add_dataset(sub, o);
    if (name == "train-gcn" || name == "graph-pipeline") add_train(sub, o);
    if (name == "embed-gcn")
      sub->add_option("--model", o.model, "Checkpoint file")->required();
    if (name == "graph-pipeline")
      sub->add_option("--load", o.load, "Checkpoint to use instead of training");
    if (name == "metrics" || name == "node-pipeline" || name == "graph-pipeline")
      sub->add_option("--knn-k", o.knn_k, "Neighbours for kNN agreement");
    if (name == "plot" || name == "node-pipeline" || name == "graph-pipeline")
      sub->add_option("--title", o.title, "Plot title");
    subs.emplace_back(sub, &spec);
  }

  // Config values become leading arguments, so explicit flags (later, with
  // TakeLast) override them.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty()) {
      CLI::App* sub = nullptr;
      for (auto& [s, spec] : subs)
        if (args[0] == spec->name) sub = s;
      std::optional<std::string> config;
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
      }
      if (sub != nullptr && config) {
        auto extra = config_arguments(*config, sub);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
      }
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (auto& [sub, spec] : subs) {
    if (!sub->parsed()) continue;
    const std::string name = spec->name;
    if (o.knn_k == 0) o.knn_k = name == "graph-pipeline" ? 5 : 10;
    Context c{o, sub, {}, {}, json::object(), json::object()};
    try {
      validate_out_prefix(o.out);
      spec->run(c);
      std::string prefix = o.out;
      if (c.extra.contains("report_prefix")) {
        prefix = c.extra["report_prefix"].get<std::string>();
        c.extra.erase("report_prefix");
      }
      if (!prefix.empty()) {
        json report;
        report["command"] = name;
        report["config"] = config_echo(sub);
        report["stages"] = c.stages.timings;
        report["metrics"] = c.metrics;
        for (auto& [key, value] : c.extra.items()) report[key] = value;
        const std::string path = prefix + ".report.json";
        c.outputs.record("report", path);
        report["outputs"] = c.outputs.manifest();
        Outputs writer;
        writer.write("report", path, report.dump(2) + "\n");
      }
    } catch (const CliError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }
  return 1;
}
