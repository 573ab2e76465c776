#include "generators/generators.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "core/error.hpp"
#include "core/random.hpp"

namespace argviz {

namespace {

std::vector<std::string> numbered_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
  return names;
}

void require_probability(double p, const char* what) {
  require(p >= 0.0 && p <= 1.0,
          std::string(what) + " must lie in [0,1], got " + std::to_string(p));
}

using Edge = std::pair<std::size_t, std::size_t>;

std::vector<Attack> orient(const std::vector<Edge>& edges, Rng& rng) {
  std::vector<Attack> attacks;
  attacks.reserve(edges.size());
  for (const auto& [u, v] : edges)
    attacks.push_back(rng.bernoulli(0.5) ? Attack{u, v} : Attack{v, u});
  return attacks;
}

LabeledFramework unlabeled(std::vector<std::string> names, std::vector<Attack> attacks,
                           Domain domain) {
  return {ArgumentationFramework(std::move(names), std::move(attacks)),
          std::string(domain_id(domain)),
          {}};
}

}  // namespace

std::string_view domain_id(Domain domain) {
  switch (domain) {
    case Domain::sembuster: return "sembuster";
    case Domain::admbuster: return "admbuster";
    case Domain::barabasi_albert: return "BA";
    case Domain::erdos_renyi: return "ER";
    case Domain::watts_strogatz: return "WS";
    case Domain::grounded: return "grd";
    case Domain::scc: return "scc";
  }
  return "unknown";
}

std::optional<Domain> parse_domain(std::string_view id) {
  std::string lower(id);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const Domain d : {Domain::sembuster, Domain::admbuster, Domain::barabasi_albert,
                         Domain::erdos_renyi, Domain::watts_strogatz, Domain::grounded,
                         Domain::scc}) {
    std::string candidate(domain_id(d));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (candidate == lower) return d;
  }
  return std::nullopt;
}

LabeledFramework gen_sembuster(std::size_t k) {
  require(k >= 1, "sembuster: k must be at least 1");
  const auto a = [](std::size_t i) { return i; };
  const auto b = [k](std::size_t i) { return k + i; };
  const auto c = [k](std::size_t i) { return 2 * k + i; };

  std::vector<std::string> names(3 * k);
  LabeledFramework out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string suffix = std::to_string(i + 1);
    names[a(i)] = "a" + suffix;
    names[b(i)] = "b" + suffix;
    names[c(i)] = "c" + suffix;
    out.node_labels[a(i)] = "A";
    out.node_labels[b(i)] = "B";
    out.node_labels[c(i)] = "C";
  }

  std::vector<Attack> attacks;
  attacks.reserve(k * k + 3 * k);
  for (std::size_t i = 0; i < k; ++i) {
    attacks.emplace_back(a(i), a(i));
    for (std::size_t j = 0; j <= i; ++j) attacks.emplace_back(b(i), a(j));
    for (std::size_t j = 0; j < i; ++j) attacks.emplace_back(b(i), b(j));
    attacks.emplace_back(b(i), c(i));
    attacks.emplace_back(c(i), b(i));
  }
  out.framework = ArgumentationFramework(std::move(names), std::move(attacks));
  out.graph_label = std::string(domain_id(Domain::sembuster));
  return out;
}

LabeledFramework gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require(n >= 1, "ER: n must be at least 1");
  require_probability(p, "ER: p");
  Rng rng(seed);
  std::vector<Attack> attacks;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.bernoulli(p)) attacks.emplace_back(i, j);
  return unlabeled(numbered_names(n), std::move(attacks), Domain::erdos_renyi);
}

LabeledFramework gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(m >= 1 && m < n, "BA: requires 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Each node appears once per incident edge, so a uniform draw from this list
  // is a degree-proportional draw.
  std::vector<std::size_t> endpoints;
  for (std::size_t u = 0; u <= m; ++u)
    for (std::size_t v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  for (std::size_t v = m + 1; v < n; ++v) {
    std::vector<std::size_t> targets;
    while (targets.size() < m) {
      const std::size_t t = endpoints[rng.uniform_index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (const std::size_t t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return unlabeled(numbered_names(n), orient(edges, rng), Domain::barabasi_albert);
}

LabeledFramework gen_watts_strogatz(std::size_t n, std::size_t k_ring, double rewire,
                                    std::uint64_t seed) {
  require(k_ring >= 2 && k_ring % 2 == 0, "WS: k_ring must be a positive even number");
  require(k_ring < n, "WS: k_ring must be smaller than n");
  require_probability(rewire, "WS: rewiring probability");
  Rng rng(seed);

  std::vector<std::set<std::size_t>> neighbours(n);
  std::vector<Edge> edges;
  const std::size_t half = k_ring / 2;
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t t = (i + j) % n;
      edges.emplace_back(i, t);
      neighbours[i].insert(t);
      neighbours[t].insert(i);
    }

  for (auto& [u, v] : edges) {
    if (!rng.bernoulli(rewire)) continue;
    if (neighbours[u].size() + 1 >= n) continue;  // u already touches everyone
    std::size_t w = u;
    while (w == u || neighbours[u].count(w) != 0) w = rng.uniform_index(n);
    neighbours[u].erase(v);
    neighbours[v].erase(u);
    neighbours[u].insert(w);
    neighbours[w].insert(u);
    v = w;
  }
  return unlabeled(numbered_names(n), orient(edges, rng), Domain::watts_strogatz);
}

LabeledFramework gen_grounded(std::size_t n, std::size_t depth, std::uint64_t seed) {
  require(n >= 1 && depth >= 1, "grd: n and depth must be at least 1");
  require(depth <= n, "grd: depth must not exceed n");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> layers(depth);
  std::vector<std::size_t> layer_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t layer = i < depth ? i : rng.uniform_index(depth);
    layer_of[i] = layer;
    layers[layer].push_back(i);
  }

  std::vector<Attack> attacks;
  for (std::size_t layer = 1; layer < depth; ++layer) {
    for (const std::size_t attacker : layers[layer]) {
      std::vector<std::size_t> pool = layers[layer - 1];
      const std::size_t max_targets = std::min<std::size_t>(3, pool.size());
      const auto count = static_cast<std::size_t>(
          rng.uniform_int(1, static_cast<std::int64_t>(max_targets)));
      for (std::size_t t = 0; t < count; ++t) {
        const std::size_t pick = t + rng.uniform_index(pool.size() - t);
        std::swap(pool[t], pool[pick]);
        attacks.emplace_back(attacker, pool[t]);
      }
    }
  }

  LabeledFramework out = unlabeled(numbered_names(n), std::move(attacks), Domain::grounded);
  for (std::size_t i = 0; i < n; ++i) out.node_labels[i] = "L" + std::to_string(layer_of[i]);
  return out;
}

LabeledFramework gen_scc(std::size_t components, std::size_t component_size,
                         double p_intra, double p_inter, std::uint64_t seed) {
  require(components >= 2, "scc: at least 2 components required");
  require(component_size >= 2, "scc: component size must be at least 2");
  require_probability(p_intra, "scc: p_intra");
  require_probability(p_inter, "scc: p_inter");
  Rng rng(seed);
  const std::size_t n = components * component_size;
  const auto member = [component_size](std::size_t block, std::size_t i) {
    return block * component_size + i;
  };

  std::vector<Attack> attacks;
  for (std::size_t block = 0; block < components; ++block) {
    for (std::size_t i = 0; i < component_size; ++i)
      attacks.emplace_back(member(block, i), member(block, (i + 1) % component_size));
    for (std::size_t i = 0; i < component_size; ++i)
      for (std::size_t j = 0; j < component_size; ++j) {
        if (i == j || j == (i + 1) % component_size) continue;
        if (rng.bernoulli(p_intra)) attacks.emplace_back(member(block, i), member(block, j));
      }
  }
  for (std::size_t from = 0; from < components; ++from)
    for (std::size_t to = from + 1; to < components; ++to)
      for (std::size_t i = 0; i < component_size; ++i)
        for (std::size_t j = 0; j < component_size; ++j)
          if (rng.bernoulli(p_inter)) attacks.emplace_back(member(from, i), member(to, j));

  LabeledFramework out = unlabeled(numbered_names(n), std::move(attacks), Domain::scc);
  for (std::size_t i = 0; i < n; ++i)
    out.node_labels[i] = "S" + std::to_string(i / component_size);
  return out;
}

LabeledFramework gen_admbuster(std::size_t k) {
  require(k >= 1, "admbuster: k must be at least 1");
  fail(ErrorKind::unavailable,
       "admbuster: generator unavailable; load AdmBuster instances from APX/TGF files");
}

LabeledFramework generate(const GeneratorSpec& spec) {
  switch (spec.domain) {
    case Domain::sembuster: return gen_sembuster(spec.k);
    case Domain::admbuster: return gen_admbuster(spec.k);
    case Domain::erdos_renyi: return gen_erdos_renyi(spec.n, spec.p, spec.seed);
    case Domain::barabasi_albert: return gen_barabasi_albert(spec.n, spec.m, spec.seed);
    case Domain::watts_strogatz:
      return gen_watts_strogatz(spec.n, spec.k_ring, spec.rewire, spec.seed);
    case Domain::grounded: return gen_grounded(spec.n, spec.depth, spec.seed);
    case Domain::scc:
      return gen_scc(spec.components, spec.component_size, spec.p_intra, spec.p_inter,
                     spec.seed);
  }
  fail(ErrorKind::invalid_argument, "unknown domain");
}

std::vector<LabeledFramework> synthetic_domain_dataset(const SyntheticDatasetSpec& spec) {
  require(spec.graphs_per_domain >= 1, "dataset: graphs_per_domain must be positive");
  require(spec.min_size >= 6 && spec.min_size <= spec.max_size,
          "dataset: size range must satisfy 6 <= min_size <= max_size");

  std::vector<LabeledFramework> out;
  out.reserve(spec.domains.size() * spec.graphs_per_domain);
  for (const Domain domain : spec.domains) {
    for (std::size_t g = 0; g < spec.graphs_per_domain; ++g) {
      const std::string stage = std::string(domain_id(domain)) + "/" + std::to_string(g);
      Rng rng(derive_seed(spec.seed, stage));
      const auto draw = [&rng](std::size_t lo, std::size_t hi) {
        return static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
      };

      GeneratorSpec g_spec;
      g_spec.domain = domain;
      g_spec.seed = rng.next_u64();
      g_spec.n = draw(spec.min_size, spec.max_size);
      switch (domain) {
        case Domain::sembuster:
        case Domain::admbuster:
          g_spec.k = draw((spec.min_size + 2) / 3, spec.max_size / 3);
          break;
        case Domain::erdos_renyi: g_spec.p = rng.uniform(0.05, 0.15); break;
        case Domain::barabasi_albert: g_spec.m = draw(1, 3); break;
        case Domain::watts_strogatz:
          g_spec.k_ring = 2 * draw(1, 3);
          g_spec.rewire = rng.uniform(0.05, 0.3);
          break;
        case Domain::grounded: g_spec.depth = draw(2, 6); break;
        case Domain::scc:
          g_spec.components = draw(2, 5);
          g_spec.component_size =
              draw(std::max<std::size_t>(2, (spec.min_size + g_spec.components - 1) /
                                                g_spec.components),
                   spec.max_size / g_spec.components);
          g_spec.p_intra = rng.uniform(0.05, 0.2);
          g_spec.p_inter = rng.uniform(0.0, 0.05);
          break;
      }
      LabeledFramework graph = generate(g_spec);
      graph.graph_label = std::string(domain_id(domain));
      out.push_back(std::move(graph));
    }
  }
  return out;
}

}  // namespace argviz
