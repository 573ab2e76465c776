#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graph/framework.hpp"

namespace argviz {

// Synthetic argumentation domains. Identifiers follow the competition domain
// names: sembuster, admbuster, BA, ER, WS, grd, scc.
enum class Domain { sembuster, admbuster, barabasi_albert, erdos_renyi, watts_strogatz, grounded, scc };

std::string_view domain_id(Domain domain);
// Case-insensitive; nullopt for unknown identifiers.
std::optional<Domain> parse_domain(std::string_view id);

struct GeneratorSpec {
  Domain domain = Domain::sembuster;
  std::size_t k = 1;                 // sembuster / admbuster size
  std::size_t n = 1;                 // ER, BA, WS, grd argument count
  double p = 0.1;                    // ER edge probability
  std::size_t m = 1;                 // BA edges per new node
  std::size_t k_ring = 2;            // WS ring neighbours (even)
  double rewire = 0.1;               // WS rewiring probability
  std::size_t depth = 1;             // grd layer count
  std::size_t components = 2;        // scc block count
  std::size_t component_size = 2;    // scc block size
  double p_intra = 0.0;              // scc extra edge probability within blocks
  double p_inter = 0.0;              // scc forward edge probability across blocks
  std::uint64_t seed = 0;
};

// Arguments a1..ak, b1..bk, c1..ck labelled A, B, C.
// Attacks: (aᵢ,aᵢ); (bᵢ,aⱼ) for i ≥ j; (bᵢ,bⱼ) for i > j; (bᵢ,cᵢ); (cᵢ,bᵢ).
LabeledFramework gen_sembuster(std::size_t k);

// Every ordered pair (i, j), i ≠ j, row-major, is an attack when bernoulli(p).
LabeledFramework gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// Preferential attachment from an (m+1)-clique; each new node picks m distinct
// targets with probability proportional to degree. Undirected edges are then
// oriented in creation order by one fair coin flip each.
LabeledFramework gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

// Ring lattice with k_ring neighbours, each lattice edge (i, i+j) rewired to a
// uniformly chosen non-neighbour with probability `rewire`, then oriented by
// coin flips in lattice order.
LabeledFramework gen_watts_strogatz(std::size_t n, std::size_t k_ring, double rewire,
                                    std::uint64_t seed);

// Layered acyclic framework: arguments 0..depth-1 seed one layer each, the rest
// pick a layer uniformly. Each argument in layer ℓ ≥ 1 attacks between 1 and 3
// distinct arguments of layer ℓ-1. Node labels are the layer ids L0, L1, ...
LabeledFramework gen_grounded(std::size_t n, std::size_t depth, std::uint64_t seed);

// Blocks of `component_size` arguments, each a directed cycle plus extra
// intra-block attacks with probability p_intra; cross-block attacks only go
// from lower to higher block with probability p_inter. Node labels S0, S1, ...
LabeledFramework gen_scc(std::size_t components, std::size_t component_size,
                         double p_intra, double p_inter, std::uint64_t seed);

// Always throws ErrorKind::unavailable: the construction is not bundled, and
// AdmBuster frameworks enter through APX/TGF ingestion.
LabeledFramework gen_admbuster(std::size_t k);

// Validates the spec for its domain and dispatches.
LabeledFramework generate(const GeneratorSpec& spec);

struct SyntheticDatasetSpec {
  std::vector<Domain> domains = {Domain::sembuster,       Domain::scc,
                                 Domain::grounded,        Domain::erdos_renyi,
                                 Domain::barabasi_albert, Domain::watts_strogatz};
  std::size_t graphs_per_domain = 30;
  std::size_t min_size = 30;
  std::size_t max_size = 150;
  std::uint64_t seed = 0;
};

// Balanced labelled corpus for graph-level classification. Each graph gets its
// own derived seed and randomly drawn domain parameters; graph_label is the
// domain id and argument counts fall within [min_size, max_size].
std::vector<LabeledFramework> synthetic_domain_dataset(const SyntheticDatasetSpec& spec);

}  // namespace argviz
