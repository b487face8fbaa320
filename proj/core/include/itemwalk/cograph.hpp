#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itemwalk/corpus.hpp"

namespace itemwalk {

// Which positions of a basket count as co-occurring.
//   kAllPairs: every unordered pair of positions (order-free semantics).
//   kAdjacent: consecutive positions only.
//   kWindowed: positions at distance <= window.
enum class PairingMode { kAllPairs, kAdjacent, kWindowed };

struct Pairing {
  PairingMode mode = PairingMode::kAllPairs;
  uint32_t window = 0;  // only used by kWindowed

  static Pairing all_pairs() { return {PairingMode::kAllPairs, 0}; }
  static Pairing adjacent() { return {PairingMode::kAdjacent, 0}; }
  static Pairing windowed(uint32_t w) { return {PairingMode::kWindowed, w}; }
};

struct WeightedEdge {
  uint32_t v = 0;
  uint32_t x = 0;
  uint64_t weight = 0;
};

// Undirected weighted item co-occurrence graph in compact adjacency form.
// Per node the neighbor run is sorted by index and carries a cumulative
// weight array, so weighted neighbor sampling and adjacency tests are both
// O(log degree). Immutable once built; safe to share across threads.
class CoGraph {
 public:
  uint32_t num_nodes() const {
    return offsets_.empty() ? 0 : static_cast<uint32_t>(offsets_.size() - 1);
  }
  uint64_t num_edges() const { return neighbors_.size() / 2; }  // unordered
  uint64_t total_edge_weight() const { return total_edge_weight_; }
  uint64_t total_count() const { return total_count_; }  // N

  uint64_t node_count(uint32_t v) const;  // n_v
  double node_weight(uint32_t v) const;   // PW_v = n_v / N

  uint32_t degree(uint32_t v) const {
    return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  std::span<const uint32_t> neighbors(uint32_t v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const uint64_t> edge_weights(uint32_t v) const {
    return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  // Strictly increasing cumulative edge weights of v's run; the last entry
  // equals weighted_degree(v).
  std::span<const double> prefix_weights(uint32_t v) const {
    return {prefix_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  double weighted_degree(uint32_t v) const {
    return degree(v) == 0 ? 0.0 : prefix_weights(v).back();
  }

  bool has_edge(uint32_t v, uint32_t x) const;
  std::optional<uint64_t> edge_weight(uint32_t v, uint32_t x) const;

  // Builds the CSR layout from unordered edges (v < x, no self-loops, no
  // duplicates) and per-node occurrence counts. Also the loader's entry point.
  static CoGraph from_edges(uint32_t num_nodes,
                            std::span<const WeightedEdge> edges,
                            std::vector<uint64_t> node_counts);

 private:
  std::vector<uint64_t> offsets_;   // size num_nodes + 1
  std::vector<uint32_t> neighbors_; // sorted within each run
  std::vector<uint64_t> weights_;   // W_vx, exact counts
  std::vector<double> prefix_;      // per-run cumulative weights
  std::vector<uint64_t> node_counts_;
  uint64_t total_count_ = 0;
  uint64_t total_edge_weight_ = 0;
};

// Counts co-occurrences per Pairing over all baskets. A pair of positions
// holding the same item contributes nothing (no self-loops).
CoGraph build_graph(const InteractionCorpus& corpus, Pairing pairing = {});

// P(x | v) = W_vx / sum_y W_vy, aligned with neighbors(v). Empty for
// isolated nodes.
std::vector<double> first_order_step_distribution(const CoGraph& graph,
                                                  uint32_t v);

// Edge dump: `v<TAB>x<TAB>W_vx` with index(v) < index(x), tokens from the
// node sidecar `token<TAB>n_v` whose line order defines the node indices.
void save_graph(const CoGraph& graph, const Vocabulary& vocab,
                const std::string& edges_path, const std::string& nodes_path);
std::pair<CoGraph, Vocabulary> load_graph(const std::string& edges_path,
                                          const std::string& nodes_path);

}  // namespace itemwalk
