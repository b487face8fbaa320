#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itemwalk/cograph.hpp"
#include "itemwalk/rng.hpp"

namespace itemwalk {

struct WalkConfig {
  uint64_t total_walks = 10000;   // walk budget shared by all nodes
  uint32_t walk_length = 80;      // target tokens per walk
  double p = 1.0;                 // return parameter
  double q = 0.001;               // in-out parameter
  uint64_t seed = 1;
  uint32_t min_walks_per_node = 0;
  uint32_t threads = 0;           // 0 = hardware concurrency
};

struct WalkCorpus {
  std::vector<std::vector<uint32_t>> walks;
  uint64_t token_count() const;
};

// count(v) = max(min_walks_per_node, floor(total_walks * n_v / N)).
// The floor is computed in integer arithmetic; leftover budget is discarded.
std::vector<uint64_t> allocate_walks(const CoGraph& graph,
                                     const WalkConfig& config);

// One biased step. Without a previous node the step is first-order
// (proportional to edge weight). With previous node t, neighbor x of cur is
// drawn proportional to alpha(t,x) * W_cur,x where alpha = 1/p if x == t,
// 1 if x is adjacent to t, 1/q otherwise. Returns nullopt when cur is
// isolated.
std::optional<uint32_t> second_order_step(const CoGraph& graph,
                                          std::optional<uint32_t> prev,
                                          uint32_t cur, double p, double q,
                                          Rng& rng);

// Generates count(v) walks from every node v. Walk w of node v uses an rng
// seeded from (seed, v, w), so output is identical for any worker count.
// Walks are emitted in (v, w) order. Only an isolated start node truncates a
// walk (to length 1). Throws when the total allocation is zero.
WalkCorpus generate_walks(const CoGraph& graph, const WalkConfig& config);

// One walk per line, space-separated item tokens, LF line endings. Directly
// consumable as a training corpus.
void save_walks(const WalkCorpus& walks, const Vocabulary& vocab,
                const std::string& path);
std::pair<std::vector<std::vector<uint32_t>>, Vocabulary> load_walks(
    const std::string& path);

}  // namespace itemwalk
