#include "itemwalk/walker.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "itemwalk/error.hpp"

namespace itemwalk {

namespace {

void validate(const WalkConfig& config) {
  if (config.total_walks < 1)
    throw ArgumentError("walker: total_walks must be >= 1");
  if (config.walk_length < 1)
    throw ArgumentError("walker: walk_length must be >= 1");
  if (!(config.p > 0.0) || !(config.q > 0.0))
    throw ArgumentError("walker: p and q must be > 0");
}

uint32_t effective_threads(uint32_t requested) {
  if (requested != 0) return requested;
  const uint32_t hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// weighted draw by binary search over a strictly increasing cumulative run
size_t pick_by_prefix(std::span<const double> prefix, double u) {
  const double target = u * prefix.back();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
  return std::min(static_cast<size_t>(it - prefix.begin()), prefix.size() - 1);
}

size_t sample_first_order(const CoGraph& g, uint32_t cur, Rng& rng) {
  return pick_by_prefix(g.prefix_weights(cur), rng.next_double());
}

// Second-order draw; scratch holds the alpha-weighted cumulative masses.
// O(deg(cur) * log deg(prev)).
size_t sample_second_order(const CoGraph& g, uint32_t prev, uint32_t cur,
                           double p, double q, Rng& rng,
                           std::vector<double>& scratch) {
  const auto nbrs = g.neighbors(cur);
  const auto weights = g.edge_weights(cur);
  scratch.resize(nbrs.size());
  double cum = 0.0;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const uint32_t x = nbrs[i];
    double alpha;
    if (x == prev)
      alpha = 1.0 / p;
    else if (g.has_edge(prev, x))
      alpha = 1.0;
    else
      alpha = 1.0 / q;
    cum += alpha * static_cast<double>(weights[i]);
    scratch[i] = cum;
  }
  return pick_by_prefix(scratch, rng.next_double());
}

void run_walk(const CoGraph& g, uint32_t start, const WalkConfig& config,
              Rng& rng, std::vector<double>& scratch,
              std::vector<uint32_t>& out) {
  out.clear();
  out.reserve(config.walk_length);
  out.push_back(start);
  if (g.degree(start) == 0) return;  // isolated start: length-1 walk
  while (out.size() < config.walk_length) {
    const uint32_t cur = out.back();
    size_t pick;
    if (out.size() == 1) {
      pick = sample_first_order(g, cur, rng);
    } else {
      pick = sample_second_order(g, out[out.size() - 2], cur, config.p,
                                 config.q, rng, scratch);
    }
    out.push_back(g.neighbors(cur)[pick]);
  }
}

}  // namespace

uint64_t WalkCorpus::token_count() const {
  uint64_t n = 0;
  for (const auto& w : walks) n += w.size();
  return n;
}

std::vector<uint64_t> allocate_walks(const CoGraph& graph,
                                     const WalkConfig& config) {
  validate(config);
  if (graph.num_nodes() == 0) throw DataError("allocate_walks: empty graph");
  std::vector<uint64_t> counts(graph.num_nodes());
  const uint64_t total = graph.total_count();
  for (uint32_t v = 0; v < graph.num_nodes(); ++v) {
    // integer floor(total_walks * n_v / N), exact
    const uint64_t share = config.total_walks * graph.node_count(v) / total;
    counts[v] = std::max<uint64_t>(share, config.min_walks_per_node);
  }
  return counts;
}

std::optional<uint32_t> second_order_step(const CoGraph& graph,
                                          std::optional<uint32_t> prev,
                                          uint32_t cur, double p, double q,
                                          Rng& rng) {
  if (!(p > 0.0) || !(q > 0.0))
    throw ArgumentError("second_order_step: p and q must be > 0");
  if (graph.degree(cur) == 0) return std::nullopt;
  size_t pick;
  if (!prev) {
    pick = sample_first_order(graph, cur, rng);
  } else {
    std::vector<double> scratch;
    pick = sample_second_order(graph, *prev, cur, p, q, rng, scratch);
  }
  return graph.neighbors(cur)[pick];
}

WalkCorpus generate_walks(const CoGraph& graph, const WalkConfig& config) {
  const auto counts = allocate_walks(graph, config);

  // flat (node, walk-index) task list; output lands in task order
  std::vector<std::pair<uint32_t, uint32_t>> tasks;
  for (uint32_t v = 0; v < counts.size(); ++v)
    for (uint32_t w = 0; w < counts[v]; ++w) tasks.emplace_back(v, w);
  if (tasks.empty())
    throw DataError(
        "generate_walks: allocation is zero for every node; raise total_walks "
        "or set min_walks_per_node >= 1");

  WalkCorpus corpus;
  corpus.walks.resize(tasks.size());

  const uint32_t threads =
      std::min<uint32_t>(effective_threads(config.threads),
                         static_cast<uint32_t>(tasks.size()));
  auto worker = [&](size_t begin, size_t end) {
    std::vector<double> scratch;
    for (size_t t = begin; t < end; ++t) {
      const auto [v, w] = tasks[t];
      Rng rng(mix_seed(config.seed, v, w));
      run_walk(graph, v, config, rng, scratch, corpus.walks[t]);
    }
  };

  if (threads <= 1) {
    worker(0, tasks.size());
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (uint32_t i = 0; i < threads; ++i) {
      const size_t begin = tasks.size() * i / threads;
      const size_t end = tasks.size() * (i + 1) / threads;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return corpus;
}

void save_walks(const WalkCorpus& walks, const Vocabulary& vocab,
                const std::string& path) {
  // the format is space-separated, so such tokens would not survive a reload
  for (uint32_t v = 0; v < vocab.size(); ++v)
    if (vocab.token(v).find_first_of(" \t\n") != std::string::npos)
      throw DataError("save_walks: token `" + vocab.token(v) +
                      "` contains whitespace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write walk file: " + path);
  for (const auto& walk : walks.walks) {
    for (size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << vocab.token(walk[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::pair<std::vector<std::vector<uint32_t>>, Vocabulary> load_walks(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open walk file: " + path);
  std::vector<std::vector<uint32_t>> sequences;
  Vocabulary vocab;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<uint32_t> seq;
    size_t start = 0;
    while (start < line.size()) {
      size_t pos = line.find(' ', start);
      if (pos == std::string_view::npos) pos = line.size();
      if (pos == start) throw ParseError(path, lineno, "empty token");
      seq.push_back(vocab.intern(line.substr(start, pos - start)));
      start = pos + 1;
    }
    sequences.push_back(std::move(seq));
  }
  if (sequences.empty()) throw DataError("empty walk file: " + path);
  return {std::move(sequences), std::move(vocab)};
}

}  // namespace itemwalk
