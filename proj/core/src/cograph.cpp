#include "itemwalk/cograph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "itemwalk/error.hpp"

namespace itemwalk {

namespace {

inline uint64_t edge_key(uint32_t lo, uint32_t hi) {
  return (static_cast<uint64_t>(lo) << 32) | hi;
}

}  // namespace

uint64_t CoGraph::node_count(uint32_t v) const {
  if (v >= num_nodes()) throw std::out_of_range("CoGraph: node index out of range");
  return node_counts_[v];
}

double CoGraph::node_weight(uint32_t v) const {
  if (v >= num_nodes()) throw std::out_of_range("CoGraph: node index out of range");
  return static_cast<double>(node_counts_[v]) / static_cast<double>(total_count_);
}

bool CoGraph::has_edge(uint32_t v, uint32_t x) const {
  const auto run = neighbors(v);
  return std::binary_search(run.begin(), run.end(), x);
}

std::optional<uint64_t> CoGraph::edge_weight(uint32_t v, uint32_t x) const {
  const auto run = neighbors(v);
  const auto it = std::lower_bound(run.begin(), run.end(), x);
  if (it == run.end() || *it != x) return std::nullopt;
  return edge_weights(v)[static_cast<size_t>(it - run.begin())];
}

CoGraph CoGraph::from_edges(uint32_t num_nodes,
                            std::span<const WeightedEdge> edges,
                            std::vector<uint64_t> node_counts) {
  if (node_counts.size() != num_nodes)
    throw ArgumentError("CoGraph: node_counts size mismatch");

  CoGraph g;
  g.node_counts_ = std::move(node_counts);
  g.total_count_ = 0;
  for (uint64_t n : g.node_counts_) g.total_count_ += n;

  // pass 1: degrees
  std::vector<uint64_t> degree(num_nodes, 0);
  for (const auto& e : edges) {
    if (e.v >= num_nodes || e.x >= num_nodes)
      throw ArgumentError("CoGraph: edge endpoint out of range");
    if (e.v == e.x) throw ArgumentError("CoGraph: self-loop rejected");
    if (e.weight == 0) throw ArgumentError("CoGraph: zero edge weight");
    ++degree[e.v];
    ++degree[e.x];
  }

  g.offsets_.assign(num_nodes + 1, 0);
  for (uint32_t v = 0; v < num_nodes; ++v)
    g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  const uint64_t slots = g.offsets_[num_nodes];
  g.neighbors_.resize(slots);
  g.weights_.resize(slots);

  // pass 2: fill both directions
  std::vector<uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  g.total_edge_weight_ = 0;
  for (const auto& e : edges) {
    g.neighbors_[cursor[e.v]] = e.x;
    g.weights_[cursor[e.v]++] = e.weight;
    g.neighbors_[cursor[e.x]] = e.v;
    g.weights_[cursor[e.x]++] = e.weight;
    g.total_edge_weight_ += e.weight;
  }

  // sort each run by neighbor index, then build the sampling prefix sums
  g.prefix_.resize(slots);
  std::vector<std::pair<uint32_t, uint64_t>> run;
  for (uint32_t v = 0; v < num_nodes; ++v) {
    const uint64_t begin = g.offsets_[v];
    const uint64_t end = g.offsets_[v + 1];
    run.clear();
    for (uint64_t i = begin; i < end; ++i)
      run.emplace_back(g.neighbors_[i], g.weights_[i]);
    std::sort(run.begin(), run.end());
    for (size_t i = 1; i < run.size(); ++i)
      if (run[i].first == run[i - 1].first)
        throw ArgumentError("CoGraph: duplicate edge");
    double cum = 0.0;
    for (uint64_t i = begin; i < end; ++i) {
      const auto& [nbr, w] = run[i - begin];
      g.neighbors_[i] = nbr;
      g.weights_[i] = w;
      cum += static_cast<double>(w);
      g.prefix_[i] = cum;
    }
  }
  return g;
}

CoGraph build_graph(const InteractionCorpus& corpus, Pairing pairing) {
  if (corpus.baskets.empty()) throw DataError("build_graph: empty corpus");

  size_t window;
  switch (pairing.mode) {
    case PairingMode::kAllPairs:
      window = std::numeric_limits<size_t>::max();
      break;
    case PairingMode::kAdjacent:
      window = 1;
      break;
    case PairingMode::kWindowed:
      if (pairing.window == 0)
        throw ArgumentError("build_graph: windowed pairing needs window >= 1");
      window = pairing.window;
      break;
    default:
      throw ArgumentError("build_graph: unknown pairing mode");
  }

  std::unordered_map<uint64_t, uint64_t> counts;
  for (const auto& basket : corpus.baskets) {
    const auto& items = basket.items;
    const size_t n = items.size();
    for (size_t i = 0; i + 1 < n; ++i) {
      const size_t hi = (window >= n - i) ? n : i + 1 + window;
      for (size_t j = i + 1; j < hi; ++j) {
        if (items[i] == items[j]) continue;  // same item, no self-loop
        const uint32_t lo = std::min(items[i], items[j]);
        const uint32_t up = std::max(items[i], items[j]);
        ++counts[edge_key(lo, up)];
      }
    }
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts)
    edges.push_back({static_cast<uint32_t>(key >> 32),
                     static_cast<uint32_t>(key & 0xffffffffull), w});
  return CoGraph::from_edges(corpus.num_items(), edges, corpus.occurrence);
}

std::vector<double> first_order_step_distribution(const CoGraph& graph,
                                                  uint32_t v) {
  if (v >= graph.num_nodes())
    throw std::out_of_range("first_order_step_distribution: node out of range");
  const auto weights = graph.edge_weights(v);
  std::vector<double> probs(weights.size());
  const double total = graph.weighted_degree(v);
  for (size_t i = 0; i < weights.size(); ++i)
    probs[i] = static_cast<double>(weights[i]) / total;
  return probs;
}

void save_graph(const CoGraph& graph, const Vocabulary& vocab,
                const std::string& edges_path, const std::string& nodes_path) {
  if (vocab.size() != graph.num_nodes())
    throw ArgumentError("save_graph: vocabulary/graph size mismatch");
  for (uint32_t v = 0; v < vocab.size(); ++v)
    if (vocab.token(v).find_first_of("\t\n") != std::string::npos)
      throw DataError("save_graph: token `" + vocab.token(v) +
                      "` contains a tab or newline");

  std::ofstream nodes(nodes_path, std::ios::binary);
  if (!nodes) throw DataError("cannot write node file: " + nodes_path);
  for (uint32_t v = 0; v < graph.num_nodes(); ++v)
    nodes << vocab.token(v) << '\t' << graph.node_count(v) << '\n';
  if (!nodes) throw DataError("write failed: " + nodes_path);

  std::ofstream edges(edges_path, std::ios::binary);
  if (!edges) throw DataError("cannot write edge file: " + edges_path);
  for (uint32_t v = 0; v < graph.num_nodes(); ++v) {
    const auto run = graph.neighbors(v);
    const auto w = graph.edge_weights(v);
    for (size_t i = 0; i < run.size(); ++i)
      if (v < run[i])
        edges << vocab.token(v) << '\t' << vocab.token(run[i]) << '\t' << w[i]
              << '\n';
  }
  if (!edges) throw DataError("write failed: " + edges_path);
}

namespace {

uint64_t parse_count(std::string_view s, const std::string& path,
                     size_t lineno) {
  uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(path, lineno, "expected unsigned integer");
  return value;
}

}  // namespace

std::pair<CoGraph, Vocabulary> load_graph(const std::string& edges_path,
                                          const std::string& nodes_path) {
  Vocabulary vocab;
  std::vector<uint64_t> node_counts;

  std::ifstream nodes(nodes_path);
  if (!nodes) throw DataError("cannot open node file: " + nodes_path);
  std::string raw;
  size_t lineno = 0;
  while (std::getline(nodes, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0)
      throw ParseError(nodes_path, lineno, "expected `token<TAB>count`");
    const uint32_t idx = vocab.intern(line.substr(0, tab));
    if (idx != node_counts.size())
      throw ParseError(nodes_path, lineno, "duplicate node token");
    node_counts.push_back(
        parse_count(line.substr(tab + 1), nodes_path, lineno));
  }
  if (node_counts.empty()) throw DataError("empty node file: " + nodes_path);

  std::vector<WeightedEdge> edges;
  std::ifstream in(edges_path);
  if (!in) throw DataError("cannot open edge file: " + edges_path);
  lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string_view::npos
                          ? std::string_view::npos
                          : line.find('\t', t1 + 1);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos)
      throw ParseError(edges_path, lineno, "expected `v<TAB>x<TAB>weight`");
    const auto va = vocab.find(line.substr(0, t1));
    const auto vb = vocab.find(line.substr(t1 + 1, t2 - t1 - 1));
    if (!va || !vb)
      throw ParseError(edges_path, lineno, "edge endpoint missing from node file");
    edges.push_back(
        {*va, *vb, parse_count(line.substr(t2 + 1), edges_path, lineno)});
  }

  const uint32_t num_nodes = static_cast<uint32_t>(node_counts.size());
  return {CoGraph::from_edges(num_nodes, edges, std::move(node_counts)),
          std::move(vocab)};
}

}  // namespace itemwalk
