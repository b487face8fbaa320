#include "itemwalk/eval.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <set>

#include "itemwalk/baseline.hpp"
#include "itemwalk/error.hpp"
#include "itemwalk/rng.hpp"
#include "itemwalk/simquery.hpp"

namespace itemwalk {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Rough footprint of one bench configuration: corpus + co-occurrence graph
// (bounded by total pair events) + both embedding matrices.
uint64_t estimate_bytes(uint64_t items, uint64_t users, double density,
                        uint32_t dim) {
  const double interactions =
      static_cast<double>(items) * static_cast<double>(users) * density;
  const double basket = users ? interactions / static_cast<double>(users) : 0;
  const double pair_events = interactions * basket / 2.0;
  const double graph =
      std::min(pair_events, static_cast<double>(items) * items / 2.0) * 48.0;
  const double corpus = interactions * 48.0;
  const double model = static_cast<double>(items) * dim * 16.0;
  const double total = corpus + graph + model;
  return total > 1e19 ? ~0ull : static_cast<uint64_t>(total);
}

}  // namespace

EvalReport precision_at_k(const EmbeddingModel& model, const GenreMap& genres,
                          std::span<const uint32_t> ks, uint32_t samples,
                          uint64_t seed) {
  if (samples < 1) throw ArgumentError("precision_at_k: samples must be >= 1");
  if (ks.empty()) throw ArgumentError("precision_at_k: no k values");
  for (uint32_t k : ks)
    if (k < 1) throw ArgumentError("precision_at_k: k must be >= 1");

  std::vector<uint32_t> labeled = genres.labeled_items();
  std::erase_if(labeled, [&](uint32_t v) { return v >= model.num_items(); });
  if (labeled.empty())
    throw DataError("precision_at_k: no labeled items in the model vocabulary");

  const uint32_t max_k = *std::max_element(ks.begin(), ks.end());
  Rng rng(mix_seed(seed, 0x4556414cull));

  std::vector<double> sums(ks.size(), 0.0);
  for (uint32_t s = 0; s < samples; ++s) {
    const uint32_t query = labeled[rng.below(labeled.size())];
    const auto ranked = topk_by_index(model, query, max_k);
    // hits[i] = 1 if ranked[i] shares a genre with the query
    std::vector<uint64_t> hit_prefix(ranked.size() + 1, 0);
    for (size_t i = 0; i < ranked.size(); ++i)
      hit_prefix[i + 1] =
          hit_prefix[i] + (genres.share_genre(query, ranked[i].first) ? 1 : 0);
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      // fraction of the returned top-k (V-1 results when k exceeds them)
      const size_t k = std::min<size_t>(ks[ki], ranked.size());
      if (k == 0) continue;
      sums[ki] += static_cast<double>(hit_prefix[k]) / static_cast<double>(k);
    }
  }

  EvalReport report;
  report.method = "precision";
  report.samples = samples;
  report.seed = seed;
  for (size_t ki = 0; ki < ks.size(); ++ki)
    report.precision.emplace_back(ks[ki], sums[ki] / samples);
  return report;
}

std::vector<EvalReport> bench_scaling(const BenchConfig& config) {
  if (config.items.empty() || config.users.empty() ||
      config.densities.empty())
    throw ArgumentError("bench_scaling: empty sweep axis");

  std::vector<EvalReport> reports;
  for (const uint32_t items : config.items) {
    for (const uint32_t users : config.users) {
      for (const double density : config.densities) {
        if (estimate_bytes(items, users, density, config.sgns.dim) >
            config.mem_budget_bytes) {
          std::cerr << "bench: skipping items=" << items << " users=" << users
                    << " density=" << density
                    << " (estimated memory exceeds budget)\n";
          continue;
        }
        const auto corpus = synth_corpus(items, users, density, config.seed);

        // walk pipeline: graph -> walks -> sgns
        {
          EvalReport r;
          r.method = "walk";
          r.items = items;
          r.users = users;
          r.density = density;
          r.seed = config.seed;
          r.threads = config.sgns.deterministic ? 1 : config.sgns.threads;

          auto t0 = Clock::now();
          const CoGraph graph = build_graph(corpus, config.pairing);
          r.timings.graph_ms = ms_since(t0);

          WalkConfig wcfg = config.walk;
          if (wcfg.total_walks == 0) wcfg.total_walks = graph.num_nodes();
          t0 = Clock::now();
          const WalkCorpus walks = generate_walks(graph, wcfg);
          r.timings.walk_ms = ms_since(t0);

          TrainStats stats;
          t0 = Clock::now();
          train(walks, corpus.items, config.sgns, &stats);
          r.timings.train_ms = ms_since(t0);
          r.timings.total_ms =
              r.timings.graph_ms + r.timings.walk_ms + r.timings.train_ms;
          r.pairs_processed = stats.pairs_processed;
          reports.push_back(std::move(r));
        }

        // basket baseline: sgns straight over the raw corpus
        {
          EvalReport r;
          r.method = "baseline";
          r.items = items;
          r.users = users;
          r.density = density;
          r.seed = config.seed;
          r.threads = config.sgns.deterministic ? 1 : config.sgns.threads;

          TrainStats stats;
          const auto t0 = Clock::now();
          train_item2vec(corpus, config.sgns, config.baseline_window, &stats);
          r.timings.train_ms = ms_since(t0);
          r.timings.total_ms = r.timings.train_ms;
          r.pairs_processed = stats.pairs_processed;
          reports.push_back(std::move(r));
        }
      }
    }
  }
  return reports;
}

void write_report(std::span<const EvalReport> reports, std::ostream& out) {
  std::set<uint32_t> ks;
  for (const auto& r : reports)
    for (const auto& [k, _] : r.precision) ks.insert(k);

  out << "items\tusers\tdensity\tmethod\tthreads\tgraph_ms\twalk_ms\t"
         "train_ms\ttotal_ms\tpairs";
  for (uint32_t k : ks) out << "\tp@" << k;
  out << '\n';

  for (const auto& r : reports) {
    out << r.items << '\t' << r.users << '\t' << r.density << '\t' << r.method
        << '\t' << r.threads << '\t' << r.timings.graph_ms << '\t'
        << r.timings.walk_ms << '\t' << r.timings.train_ms << '\t'
        << r.timings.total_ms << '\t' << r.pairs_processed;
    for (uint32_t k : ks) {
      const auto it =
          std::find_if(r.precision.begin(), r.precision.end(),
                       [&](const auto& p) { return p.first == k; });
      if (it == r.precision.end())
        out << "\tna";
      else
        out << '\t' << it->second;
    }
    out << '\n';
  }
}

}  // namespace itemwalk
