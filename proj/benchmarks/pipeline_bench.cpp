#include <benchmark/benchmark.h>

#include <vector>

#include "itemwalk/baseline.hpp"
#include "itemwalk/cograph.hpp"
#include "itemwalk/corpus.hpp"
#include "itemwalk/rng.hpp"
#include "itemwalk/sgns.hpp"
#include "itemwalk/simquery.hpp"
#include "itemwalk/walker.hpp"

using namespace itemwalk;

namespace {

InteractionCorpus bench_corpus(uint32_t users) {
  return synth_corpus(2000, users, 0.002, 7);
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
  const auto corpus = bench_corpus(static_cast<uint32_t>(state.range(0)));
  for (auto _ : state) {
    auto graph = build_graph(corpus, Pairing::all_pairs());
    benchmark::DoNotOptimize(graph);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(corpus.token_count));
}
BENCHMARK(BM_BuildGraph)->Arg(2000)->Arg(8000)->Arg(32000)
    ->Unit(benchmark::kMillisecond);

static void BM_GenerateWalks(benchmark::State& state) {
  const auto corpus = bench_corpus(8000);
  const auto graph = build_graph(corpus, Pairing::all_pairs());
  WalkConfig cfg;
  cfg.total_walks = 2000;
  cfg.walk_length = static_cast<uint32_t>(state.range(0));
  cfg.min_walks_per_node = 1;
  cfg.threads = 1;
  uint64_t tokens = 0;
  for (auto _ : state) {
    auto walks = generate_walks(graph, cfg);
    tokens = walks.token_count();
    benchmark::DoNotOptimize(walks);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(tokens));
}
BENCHMARK(BM_GenerateWalks)->Arg(10)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMillisecond);

static void BM_SecondOrderStep(benchmark::State& state) {
  const auto corpus = bench_corpus(8000);
  const auto graph = build_graph(corpus, Pairing::all_pairs());
  // a well-connected (prev, cur) edge to step from
  uint32_t cur = 0;
  for (uint32_t v = 0; v < graph.num_nodes(); ++v)
    if (graph.degree(v) > graph.degree(cur)) cur = v;
  const uint32_t prev = graph.neighbors(cur)[0];
  Rng rng(11);
  for (auto _ : state) {
    auto next = second_order_step(graph, prev, cur, 1.0, 0.001, rng);
    benchmark::DoNotOptimize(next);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SecondOrderStep);

static void BM_SgnsEpoch(benchmark::State& state) {
  const auto corpus = bench_corpus(4000);
  const auto graph = build_graph(corpus, Pairing::all_pairs());
  WalkConfig wcfg;
  wcfg.total_walks = 1000;
  wcfg.walk_length = 20;
  wcfg.min_walks_per_node = 1;
  wcfg.threads = 1;
  const auto walks = generate_walks(graph, wcfg);

  SgnsConfig cfg;
  cfg.dim = static_cast<uint32_t>(state.range(0));
  cfg.epochs = 1;
  uint64_t pairs = 0;
  for (auto _ : state) {
    TrainStats stats;
    auto model = train(walks, corpus.items, cfg, &stats);
    pairs = stats.pairs_processed;
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pairs));
}
BENCHMARK(BM_SgnsEpoch)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_BaselineEpoch(benchmark::State& state) {
  const auto corpus = bench_corpus(static_cast<uint32_t>(state.range(0)));
  SgnsConfig cfg;
  cfg.dim = 64;
  cfg.epochs = 1;
  uint64_t pairs = 0;
  for (auto _ : state) {
    TrainStats stats;
    auto model = train_item2vec(corpus, cfg, 10, &stats);
    pairs = stats.pairs_processed;
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pairs));
}
BENCHMARK(BM_BaselineEpoch)->Arg(4000)->Arg(16000)
    ->Unit(benchmark::kMillisecond);

static void BM_TopK(benchmark::State& state) {
  EmbeddingModel model;
  model.dim = 128;
  Rng rng(3);
  const uint32_t items = static_cast<uint32_t>(state.range(0));
  for (uint32_t v = 0; v < items; ++v) {
    model.vocab.intern("i" + std::to_string(v));
    for (uint32_t c = 0; c < model.dim; ++c)
      model.input.push_back(2.0 * rng.next_double() - 1.0);
  }
  model.output.assign(model.input.size(), 0.0);
  for (auto _ : state) {
    auto top = topk_by_index(model, 0, 10);
    benchmark::DoNotOptimize(top);
  }
  state.SetItemsProcessed(state.iterations() * items);
}
BENCHMARK(BM_TopK)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
