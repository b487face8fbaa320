#include "itemwalk/baseline.hpp"

#include "itemwalk/error.hpp"

namespace itemwalk {

std::vector<std::pair<uint32_t, uint32_t>> basket_pairs(
    const InteractionCorpus& corpus, uint32_t window) {
  if (corpus.baskets.empty()) throw DataError("basket_pairs: empty corpus");
  if (window < 1) throw ArgumentError("basket_pairs: window must be >= 1");
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (const auto& basket : corpus.baskets)
    for_each_pair(basket.items, window, [&](uint32_t c, uint32_t ctx) {
      pairs.emplace_back(c, ctx);
    });
  return pairs;
}

uint64_t basket_pair_count(const InteractionCorpus& corpus, uint32_t window) {
  uint64_t total = 0;
  for (const auto& basket : corpus.baskets)
    total += pair_count(basket.items.size(), window);
  return total;
}

EmbeddingModel train_item2vec(const InteractionCorpus& corpus,
                              const SgnsConfig& config, uint32_t window,
                              TrainStats* stats) {
  if (corpus.baskets.empty()) throw DataError("train_item2vec: empty corpus");
  if (window < 1) throw ArgumentError("train_item2vec: window must be >= 1");
  std::vector<std::span<const uint32_t>> sequences;
  sequences.reserve(corpus.baskets.size());
  for (const auto& basket : corpus.baskets) sequences.emplace_back(basket.items);
  SgnsConfig cfg = config;
  cfg.window = window;
  return train(sequences, corpus.items, cfg, stats);
}

}  // namespace itemwalk
