#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "itemwalk/corpus.hpp"
#include "itemwalk/sgns.hpp"

namespace itemwalk {

// Window value meaning "every ordered pair of distinct positions in the
// basket" (set-of-items semantics).
inline constexpr uint32_t kFullWindow = std::numeric_limits<uint32_t>::max();

// The (center, context) stream the basket baseline trains on; identical to
// positional windowing over each basket.
std::vector<std::pair<uint32_t, uint32_t>> basket_pairs(
    const InteractionCorpus& corpus, uint32_t window);
uint64_t basket_pair_count(const InteractionCorpus& corpus, uint32_t window);

// Trains SGNS directly over the raw baskets, scanning the full interaction
// corpus every epoch. config.window is replaced by `window`.
EmbeddingModel train_item2vec(const InteractionCorpus& corpus,
                              const SgnsConfig& config, uint32_t window = 10,
                              TrainStats* stats = nullptr);

}  // namespace itemwalk
