#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "itemwalk/corpus.hpp"
#include "itemwalk/walker.hpp"

namespace itemwalk {

struct SgnsConfig {
  uint32_t dim = 128;
  uint32_t window = 10;          // max context offset
  uint32_t negatives = 5;        // K noise samples per positive
  uint32_t epochs = 5;
  double lr_start = 0.025;
  double lr_end = 1e-4;          // linear decay endpoint
  double noise_exponent = 0.75;  // unigram distortion power
  uint64_t seed = 1;
  bool deterministic = true;     // forces a single sequential worker
  uint32_t threads = 1;          // used when deterministic == false
  bool dynamic_window = false;   // per-center uniform shrink in [1, window]
};

struct EmbeddingModel {
  Vocabulary vocab;
  uint32_t dim = 0;
  std::vector<double> input;   // V x dim, row-major
  std::vector<double> output;  // V x dim, row-major

  uint32_t num_items() const { return vocab.size(); }
  std::span<double> input_row(uint32_t v) {
    return {input.data() + static_cast<size_t>(v) * dim, dim};
  }
  std::span<const double> input_row(uint32_t v) const {
    return {input.data() + static_cast<size_t>(v) * dim, dim};
  }
  std::span<double> output_row(uint32_t v) {
    return {output.data() + static_cast<size_t>(v) * dim, dim};
  }
  std::span<const double> output_row(uint32_t v) const {
    return {output.data() + static_cast<size_t>(v) * dim, dim};
  }
};

// word2vec initialization: input rows uniform in (-0.5/dim, 0.5/dim),
// output rows zero.
EmbeddingModel init_model(const Vocabulary& vocab, uint32_t dim,
                          uint64_t seed);

struct TrainStats {
  uint64_t pairs_processed = 0;
  uint64_t sgd_steps = 0;  // (1 + negatives) per pair
  std::vector<double> epoch_loss;
};

// Visits (center, context) = (seq[i], seq[j]) for all |i - j| <= window,
// i != j, in center-major order. Shared by the trainer, the pair extractor
// and the basket baseline so the windowing semantics cannot drift apart.
template <typename Fn>
inline void for_each_pair(std::span<const uint32_t> seq, uint32_t window,
                          Fn&& fn) {
  const size_t n = seq.size();
  for (size_t i = 0; i < n; ++i) {
    const size_t lo = i > window ? i - window : 0;
    const size_t hi = std::min(n, i + window + 1);
    for (size_t j = lo; j < hi; ++j) {
      if (j == i) continue;
      fn(seq[i], seq[j]);
    }
  }
}

std::vector<std::pair<uint32_t, uint32_t>> extract_pairs(
    std::span<const uint32_t> seq, uint32_t window);

// Closed form for the number of pairs for_each_pair emits.
uint64_t pair_count(size_t sequence_length, uint32_t window);
uint64_t pair_count(std::span<const std::span<const uint32_t>> sequences,
                    uint32_t window);

// Normalized noise distribution the trainer draws negatives from:
// counts[v]^exponent over the training corpus, zero for absent tokens.
std::vector<double> noise_distribution(std::span<const uint64_t> counts,
                                       double exponent);

// Loss of one SGNS example at the current parameters:
//   -log sigmoid(u_ctx . w_center) - sum_k log sigmoid(-u_neg[k] . w_center)
// When grads is non-null it receives the analytic gradients, one row each
// for [center input, context output, negative outputs...].
double pair_loss(const EmbeddingModel& model, uint32_t center,
                 uint32_t context, std::span<const uint32_t> negatives,
                 std::vector<std::vector<double>>* grads = nullptr);

// Single SGD step on the same loss. All scores are taken before any row is
// updated; output rows then update immediately and the center row once at
// the end. Returns the pre-update loss.
double pair_step(EmbeddingModel& model, uint32_t center, uint32_t context,
                 std::span<const uint32_t> negatives, double lr);

// Trains over item-index sequences (walks or baskets). Negatives come from
// the corpus unigram distribution raised to noise_exponent, sampled by binary
// search over a cumulative table. Learning rate decays linearly from
// lr_start to lr_end across epochs * pair_count scheduled pairs.
// Deterministic mode is bit-reproducible; parallel mode shards sequences
// across unsynchronized workers (hogwild) and promises only statistical
// behavior.
EmbeddingModel train(std::span<const std::span<const uint32_t>> sequences,
                     const Vocabulary& vocab, const SgnsConfig& config,
                     TrainStats* stats = nullptr);
EmbeddingModel train(const WalkCorpus& walks, const Vocabulary& vocab,
                     const SgnsConfig& config, TrainStats* stats = nullptr);
EmbeddingModel train(const std::vector<std::vector<uint32_t>>& sequences,
                     const Vocabulary& vocab, const SgnsConfig& config,
                     TrainStats* stats = nullptr);

// Downstream similarity reads the input matrix; this folds (input+output)/2
// into the input rows for the flag-gated averaging convention.
EmbeddingModel average_in_out(const EmbeddingModel& model);

}  // namespace itemwalk
