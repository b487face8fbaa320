#include "itemwalk/sgns.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "itemwalk/error.hpp"
#include "itemwalk/rng.hpp"

namespace itemwalk {

namespace {

double sigmoid(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

// -log sigmoid(x), numerically stable at both tails
double neg_log_sigmoid(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cumulative table for drawing negatives from unigram^exponent.
std::vector<double> noise_cdf(std::span<const uint64_t> counts,
                              double exponent) {
  std::vector<double> cdf(counts.size());
  double cum = 0.0;
  for (size_t v = 0; v < counts.size(); ++v) {
    if (counts[v] > 0)
      cum += std::pow(static_cast<double>(counts[v]), exponent);
    cdf[v] = cum;
  }
  return cdf;
}

}  // namespace

std::vector<double> noise_distribution(std::span<const uint64_t> counts,
                                       double exponent) {
  auto cdf = noise_cdf(counts, exponent);
  std::vector<double> probs(cdf.size(), 0.0);
  const double total = cdf.empty() ? 0.0 : cdf.back();
  if (total <= 0.0) return probs;
  double prev = 0.0;
  for (size_t v = 0; v < cdf.size(); ++v) {
    probs[v] = (cdf[v] - prev) / total;
    prev = cdf[v];
  }
  return probs;
}

namespace {

uint32_t draw_noise(const std::vector<double>& cdf, Rng& rng) {
  const double target = rng.next_double() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return static_cast<uint32_t>(
      std::min(static_cast<size_t>(it - cdf.begin()), cdf.size() - 1));
}

}  // namespace

EmbeddingModel init_model(const Vocabulary& vocab, uint32_t dim,
                          uint64_t seed) {
  if (dim < 1) throw ArgumentError("init_model: dim must be >= 1");
  EmbeddingModel model;
  model.vocab = vocab;
  model.dim = dim;
  const size_t total = static_cast<size_t>(vocab.size()) * dim;
  model.input.resize(total);
  model.output.assign(total, 0.0);
  Rng rng(mix_seed(seed, 0x494e4954ull));
  for (auto& w : model.input)
    w = (rng.next_double() - 0.5) / static_cast<double>(dim);
  return model;
}

std::vector<std::pair<uint32_t, uint32_t>> extract_pairs(
    std::span<const uint32_t> seq, uint32_t window) {
  if (window < 1) throw ArgumentError("extract_pairs: window must be >= 1");
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for_each_pair(seq, window,
                [&](uint32_t c, uint32_t ctx) { pairs.emplace_back(c, ctx); });
  return pairs;
}

uint64_t pair_count(size_t sequence_length, uint32_t window) {
  if (sequence_length < 2) return 0;
  const uint64_t n = sequence_length;
  const uint64_t w = std::min<uint64_t>(window, n - 1);
  // sum_i min(i, w) == w(w-1)/2 + (n-w)w, symmetric on both sides
  return 2 * (w * (w - 1) / 2 + (n - w) * w);
}

uint64_t pair_count(std::span<const std::span<const uint32_t>> sequences,
                    uint32_t window) {
  uint64_t total = 0;
  for (const auto& s : sequences) total += pair_count(s.size(), window);
  return total;
}

double pair_loss(const EmbeddingModel& model, uint32_t center,
                 uint32_t context, std::span<const uint32_t> negatives,
                 std::vector<std::vector<double>>* grads) {
  const auto w = model.input_row(center);
  const uint32_t d = model.dim;

  if (grads) {
    grads->assign(2 + negatives.size(), std::vector<double>(d, 0.0));
  }

  double loss = 0.0;
  std::vector<double> center_grad(grads ? d : 0, 0.0);

  auto term = [&](uint32_t target, bool positive, size_t grad_slot) {
    const auto u = model.output_row(target);
    const double s = dot(w, u);
    const double label = positive ? 1.0 : 0.0;
    loss += neg_log_sigmoid(positive ? s : -s);
    if (grads) {
      const double g = sigmoid(s) - label;  // d loss / d s
      for (uint32_t i = 0; i < d; ++i) {
        center_grad[i] += g * u[i];
        (*grads)[grad_slot][i] += g * w[i];
      }
    }
  };

  term(context, true, 1);
  for (size_t k = 0; k < negatives.size(); ++k)
    term(negatives[k], false, 2 + k);
  if (grads) (*grads)[0] = std::move(center_grad);
  return loss;
}

double pair_step(EmbeddingModel& model, uint32_t center, uint32_t context,
                 std::span<const uint32_t> negatives, double lr) {
  const uint32_t d = model.dim;
  auto w = model.input_row(center);

  // scores first, at the pre-update parameters
  double loss = 0.0;
  static thread_local std::vector<double> center_grad;
  static thread_local std::vector<double> scores;
  center_grad.assign(d, 0.0);
  scores.resize(1 + negatives.size());
  scores[0] = dot(w, model.output_row(context));
  for (size_t k = 0; k < negatives.size(); ++k)
    scores[1 + k] = dot(w, model.output_row(negatives[k]));

  loss += neg_log_sigmoid(scores[0]);
  for (size_t k = 0; k < negatives.size(); ++k)
    loss += neg_log_sigmoid(-scores[1 + k]);

  auto update_output = [&](uint32_t target, double score, double label) {
    const double g = sigmoid(score) - label;
    auto u = model.output_row(target);
    for (uint32_t i = 0; i < d; ++i) {
      center_grad[i] += g * u[i];
      u[i] -= lr * g * w[i];
    }
  };

  update_output(context, scores[0], 1.0);
  for (size_t k = 0; k < negatives.size(); ++k)
    update_output(negatives[k], scores[1 + k], 0.0);
  for (uint32_t i = 0; i < d; ++i) w[i] -= lr * center_grad[i];
  return loss;
}

namespace {

struct Shard {
  size_t begin = 0;
  size_t end = 0;
};

}  // namespace

EmbeddingModel train(std::span<const std::span<const uint32_t>> sequences,
                     const Vocabulary& vocab, const SgnsConfig& config,
                     TrainStats* stats) {
  if (config.dim < 1) throw ArgumentError("train: dim must be >= 1");
  if (config.window < 1) throw ArgumentError("train: window must be >= 1");
  if (config.negatives < 1)
    throw ArgumentError("train: negatives must be >= 1");
  if (config.epochs < 1) throw ArgumentError("train: epochs must be >= 1");
  if (!(config.lr_start >= config.lr_end) || !(config.lr_end > 0.0))
    throw ArgumentError("train: need lr_start >= lr_end > 0");

  // unigram counts over the training corpus; also validates indices
  std::vector<uint64_t> counts(vocab.size(), 0);
  uint64_t tokens = 0;
  for (const auto& seq : sequences) {
    for (uint32_t v : seq) {
      if (v >= vocab.size())
        throw DataError("train: token index " + std::to_string(v) +
                        " outside vocabulary of size " +
                        std::to_string(vocab.size()));
      ++counts[v];
      ++tokens;
    }
  }
  if (tokens == 0) throw DataError("train: empty sequence corpus");

  const auto cdf = noise_cdf(counts, config.noise_exponent);
  const uint64_t pairs_per_epoch = pair_count(sequences, config.window);
  const uint64_t scheduled =
      std::max<uint64_t>(1, pairs_per_epoch * config.epochs);

  EmbeddingModel model = init_model(vocab, config.dim, config.seed);

  const uint32_t threads =
      config.deterministic ? 1 : std::max<uint32_t>(1, config.threads);
  std::vector<Shard> shards(threads);
  for (uint32_t t = 0; t < threads; ++t)
    shards[t] = {sequences.size() * t / threads,
                 sequences.size() * (t + 1) / threads};

  std::atomic<uint64_t> progress{0};
  std::atomic<uint64_t> pairs_done{0};
  const double lr_span = config.lr_start - config.lr_end;

  std::string divergence;
  std::mutex divergence_mu;

  auto run_shard = [&](uint32_t worker, uint32_t epoch) {
    Rng rng(mix_seed(config.seed, 0x545241494eull + epoch, worker));
    std::vector<uint32_t> negatives(config.negatives);
    double loss_sum = 0.0;
    uint64_t local_pairs = 0;
    for (size_t s = shards[worker].begin; s < shards[worker].end; ++s) {
      const auto& seq = sequences[s];
      uint32_t window = config.window;
      const size_t n = seq.size();
      for (size_t i = 0; i < n; ++i) {
        if (config.dynamic_window)
          window = 1 + static_cast<uint32_t>(rng.below(config.window));
        const size_t lo = i > window ? i - window : 0;
        const size_t hi = std::min(n, i + window + 1);
        for (size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          for (auto& neg : negatives) neg = draw_noise(cdf, rng);
          const uint64_t t = progress.fetch_add(1, std::memory_order_relaxed);
          const double frac =
              std::min(1.0, static_cast<double>(t) /
                                static_cast<double>(scheduled));
          const double lr = config.lr_start - lr_span * frac;
          const double loss = pair_step(model, seq[i], seq[j], negatives, lr);
          if (!std::isfinite(loss)) {
            std::lock_guard<std::mutex> lock(divergence_mu);
            if (divergence.empty())
              divergence = "train: non-finite loss at pair step " +
                           std::to_string(t);
            return loss_sum;
          }
          loss_sum += loss;
          ++local_pairs;
        }
      }
    }
    pairs_done.fetch_add(local_pairs, std::memory_order_relaxed);
    return loss_sum;
  };

  std::vector<double> epoch_loss;
  for (uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    const uint64_t before = pairs_done.load();
    if (threads == 1) {
      loss_sum = run_shard(0, epoch);
    } else {
      std::vector<std::thread> pool;
      std::vector<double> worker_loss(threads, 0.0);
      for (uint32_t t = 0; t < threads; ++t)
        pool.emplace_back(
            [&, t, epoch] { worker_loss[t] = run_shard(t, epoch); });
      for (auto& th : pool) th.join();
      for (double l : worker_loss) loss_sum += l;
    }
    if (!divergence.empty()) throw DataError(divergence);
    const uint64_t done = pairs_done.load() - before;
    epoch_loss.push_back(done == 0 ? 0.0
                                   : loss_sum / static_cast<double>(done));
  }

  if (stats) {
    stats->pairs_processed = pairs_done.load();
    stats->sgd_steps = pairs_done.load() * (1 + config.negatives);
    stats->epoch_loss = std::move(epoch_loss);
  }
  return model;
}

EmbeddingModel train(const WalkCorpus& walks, const Vocabulary& vocab,
                     const SgnsConfig& config, TrainStats* stats) {
  return train(walks.walks, vocab, config, stats);
}

EmbeddingModel train(const std::vector<std::vector<uint32_t>>& sequences,
                     const Vocabulary& vocab, const SgnsConfig& config,
                     TrainStats* stats) {
  std::vector<std::span<const uint32_t>> views;
  views.reserve(sequences.size());
  for (const auto& s : sequences) views.emplace_back(s);
  return train(views, vocab, config, stats);
}

EmbeddingModel average_in_out(const EmbeddingModel& model) {
  EmbeddingModel out;
  out.vocab = model.vocab;
  out.dim = model.dim;
  out.input.resize(model.input.size());
  for (size_t i = 0; i < model.input.size(); ++i)
    out.input[i] = 0.5 * (model.input[i] + model.output[i]);
  out.output.assign(model.output.size(), 0.0);
  return out;
}

}  // namespace itemwalk
