#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace itemwalk {

// Dense token <-> index mapping; indices are assigned in first-seen order.
class Vocabulary {
 public:
  uint32_t intern(std::string_view token);
  std::optional<uint32_t> find(std::string_view token) const;
  const std::string& token(uint32_t index) const;
  uint32_t size() const { return static_cast<uint32_t>(tokens_.size()); }
  bool empty() const { return tokens_.empty(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t> index_;
};

struct Basket {
  std::string user;
  std::vector<uint32_t> items;  // occurrence order, duplicates retained
};

// Per-user interaction baskets over a dense item vocabulary.
// occurrence[v] counts every appearance of item v across all baskets and
// token_count is their sum, so sum_v occurrence[v] == token_count always.
struct InteractionCorpus {
  Vocabulary items;
  std::vector<Basket> baskets;
  std::vector<uint64_t> occurrence;  // n_v
  uint64_t token_count = 0;          // N

  uint32_t num_items() const { return items.size(); }
};

// Per-item genre label sets. Items never added stay unlabeled and are
// excluded from evaluation sampling.
class GenreMap {
 public:
  GenreMap() = default;
  explicit GenreMap(uint32_t num_items) : genres_(num_items) {}

  void add(uint32_t item, std::string_view genre);
  bool labeled(uint32_t item) const {
    return item < genres_.size() && !genres_[item].empty();
  }
  std::span<const std::string> of(uint32_t item) const;
  bool share_genre(uint32_t a, uint32_t b) const;
  std::vector<uint32_t> labeled_items() const;
  uint64_t labeled_count() const;
  uint32_t num_items() const { return static_cast<uint32_t>(genres_.size()); }

 private:
  std::vector<std::vector<std::string>> genres_;  // sorted, unique per item
};

enum class CorpusFormat { kLong, kGrouped };

// Long format: `user<TAB>item` per line. Grouped: `user<TAB>item1,item2,...`.
// Lines with the same user extend that user's basket; duplicates are kept.
InteractionCorpus load_corpus(const std::string& path, CorpusFormat format);

// Writes the corpus in long format; reloading reproduces identical baskets.
void write_corpus(const InteractionCorpus& corpus, const std::string& path);

// Genre file: `item<TAB>genre1,genre2,...`. Unknown items are skipped with a
// warning on stderr; duplicate item lines union their genre sets.
GenreMap load_genres(const std::string& path, const Vocabulary& vocab);

// Samples exactly floor(num_items * num_users * density) distinct
// (user, item) pairs uniformly from the grid. Baskets are seeded shuffles of
// each user's item set; users with no interactions are dropped.
InteractionCorpus synth_corpus(uint32_t num_items, uint32_t num_users,
                               double density, uint64_t seed);

struct GenreCorpusParams {
  uint32_t num_items = 2000;
  uint32_t num_genres = 10;
  uint32_t num_users = 5000;
  double within_genre_prob = 0.9;
  uint32_t basket_size = 20;
  uint64_t seed = 1;
};

// Planted-cluster fixture: items are split evenly into genres, every user
// gets a home genre, and each basket slot comes from the home genre with
// probability within_genre_prob (uniform over all items otherwise).
std::pair<InteractionCorpus, GenreMap> synth_genre_corpus(
    const GenreCorpusParams& params);

}  // namespace itemwalk
