#include "itemwalk/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include "itemwalk/error.hpp"
#include "itemwalk/rng.hpp"

namespace itemwalk {

uint32_t Vocabulary::intern(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  const uint32_t idx = static_cast<uint32_t>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), idx);
  return idx;
}

std::optional<uint32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(uint32_t index) const {
  return tokens_.at(index);
}

void GenreMap::add(uint32_t item, std::string_view genre) {
  if (item >= genres_.size()) genres_.resize(item + 1);
  auto& set = genres_[item];
  auto it = std::lower_bound(set.begin(), set.end(), genre);
  if (it != set.end() && *it == genre) return;
  set.insert(it, std::string(genre));
}

std::span<const std::string> GenreMap::of(uint32_t item) const {
  if (item >= genres_.size()) return {};
  return genres_[item];
}

bool GenreMap::share_genre(uint32_t a, uint32_t b) const {
  const auto ga = of(a);
  const auto gb = of(b);
  // both sorted; linear merge intersection test
  size_t i = 0, j = 0;
  while (i < ga.size() && j < gb.size()) {
    const int c = ga[i].compare(gb[j]);
    if (c == 0) return true;
    if (c < 0) ++i;
    else ++j;
  }
  return false;
}

std::vector<uint32_t> GenreMap::labeled_items() const {
  std::vector<uint32_t> out;
  for (uint32_t v = 0; v < genres_.size(); ++v)
    if (!genres_[v].empty()) out.push_back(v);
  return out;
}

uint64_t GenreMap::labeled_count() const {
  uint64_t n = 0;
  for (const auto& g : genres_)
    if (!g.empty()) ++n;
  return n;
}

namespace {

// strips one trailing '\r' so CRLF exports load too
std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

void count_occurrences(InteractionCorpus& corpus) {
  corpus.occurrence.assign(corpus.items.size(), 0);
  corpus.token_count = 0;
  for (const auto& basket : corpus.baskets) {
    for (uint32_t v : basket.items) {
      ++corpus.occurrence[v];
      ++corpus.token_count;
    }
  }
}

// splits a comma list, rejecting empty entries
std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(',', start);
    const auto part = s.substr(start, pos == std::string_view::npos
                                          ? std::string_view::npos
                                          : pos - start);
    parts.push_back(part);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

InteractionCorpus load_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);

  InteractionCorpus corpus;
  std::unordered_map<std::string, size_t> basket_of_user;
  std::string raw;
  size_t lineno = 0;

  auto basket_for = [&](std::string_view user) -> Basket& {
    auto it = basket_of_user.find(std::string(user));
    if (it == basket_of_user.end()) {
      it = basket_of_user.emplace(std::string(user), corpus.baskets.size()).first;
      corpus.baskets.push_back(Basket{std::string(user), {}});
    }
    return corpus.baskets[it->second];
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = chomp(raw);
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size())
      throw ParseError(path, lineno, "expected `user<TAB>item...`");
    const auto user = line.substr(0, tab);
    const auto rest = line.substr(tab + 1);
    if (rest.find('\t') != std::string_view::npos)
      throw ParseError(path, lineno, "unexpected extra tab");

    Basket& basket = basket_for(user);
    if (format == CorpusFormat::kLong) {
      basket.items.push_back(corpus.items.intern(rest));
    } else {
      for (const auto item : split_commas(rest)) {
        if (item.empty())
          throw ParseError(path, lineno, "empty item in grouped list");
        basket.items.push_back(corpus.items.intern(item));
      }
    }
  }

  if (corpus.baskets.empty())
    throw DataError("empty corpus: " + path);
  count_occurrences(corpus);
  return corpus;
}

void write_corpus(const InteractionCorpus& corpus, const std::string& path) {
  for (uint32_t v = 0; v < corpus.num_items(); ++v)
    if (corpus.items.token(v).find_first_of("\t\n") != std::string::npos)
      throw DataError("write_corpus: token `" + corpus.items.token(v) +
                      "` contains a tab or newline");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const auto& basket : corpus.baskets) {
    if (basket.user.find_first_of("\t\n") != std::string::npos)
      throw DataError("write_corpus: user `" + basket.user +
                      "` contains a tab or newline");
    for (uint32_t v : basket.items)
      out << basket.user << '\t' << corpus.items.token(v) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

GenreMap load_genres(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open genre file: " + path);

  GenreMap genres(vocab.size());
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = chomp(raw);
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0)
      throw ParseError(path, lineno, "expected `item<TAB>genre1,genre2,...`");
    const auto item = line.substr(0, tab);
    const auto rest = line.substr(tab + 1);
    const auto labels = split_commas(rest);
    if (rest.empty() || labels.empty())
      throw ParseError(path, lineno, "empty genre list");
    for (const auto g : labels)
      if (g.empty()) throw ParseError(path, lineno, "empty genre label");

    const auto idx = vocab.find(item);
    if (!idx) {
      std::cerr << "warning: " << path << ":" << lineno << ": item `" << item
                << "` not in vocabulary, line skipped\n";
      continue;
    }
    for (const auto g : labels) genres.add(*idx, g);
  }
  return genres;
}

InteractionCorpus synth_corpus(uint32_t num_items, uint32_t num_users,
                               double density, uint64_t seed) {
  if (num_items == 0 || num_users == 0)
    throw ArgumentError("synth_corpus: items and users must be positive");
  if (density <= 0.0 || density > 1.0)
    throw ArgumentError("synth_corpus: density must be in (0, 1]");
  const uint64_t grid = static_cast<uint64_t>(num_items) * num_users;
  const uint64_t target =
      static_cast<uint64_t>(std::floor(static_cast<double>(grid) * density));
  if (target < 1)
    throw ArgumentError("synth_corpus: floor(items*users*density) must be >= 1");

  Rng rng(mix_seed(seed, 0x53594e5448ull));  // distinct stream per purpose

  // Exact-count sampling without replacement over the items x users grid.
  // Above half density rejection sampling degenerates, so draw the excluded
  // cells instead and keep the rest.
  std::vector<std::vector<uint32_t>> per_user(num_users);
  const bool complement = target > grid / 2;
  const uint64_t draws = complement ? grid - target : target;
  std::unordered_set<uint64_t> cells;
  cells.reserve(draws * 2);
  while (cells.size() < draws) {
    const uint64_t cell = rng.below(grid);
    if (!cells.insert(cell).second) continue;
    if (!complement) {
      const uint32_t user = static_cast<uint32_t>(cell / num_items);
      per_user[user].push_back(static_cast<uint32_t>(cell % num_items));
    }
  }
  if (complement) {
    for (uint32_t user = 0; user < num_users; ++user)
      for (uint32_t item = 0; item < num_items; ++item)
        if (!cells.count(static_cast<uint64_t>(user) * num_items + item))
          per_user[user].push_back(item);
  }

  InteractionCorpus corpus;
  for (uint32_t u = 0; u < num_users; ++u) {
    auto& items = per_user[u];
    if (items.empty()) continue;
    // basket order is a seeded shuffle of the user's item set
    std::sort(items.begin(), items.end());
    for (size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[rng.below(i)]);
    Basket basket;
    basket.user = "u" + std::to_string(u);
    basket.items.reserve(items.size());
    for (uint32_t item : items)
      basket.items.push_back(corpus.items.intern("i" + std::to_string(item)));
    corpus.baskets.push_back(std::move(basket));
  }
  count_occurrences(corpus);
  return corpus;
}

std::pair<InteractionCorpus, GenreMap> synth_genre_corpus(
    const GenreCorpusParams& params) {
  if (params.num_genres == 0 || params.num_items == 0 || params.num_users == 0)
    throw ArgumentError("synth_genre_corpus: counts must be positive");
  if (params.num_items % params.num_genres != 0)
    throw ArgumentError(
        "synth_genre_corpus: num_items must be divisible by num_genres");
  if (params.within_genre_prob < 0.0 || params.within_genre_prob > 1.0)
    throw ArgumentError(
        "synth_genre_corpus: within_genre_prob must be in [0, 1]");
  if (params.basket_size == 0 || params.basket_size > params.num_items)
    throw ArgumentError(
        "synth_genre_corpus: basket_size must be in [1, num_items]");

  const uint32_t per_genre = params.num_items / params.num_genres;
  Rng rng(mix_seed(params.seed, 0x47454e5245ull));

  InteractionCorpus corpus;
  for (uint32_t u = 0; u < params.num_users; ++u) {
    const uint32_t home = static_cast<uint32_t>(rng.below(params.num_genres));
    Basket basket;
    basket.user = "u" + std::to_string(u);
    basket.items.reserve(params.basket_size);
    for (uint32_t s = 0; s < params.basket_size; ++s) {
      uint32_t item;
      if (rng.next_double() < params.within_genre_prob) {
        item = home * per_genre + static_cast<uint32_t>(rng.below(per_genre));
      } else {
        item = static_cast<uint32_t>(rng.below(params.num_items));
      }
      basket.items.push_back(corpus.items.intern("i" + std::to_string(item)));
    }
    corpus.baskets.push_back(std::move(basket));
  }
  count_occurrences(corpus);

  GenreMap genres(corpus.items.size());
  for (uint32_t v = 0; v < corpus.items.size(); ++v) {
    const uint32_t raw = static_cast<uint32_t>(
        std::stoul(corpus.items.token(v).substr(1)));
    genres.add(v, "g" + std::to_string(raw / per_genre));
  }
  return {std::move(corpus), std::move(genres)};
}

}  // namespace itemwalk
