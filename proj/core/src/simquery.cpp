#include "itemwalk/simquery.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "itemwalk/error.hpp"

namespace itemwalk {

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::pair<uint32_t, double>> topk_by_index(
    const EmbeddingModel& model, uint32_t item, uint32_t k) {
  if (item >= model.num_items())
    throw DataError("topk: item index out of range");
  if (k < 1) throw ArgumentError("topk: k must be >= 1");

  const auto query = model.input_row(item);
  std::vector<std::pair<uint32_t, double>> scored;
  scored.reserve(model.num_items());
  for (uint32_t v = 0; v < model.num_items(); ++v) {
    if (v == item) continue;
    scored.emplace_back(v, cosine(query, model.input_row(v)));
  }
  const size_t take = std::min<size_t>(k, scored.size());
  auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // tie: ascending item index
  };
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    better);
  scored.resize(take);
  return scored;
}

std::vector<std::pair<std::string, double>> topk_similar(
    const EmbeddingModel& model, std::string_view item, uint32_t k) {
  const auto idx = model.vocab.find(item);
  if (!idx)
    throw DataError("topk: unknown item token `" + std::string(item) + "`");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [v, score] : topk_by_index(model, *idx, k))
    out.emplace_back(model.vocab.token(v), score);
  return out;
}

void export_model(const EmbeddingModel& model, const std::string& path) {
  for (uint32_t v = 0; v < model.num_items(); ++v)
    if (model.vocab.token(v).find_first_of(" \t\n") != std::string::npos)
      throw DataError("export_model: token `" + model.vocab.token(v) +
                      "` contains whitespace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << model.num_items() << ' ' << model.dim << '\n';
  char buf[64];
  for (uint32_t v = 0; v < model.num_items(); ++v) {
    out << model.vocab.token(v);
    for (const double x : model.input_row(v)) {
      const int n = std::snprintf(buf, sizeof(buf), " %.6f", x);
      out.write(buf, n);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

EmbeddingModel import_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);

  uint64_t rows = 0;
  uint32_t dim = 0;
  if (!(in >> rows >> dim) || dim == 0)
    throw DataError(path + ": bad header, expected `V dim`");

  EmbeddingModel model;
  model.dim = dim;
  model.input.reserve(rows * dim);
  std::string token;
  for (uint64_t r = 0; r < rows; ++r) {
    if (!(in >> token))
      throw DataError(path + ": body has fewer rows than header declares");
    if (model.vocab.intern(token) != r)
      throw DataError(path + ": duplicate token `" + token + "`");
    for (uint32_t i = 0; i < dim; ++i) {
      double x;
      if (!(in >> x))
        throw DataError(path + ": row `" + token + "` has fewer than " +
                        std::to_string(dim) + " values");
      model.input.push_back(x);
    }
  }
  if (in >> token)
    throw DataError(path + ": trailing content beyond declared rows");
  model.output.assign(model.input.size(), 0.0);
  return model;
}

}  // namespace itemwalk
