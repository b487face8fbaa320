#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itemwalk/sgns.hpp"

namespace itemwalk {

// cosine(0, x) = 0 by definition; never NaN.
double cosine(std::span<const double> a, std::span<const double> b);

// Exhaustive top-k by cosine over input-matrix rows. The query item is
// excluded; ties break by ascending item index. Returns min(k, V-1) entries.
std::vector<std::pair<uint32_t, double>> topk_by_index(
    const EmbeddingModel& model, uint32_t item, uint32_t k);
std::vector<std::pair<std::string, double>> topk_similar(
    const EmbeddingModel& model, std::string_view item, uint32_t k);

// Text format: header `V dim`, then one `token v1 ... vdim` line per item
// with 6 decimal places. Round trip preserves values to 1e-6 and vocabulary
// order exactly. Only the input matrix is persisted; import zeroes output.
void export_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel import_model(const std::string& path);

}  // namespace itemwalk
