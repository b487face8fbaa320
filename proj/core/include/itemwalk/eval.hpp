#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itemwalk/cograph.hpp"
#include "itemwalk/corpus.hpp"
#include "itemwalk/sgns.hpp"
#include "itemwalk/walker.hpp"

namespace itemwalk {

struct StageTimings {
  double graph_ms = 0;
  double walk_ms = 0;
  double train_ms = 0;
  double total_ms = 0;
};

struct EvalReport {
  std::string method;
  uint32_t items = 0;
  uint32_t users = 0;
  double density = 0;
  std::vector<std::pair<uint32_t, double>> precision;  // (k, value)
  uint32_t samples = 0;
  uint64_t seed = 0;
  uint32_t threads = 1;
  StageTimings timings;
  uint64_t pairs_processed = 0;
};

// Genre-match precision@k: queries are drawn uniformly (seeded, with
// replacement) from labeled items; a top-k entry is a hit when its genre set
// intersects the query's. Averaged over `samples` queries per k.
EvalReport precision_at_k(const EmbeddingModel& model, const GenreMap& genres,
                          std::span<const uint32_t> ks, uint32_t samples,
                          uint64_t seed);

struct BenchConfig {
  std::vector<uint32_t> items;
  std::vector<uint32_t> users;
  std::vector<double> densities;
  WalkConfig walk;               // walk.total_walks == 0 -> one per node
  SgnsConfig sgns;
  uint32_t baseline_window = 10;
  Pairing pairing = Pairing::all_pairs();
  uint64_t seed = 1;
  uint64_t mem_budget_bytes = 4ull << 30;
};

// Runs the walk pipeline and the basket baseline on every (items, users,
// density) combination, recording per-stage wall-clock (steady clock) and
// processed-pair counters. Two rows per combination. Configurations whose
// rough memory estimate exceeds the budget are skipped with a notice on
// stderr.
std::vector<EvalReport> bench_scaling(const BenchConfig& config);

// TSV: items users density method graph_ms walk_ms train_ms total_ms pairs
// followed by one p@k column per distinct k present in any row ("na" where
// a row has no value for that k).
void write_report(std::span<const EvalReport> reports, std::ostream& out);

}  // namespace itemwalk
