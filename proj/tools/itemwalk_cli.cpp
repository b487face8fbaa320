// Command-line front-end: synth, graph, walk, train, train-baseline, topk,
// eval, bench. Every command prints a one-line key=value summary on success.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "itemwalk/baseline.hpp"
#include "itemwalk/cograph.hpp"
#include "itemwalk/corpus.hpp"
#include "itemwalk/error.hpp"
#include "itemwalk/eval.hpp"
#include "itemwalk/sgns.hpp"
#include "itemwalk/simquery.hpp"
#include "itemwalk/walker.hpp"

namespace {

using namespace itemwalk;

uint32_t default_threads() {
  if (const char* env = std::getenv("ITEMWALK_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<uint32_t>(n);
  }
  const uint32_t hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

CorpusFormat parse_format(const std::string& s) {
  if (s == "long") return CorpusFormat::kLong;
  if (s == "grouped") return CorpusFormat::kGrouped;
  throw ArgumentError("unknown corpus format `" + s + "`");
}

Pairing parse_pairing(const std::string& mode, uint32_t window) {
  if (mode == "all_pairs") return Pairing::all_pairs();
  if (mode == "adjacent") return Pairing::adjacent();
  if (mode == "windowed") return Pairing::windowed(window);
  throw ArgumentError("unknown pairing mode `" + mode + "`");
}

uint32_t parse_baseline_window(const std::string& s) {
  if (s == "full") return kFullWindow;
  const unsigned long w = std::stoul(s);
  if (w < 1) throw ArgumentError("window must be >= 1 or `full`");
  return static_cast<uint32_t>(w);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) throw ArgumentError("empty list entry in `" + s + "`");
    out.push_back(parse(part));
  }
  if (out.empty()) throw ArgumentError("empty list `" + s + "`");
  return out;
}

void print_summary(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) std::cout << ' ';
    std::cout << k << '=' << v;
    first = false;
  }
  std::cout << '\n';
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Flag bundles shared by several commands.

struct SgnsFlags {
  SgnsConfig cfg;
  bool average = false;
  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", cfg.dim, "embedding dimension")
        ->capture_default_str();
    cmd->add_option("--window", cfg.window, "context window")
        ->capture_default_str();
    cmd->add_option("--negatives", cfg.negatives, "negatives per positive")
        ->capture_default_str();
    cmd->add_option("--epochs", cfg.epochs, "training epochs")
        ->capture_default_str();
    cmd->add_option("--lr", cfg.lr_start, "initial learning rate")
        ->capture_default_str();
    cmd->add_option("--lr-end", cfg.lr_end, "final learning rate")
        ->capture_default_str();
    cmd->add_option("--noise-exponent", cfg.noise_exponent,
                    "unigram distortion power")
        ->capture_default_str();
    cmd->add_flag("--dynamic-window", cfg.dynamic_window,
                  "uniform random effective window per center");
    cmd->add_flag("--average-in-out", average,
                  "export (input+output)/2 instead of the input matrix");
  }
  void finish(uint64_t seed, uint32_t threads) {
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.deterministic = threads <= 1;
  }
};

struct WalkFlags {
  WalkConfig cfg;
  // auto_default: what a budget of 0 means for this command, or empty when
  // the command requires an explicit budget
  void attach(CLI::App* cmd, const std::string& auto_default) {
    if (!auto_default.empty()) cfg.total_walks = 0;
    cmd->add_option("--total-walks", cfg.total_walks,
                    auto_default.empty()
                        ? std::string("walk budget")
                        : "walk budget (0 = " + auto_default + ")")
        ->capture_default_str();
    cmd->add_option("--walk-length", cfg.walk_length, "tokens per walk")
        ->capture_default_str();
    cmd->add_option("--p", cfg.p, "return parameter")->capture_default_str();
    cmd->add_option("--q", cfg.q, "in-out parameter")->capture_default_str();
    cmd->add_option("--min-walks", cfg.min_walks_per_node,
                    "minimum walks per node")
        ->capture_default_str();
  }
  void finish(uint64_t seed, uint32_t threads, uint32_t num_nodes) {
    cfg.seed = seed;
    cfg.threads = threads;
    if (cfg.total_walks == 0)
      cfg.total_walks = static_cast<uint64_t>(num_nodes) * 10;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"item embeddings from co-occurrence graph random walks"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--threads/--format are valid after the subcommand

  uint64_t seed = 1;
  uint32_t threads = default_threads();
  std::string format = "long";
  app.add_option("--seed", seed, "rng seed")->capture_default_str();
  app.add_option("--threads", threads,
                 "worker cap (env ITEMWALK_THREADS sets the default)")
      ->capture_default_str();
  app.add_option("--format", format, "corpus format: long|grouped")
      ->capture_default_str();

  // ---- synth ----
  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic interaction corpus");
  uint32_t sy_items = 1000, sy_users = 1000, sy_genres = 0, sy_basket = 20;
  double sy_density = 0.01, sy_within = 0.9;
  std::string sy_out, sy_genres_out;
  synth->add_option("--items", sy_items, "item count")->capture_default_str();
  synth->add_option("--users", sy_users, "user count")->capture_default_str();
  synth->add_option("--density", sy_density, "interaction density in (0,1]")
      ->capture_default_str();
  synth->add_option("--genres", sy_genres,
                    "planted genre count (0 = plain density sampling)");
  synth->add_option("--within-genre-prob", sy_within,
                    "home-genre draw probability (genre mode)")
      ->capture_default_str();
  synth->add_option("--basket-size", sy_basket, "basket size (genre mode)")
      ->capture_default_str();
  synth->add_option("--genres-out", sy_genres_out,
                    "genre TSV output (genre mode)");
  synth->add_option("-o,--out", sy_out, "corpus output path")->required();

  // ---- graph ----
  auto* graph_cmd =
      app.add_subcommand("graph", "build and dump the co-occurrence graph");
  std::string gr_in, gr_edges, gr_nodes, gr_pairing = "all_pairs";
  uint32_t gr_window = 5;
  graph_cmd->add_option("-i,--input", gr_in, "corpus path")->required();
  graph_cmd->add_option("--pairing", gr_pairing,
                        "all_pairs|adjacent|windowed")
      ->capture_default_str();
  graph_cmd->add_option("--pair-window", gr_window,
                        "window for --pairing windowed")
      ->capture_default_str();
  graph_cmd->add_option("-o,--edges-out", gr_edges, "edge TSV output")
      ->required();
  graph_cmd->add_option("--nodes-out", gr_nodes, "node sidecar output")
      ->required();

  // ---- walk ----
  auto* walk_cmd =
      app.add_subcommand("walk", "sample biased random walks from a graph dump");
  std::string wk_edges, wk_nodes, wk_out;
  WalkFlags wk_flags;
  walk_cmd->add_option("--graph", wk_edges, "edge TSV from `graph`")
      ->required();
  walk_cmd->add_option("--nodes", wk_nodes, "node sidecar from `graph`")
      ->required();
  wk_flags.attach(walk_cmd, "");
  walk_cmd->add_option("-o,--out", wk_out, "walk output path")->required();

  // ---- train ----
  auto* train_cmd = app.add_subcommand(
      "train", "graph -> walks -> embeddings from an interaction corpus");
  std::string tr_in, tr_walks_in, tr_out, tr_pairing = "all_pairs";
  std::string tr_graph_out, tr_nodes_out, tr_walks_out;
  uint32_t tr_pair_window = 5;
  WalkFlags tr_walk;
  SgnsFlags tr_sgns;
  train_cmd->add_option("-i,--input", tr_in, "corpus path");
  train_cmd->add_option("--walks", tr_walks_in,
                        "train directly from a walk dump instead");
  train_cmd->add_option("--pairing", tr_pairing, "all_pairs|adjacent|windowed")
      ->capture_default_str();
  train_cmd->add_option("--pair-window", tr_pair_window,
                        "window for --pairing windowed")
      ->capture_default_str();
  tr_walk.attach(train_cmd, "10 per node");
  tr_sgns.attach(train_cmd);
  train_cmd->add_option("--graph-out", tr_graph_out, "optional edge dump");
  train_cmd->add_option("--nodes-out", tr_nodes_out, "optional node dump");
  train_cmd->add_option("--walks-out", tr_walks_out, "optional walk dump");
  train_cmd->add_option("-o,--out", tr_out, "embedding output path")
      ->required();

  // ---- train-baseline ----
  auto* base_cmd = app.add_subcommand(
      "train-baseline", "embeddings straight from basket windows");
  std::string bl_in, bl_out, bl_window = "10";
  SgnsFlags bl_sgns;
  base_cmd->add_option("-i,--input", bl_in, "corpus path")->required();
  base_cmd->add_option("--basket-window", bl_window,
                       "basket window: positive integer or `full`")
      ->capture_default_str();
  bl_sgns.attach(base_cmd);
  base_cmd->add_option("-o,--out", bl_out, "embedding output path")
      ->required();

  // ---- topk ----
  auto* topk_cmd =
      app.add_subcommand("topk", "cosine top-k query over an embedding file");
  std::string tk_model, tk_item;
  uint32_t tk_k = 10;
  topk_cmd->add_option("-m,--model", tk_model, "embedding file")->required();
  topk_cmd->add_option("--item", tk_item, "query item token")->required();
  topk_cmd->add_option("-k", tk_k, "result count")->capture_default_str();

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand(
      "eval", "genre-match precision@k for an embedding file");
  std::string ev_model, ev_genres, ev_ks = "10,50,100,200", ev_out;
  uint32_t ev_samples = 200;
  eval_cmd->add_option("-m,--model", ev_model, "embedding file")->required();
  eval_cmd->add_option("--genres", ev_genres, "genre TSV")->required();
  eval_cmd->add_option("--ks", ev_ks, "comma list of k values")
      ->capture_default_str();
  eval_cmd->add_option("--samples", ev_samples, "query sample count")
      ->capture_default_str();
  eval_cmd->add_option("-o,--out", ev_out, "report TSV (default: stdout)");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand(
      "bench", "walk pipeline vs baseline timing sweep on synthetic data");
  std::string bn_items = "5000", bn_users = "10000,20000,40000";
  std::string bn_density = "0.001", bn_out, bn_window = "10";
  uint64_t bn_budget_mb = 4096;
  WalkFlags bn_walk;
  SgnsFlags bn_sgns;
  bench_cmd->add_option("--items", bn_items, "comma list of item counts")
      ->capture_default_str();
  bench_cmd->add_option("--users", bn_users, "comma list of user counts")
      ->capture_default_str();
  bench_cmd->add_option("--density", bn_density, "comma list of densities")
      ->capture_default_str();
  bn_walk.attach(bench_cmd, "one per node");
  bn_sgns.attach(bench_cmd);
  bench_cmd->add_option("--baseline-window", bn_window,
                        "baseline basket window or `full`")
      ->capture_default_str();
  bench_cmd->add_option("--mem-budget-mb", bn_budget_mb,
                        "skip configurations above this estimate")
      ->capture_default_str();
  bench_cmd->add_option("-o,--out", bn_out, "report TSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }

  if (*synth) {
    if (sy_genres > 0) {
      GenreCorpusParams params;
      params.num_items = sy_items;
      params.num_genres = sy_genres;
      params.num_users = sy_users;
      params.within_genre_prob = sy_within;
      params.basket_size = sy_basket;
      params.seed = seed;
      auto [corpus, genres] = synth_genre_corpus(params);
      write_corpus(corpus, sy_out);
      if (!sy_genres_out.empty()) {
        std::ofstream out(sy_genres_out, std::ios::binary);
        if (!out) throw DataError("cannot write: " + sy_genres_out);
        for (uint32_t v = 0; v < corpus.num_items(); ++v) {
          out << corpus.items.token(v);
          const auto gs = genres.of(v);
          for (size_t i = 0; i < gs.size(); ++i)
            out << (i == 0 ? '\t' : ',') << gs[i];
          out << '\n';
        }
      }
      print_summary({{"command", "synth"},
                     {"items", std::to_string(corpus.num_items())},
                     {"users", std::to_string(corpus.baskets.size())},
                     {"interactions", std::to_string(corpus.token_count)},
                     {"genres", std::to_string(sy_genres)},
                     {"out", sy_out}});
    } else {
      const auto corpus = synth_corpus(sy_items, sy_users, sy_density, seed);
      write_corpus(corpus, sy_out);
      print_summary({{"command", "synth"},
                     {"items", std::to_string(corpus.num_items())},
                     {"users", std::to_string(corpus.baskets.size())},
                     {"interactions", std::to_string(corpus.token_count)},
                     {"out", sy_out}});
    }
    return 0;
  }

  if (*graph_cmd) {
    const auto corpus = load_corpus(gr_in, parse_format(format));
    const auto graph =
        build_graph(corpus, parse_pairing(gr_pairing, gr_window));
    save_graph(graph, corpus.items, gr_edges, gr_nodes);
    print_summary({{"command", "graph"},
                   {"nodes", std::to_string(graph.num_nodes())},
                   {"edges", std::to_string(graph.num_edges())},
                   {"total_weight", std::to_string(graph.total_edge_weight())},
                   {"out", gr_edges}});
    return 0;
  }

  if (*walk_cmd) {
    auto [graph, vocab] = load_graph(wk_edges, wk_nodes);
    wk_flags.finish(seed, threads, graph.num_nodes());
    const auto walks = generate_walks(graph, wk_flags.cfg);
    save_walks(walks, vocab, wk_out);
    print_summary({{"command", "walk"},
                   {"nodes", std::to_string(graph.num_nodes())},
                   {"walks", std::to_string(walks.walks.size())},
                   {"tokens", std::to_string(walks.token_count())},
                   {"out", wk_out}});
    return 0;
  }

  if (*train_cmd) {
    tr_sgns.finish(seed, threads);
    if (!tr_walks_in.empty()) {
      auto [sequences, vocab] = load_walks(tr_walks_in);
      TrainStats stats;
      const auto model = train(sequences, vocab, tr_sgns.cfg, &stats);
      export_model(tr_sgns.average ? average_in_out(model) : model, tr_out);
      print_summary({{"command", "train"},
                     {"items", std::to_string(model.num_items())},
                     {"walks", std::to_string(sequences.size())},
                     {"pairs", std::to_string(stats.pairs_processed)},
                     {"out", tr_out}});
      return 0;
    }
    if (tr_in.empty())
      throw ArgumentError("train: need -i corpus or --walks walk file");
    const auto corpus = load_corpus(tr_in, parse_format(format));
    const auto graph =
        build_graph(corpus, parse_pairing(tr_pairing, tr_pair_window));
    if (!tr_graph_out.empty() || !tr_nodes_out.empty()) {
      if (tr_graph_out.empty() || tr_nodes_out.empty())
        throw ArgumentError("train: --graph-out and --nodes-out go together");
      save_graph(graph, corpus.items, tr_graph_out, tr_nodes_out);
    }
    tr_walk.finish(seed, threads, graph.num_nodes());
    const auto walks = generate_walks(graph, tr_walk.cfg);
    if (!tr_walks_out.empty()) save_walks(walks, corpus.items, tr_walks_out);
    TrainStats stats;
    const auto model = train(walks, corpus.items, tr_sgns.cfg, &stats);
    export_model(tr_sgns.average ? average_in_out(model) : model, tr_out);
    print_summary({{"command", "train"},
                   {"items", std::to_string(model.num_items())},
                   {"walks", std::to_string(walks.walks.size())},
                   {"tokens", std::to_string(walks.token_count())},
                   {"pairs", std::to_string(stats.pairs_processed)},
                   {"out", tr_out}});
    return 0;
  }

  if (*base_cmd) {
    bl_sgns.finish(seed, threads);
    const auto corpus = load_corpus(bl_in, parse_format(format));
    TrainStats stats;
    const auto model = train_item2vec(corpus, bl_sgns.cfg,
                                      parse_baseline_window(bl_window), &stats);
    export_model(bl_sgns.average ? average_in_out(model) : model, bl_out);
    print_summary({{"command", "train-baseline"},
                   {"items", std::to_string(model.num_items())},
                   {"pairs", std::to_string(stats.pairs_processed)},
                   {"out", bl_out}});
    return 0;
  }

  if (*topk_cmd) {
    const auto model = import_model(tk_model);
    const auto ranked = topk_similar(model, tk_item, tk_k);
    char buf[64];
    for (const auto& [token, score] : ranked) {
      std::snprintf(buf, sizeof(buf), "%.6f", score);
      std::cout << token << '\t' << buf << '\n';
    }
    print_summary({{"command", "topk"},
                   {"item", tk_item},
                   {"k", std::to_string(tk_k)},
                   {"results", std::to_string(ranked.size())}});
    return 0;
  }

  if (*eval_cmd) {
    const auto model = import_model(ev_model);
    const auto genres = load_genres(ev_genres, model.vocab);
    const auto ks = parse_list<uint32_t>(ev_ks, [](const std::string& s) {
      return static_cast<uint32_t>(std::stoul(s));
    });
    auto report = precision_at_k(model, genres, ks, ev_samples, seed);
    std::vector<EvalReport> rows{report};
    if (ev_out.empty()) {
      write_report(rows, std::cout);
    } else {
      std::ofstream out(ev_out, std::ios::binary);
      if (!out) throw DataError("cannot write: " + ev_out);
      write_report(rows, out);
    }
    std::vector<std::pair<std::string, std::string>> kv{
        {"command", "eval"},
        {"samples", std::to_string(ev_samples)},
        {"labeled", std::to_string(genres.labeled_count())}};
    for (const auto& [k, p] : report.precision)
      kv.emplace_back("p@" + std::to_string(k), fmt(p));
    print_summary(kv);
    return 0;
  }

  if (*bench_cmd) {
    BenchConfig cfg;
    cfg.items = parse_list<uint32_t>(bn_items, [](const std::string& s) {
      return static_cast<uint32_t>(std::stoul(s));
    });
    cfg.users = parse_list<uint32_t>(bn_users, [](const std::string& s) {
      return static_cast<uint32_t>(std::stoul(s));
    });
    cfg.densities = parse_list<double>(
        bn_density, [](const std::string& s) { return std::stod(s); });
    bn_walk.cfg.seed = seed;
    bn_walk.cfg.threads = threads;
    cfg.walk = bn_walk.cfg;  // total_walks 0 = one per node, set per graph
    bn_sgns.finish(seed, threads);
    cfg.sgns = bn_sgns.cfg;
    cfg.baseline_window = parse_baseline_window(bn_window);
    cfg.seed = seed;
    cfg.mem_budget_bytes = bn_budget_mb << 20;
    const auto reports = bench_scaling(cfg);
    std::ofstream out(bn_out, std::ios::binary);
    if (!out) throw DataError("cannot write: " + bn_out);
    write_report(reports, out);
    print_summary({{"command", "bench"},
                   {"rows", std::to_string(reports.size())},
                   {"out", bn_out}});
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const itemwalk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
