// Command-line front end: `rank`, `evaluate` and `export-plan` over TSV
// corpora, text-format embedding tables and TSV golden links.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wassret/corpus.hpp"
#include "wassret/embeddings.hpp"
#include "wassret/error.hpp"
#include "wassret/kernels.hpp"
#include "wassret/retrieval.hpp"
#include "wassret/transport.hpp"
#include "wassret/weighting.hpp"

namespace {

using namespace wassret;

struct CommonOptions {
  std::string queries_path;
  std::string targets_path;
  std::string query_embeddings;
  std::string target_embeddings;
  std::string query_stopwords;
  std::string target_stopwords;
  std::string query_rejections;
  std::string target_rejections;
  std::string method = "entro_wass";
  std::string weighting = "idf";
  std::string oov_mode = "off";
  int oov_threshold = 1;
  bool oov_collapse = false;
  std::string tie_break = "seeded-random";
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  int max_iter = 50;
  double tolerance = 1e-9;
  bool stabilized = true;
  std::string ranking_value = "transport_cost";
  unsigned workers = 1;
  std::size_t top_k = 10;
};

void add_common_options(CLI::App& cmd, CommonOptions& opt,
                        bool need_targets_only = false) {
  if (!need_targets_only) {
    cmd.add_option("--queries", opt.queries_path, "Query corpus TSV (id<TAB>text)")
        ->required()
        ->check(CLI::ExistingFile);
  }
  cmd.add_option("--targets", opt.targets_path, "Target corpus TSV (id<TAB>text)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--query-embeddings", opt.query_embeddings,
                 "Query-language embedding file (`count dim` header)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--target-embeddings", opt.target_embeddings,
                 "Target-language embedding file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--query-stopwords", opt.query_stopwords,
                 "Stopword file for the query language (one word per line)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--target-stopwords", opt.target_stopwords,
                 "Stopword file for the target language")
      ->check(CLI::ExistingFile);
  cmd.add_option("--query-rejections", opt.query_rejections,
                 "Write rejected query documents to this TSV");
  cmd.add_option("--target-rejections", opt.target_rejections,
                 "Write rejected target documents to this TSV");
  cmd.add_option("--method", opt.method, "Distance: wass, entro_wass or nbow")
      ->default_val(opt.method)
      ->check(CLI::IsMember({"wass", "entro_wass", "nbow"}));
  cmd.add_option("--weighting", opt.weighting, "Term weighting: tf or idf")
      ->default_val(opt.weighting)
      ->check(CLI::IsMember({"tf", "idf"}));
  cmd.add_option("--oov-mode", opt.oov_mode,
                 "OOV fallback: off or levenshtein")
      ->default_val(opt.oov_mode)
      ->check(CLI::IsMember({"off", "levenshtein"}));
  cmd.add_option("--oov-threshold", opt.oov_threshold,
                 "Edit-distance threshold t for the OOV fallback")
      ->default_val(opt.oov_threshold)
      ->check(CLI::NonNegativeNumber);
  cmd.add_flag("--oov-collapse", opt.oov_collapse,
               "Collapse identical surface forms across the two tables");
  cmd.add_option("--tie-break", opt.tie_break,
                 "OOV candidate tie-break: lexicographic or seeded-random")
      ->default_val(opt.tie_break)
      ->check(CLI::IsMember({"lexicographic", "seeded-random"}));
  cmd.add_option("--seed", opt.seed, "Seed for all randomized choices")
      ->default_val(opt.seed);
  cmd.add_option("--epsilon", opt.epsilon,
                 "Entropic regularization weight for entro_wass")
      ->default_val(opt.epsilon)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-iter", opt.max_iter, "Sinkhorn iteration budget")
      ->default_val(opt.max_iter)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--tolerance", opt.tolerance,
                 "Sinkhorn stop when the marginal violation drops below")
      ->default_val(opt.tolerance)
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--stabilized,!--no-stabilized", opt.stabilized,
               "Log-domain Sinkhorn updates (default on)");
  cmd.add_option("--ranking-value", opt.ranking_value,
                 "entro_wass value used for ranking")
      ->default_val(opt.ranking_value)
      ->check(CLI::IsMember({"transport_cost", "regularized_objective"}));
  cmd.add_option("--workers", opt.workers,
                 "Worker threads for per-query distance computation")
      ->default_val(opt.workers)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--top-k", opt.top_k,
                 "Entries kept per query in outputs (0 = all)")
      ->default_val(opt.top_k);
}

RetrievalConfig to_config(const CommonOptions& opt) {
  RetrievalConfig config;
  config.method = *parse_method(opt.method);
  config.weighting = *parse_weighting(opt.weighting);
  config.oov.mode =
      opt.oov_mode == "off" ? OovMode::Off : OovMode::Levenshtein;
  config.oov.threshold = opt.oov_threshold;
  config.oov.collapse = opt.oov_collapse;
  config.oov.tie_break = opt.tie_break == "lexicographic"
                             ? TieBreak::Lexicographic
                             : TieBreak::SeededRandom;
  config.oov.seed = opt.seed;
  config.sinkhorn.epsilon = opt.epsilon;
  config.sinkhorn.max_iter = opt.max_iter;
  config.sinkhorn.tolerance = opt.tolerance;
  config.sinkhorn.stabilized = opt.stabilized;
  config.ranking_value = opt.ranking_value == "transport_cost"
                             ? RankingValue::TransportCost
                             : RankingValue::RegularizedObjective;
  config.workers = opt.workers;
  config.top_k = opt.top_k == 0 ? static_cast<std::size_t>(-1) : opt.top_k;
  return config;
}

struct Pipeline {
  Corpus queries;
  Corpus targets;
  EmbeddingTable query_table;
  EmbeddingTable target_table;
};

Pipeline load_pipeline(const CommonOptions& opt, bool with_queries = true) {
  Pipeline p;
  StopwordSet query_stop, target_stop;
  if (!opt.query_stopwords.empty()) {
    query_stop = load_stopwords(opt.query_stopwords);
  }
  if (!opt.target_stopwords.empty()) {
    target_stop = load_stopwords(opt.target_stopwords);
  }

  if (with_queries) {
    CorpusBuild qb =
        build_corpus(load_raw_corpus(opt.queries_path, "query"), query_stop);
    if (!opt.query_rejections.empty()) {
      write_rejection_log(opt.query_rejections, qb.rejected);
    }
    for (const Rejection& r : qb.rejected) {
      std::cerr << "rejected query document " << r.id << ": " << r.reason
                << "\n";
    }
    p.queries = std::move(qb.corpus);
  }

  CorpusBuild tb =
      build_corpus(load_raw_corpus(opt.targets_path, "target"), target_stop);
  if (!opt.target_rejections.empty()) {
    write_rejection_log(opt.target_rejections, tb.rejected);
  }
  for (const Rejection& r : tb.rejected) {
    std::cerr << "rejected target document " << r.id << ": " << r.reason
              << "\n";
  }
  p.targets = std::move(tb.corpus);

  p.query_table = load_embeddings(opt.query_embeddings, "query");
  p.target_table = load_embeddings(opt.target_embeddings, "target");
  if (opt.oov_collapse) {
    collapse_cross_lingual(p.query_table, p.target_table);
  }
  return p;
}

std::string format_distance(double d) {
  if (!std::isfinite(d)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

int cmd_rank(const CommonOptions& opt, const std::string& query_id,
             const std::string& output) {
  Pipeline p = load_pipeline(opt);
  RetrievalConfig config = to_config(opt);
  RetrievalEngine engine(p.queries, p.targets, p.query_table, p.target_table,
                         config);

  std::vector<RankedList> lists;
  if (!query_id.empty()) {
    lists.push_back(engine.rank_by_id(query_id));
  } else {
    for (const Document& doc : p.queries.documents) {
      lists.push_back(engine.rank(doc));
    }
  }
  for (const std::string& id : engine.failed_targets()) {
    std::cerr << "target document " << id
              << " could not be embedded; ranked at +inf\n";
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw DataError("cannot write output file: " + output);
    out = &file;
  }
  for (const RankedList& list : lists) {
    const std::size_t keep = std::min(config.top_k, list.entries.size());
    for (std::size_t k = 0; k < keep; ++k) {
      *out << list.query_id << '\t' << (k + 1) << '\t'
           << list.entries[k].doc_id << '\t'
           << format_distance(list.entries[k].distance) << '\n';
    }
  }
  return 0;
}

int cmd_evaluate(const CommonOptions& opt, const std::string& golden_path,
                 const std::string& output, const std::string& summary_path,
                 bool emit_timings) {
  Pipeline p = load_pipeline(opt);
  GoldenLinks golden = load_golden_links(golden_path);
  RetrievalConfig config = to_config(opt);

  EvaluationReport report = evaluate(
      p.queries, p.targets, golden, p.query_table, p.target_table, config,
      std::filesystem::path(opt.queries_path).filename().string(),
      std::filesystem::path(opt.targets_path).filename().string());

  if (!output.empty()) {
    std::ofstream file(output);
    if (!file) throw DataError("cannot write report: " + output);
    file << report_to_json(report, emit_timings);
  }
  if (!summary_path.empty()) {
    std::ofstream file(summary_path);
    if (!file) throw DataError("cannot write summary: " + summary_path);
    file << report_summary_grid(report);
  }
  std::cerr << "evaluated " << report.num_queries << " queries against "
            << report.num_targets << " targets in " << report.wall_seconds
            << "s (" << report.unresolved_words << " unresolved words)\n";
  std::printf("mrr=%.4f\n", report.mrr_value);
  return 0;
}

int cmd_export_plan(const CommonOptions& opt, const std::string& query_id,
                    const std::string& target_id, const std::string& output,
                    const std::vector<double>& epsilon_sweep, bool exact,
                    const std::string& coords_path) {
  Pipeline p = load_pipeline(opt);
  RetrievalConfig config = to_config(opt);

  const Document* query = p.queries.find(query_id);
  if (query == nullptr) throw DataError("unknown query id '" + query_id + "'");
  const Document* target = p.targets.find(target_id);
  if (target == nullptr) {
    throw DataError("unknown target id '" + target_id + "'");
  }

  IdfMap query_idf, target_idf;
  if (config.weighting == Weighting::Idf) {
    query_idf = smoothed_idf(p.queries);
    target_idf = smoothed_idf(p.targets);
  }
  DiscreteDistribution qdist =
      make_weights(*query, query_idf, config.weighting == Weighting::Idf);
  DiscreteDistribution tdist =
      make_weights(*target, target_idf, config.weighting == Weighting::Idf);

  EmbeddedDistribution qe =
      embed_distribution(qdist, p.query_table, config.oov);
  EmbeddedDistribution te =
      embed_distribution(tdist, p.target_table, config.oov);
  prune_embedded(qe, p.query_table.dim);
  prune_embedded(te, p.target_table.dim);
  const CostMatrix A =
      cost_matrix(qe.vectors, qe.dist.words.size(), te.vectors,
                  te.dist.words.size(), p.query_table.dim);

  if (!coords_path.empty()) {
    std::filesystem::path cp(coords_path);
    if (cp.has_parent_path()) std::filesystem::create_directories(cp.parent_path());
    std::ofstream coords(cp);
    if (!coords) throw DataError("cannot write coordinates: " + coords_path);
    auto dump = [&](const EmbeddedDistribution& e, const char* side) {
      for (std::size_t i = 0; i < e.dist.words.size(); ++i) {
        coords << side << '\t' << e.dist.words[i];
        for (std::size_t d = 0; d < p.query_table.dim; ++d) {
          coords << '\t' << format_distance(e.vectors[i * p.query_table.dim + d]);
        }
        coords << '\n';
      }
    };
    dump(qe, "src");
    dump(te, "tgt");
  }

  if (exact) {
    const TransportResult r =
        solve_exact(qe.dist.weights, te.dist.weights, A);
    export_plan(r, qe.dist.words, te.dist.words, output);
    return 0;
  }

  if (epsilon_sweep.empty()) {
    SinkhornConfig cfg = config.sinkhorn;
    const TransportResult r =
        solve_sinkhorn(qe.dist.weights, te.dist.weights, A, cfg);
    export_plan(r, qe.dist.words, te.dist.words, output);
    return 0;
  }

  // One CSV per epsilon, under the output directory.
  std::filesystem::create_directories(output);
  for (double eps : epsilon_sweep) {
    SinkhornConfig cfg = config.sinkhorn;
    cfg.epsilon = eps;
    const TransportResult r =
        solve_sinkhorn(qe.dist.weights, te.dist.weights, A, cfg);
    char name[64];
    std::snprintf(name, sizeof(name), "plan_eps%g.csv", eps);
    export_plan(r, qe.dist.words, te.dist.words,
                std::filesystem::path(output) / name);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cross-lingual document ranking with exact and entropy-regularized "
      "Wasserstein distances over word-embedding histograms"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.get_formatter()->column_width(40);

  CommonOptions rank_opt, eval_opt, plan_opt;
  std::string query_id, target_id, output, golden_path, summary_path,
      coords_path;
  std::vector<double> epsilon_sweep;
  bool emit_timings = false;
  bool exact_plan = false;

  CLI::App* rank_cmd =
      app.add_subcommand("rank", "Rank target documents for queries");
  add_common_options(*rank_cmd, rank_opt);
  rank_cmd->add_option("--query-id", query_id,
                       "Rank only this query (default: all queries)");
  rank_cmd->add_option("--output", output,
                       "Ranked list TSV (default: stdout)");

  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Rank all queries and score MRR against golden links");
  add_common_options(*eval_cmd, eval_opt);
  eval_cmd->add_option("--golden", golden_path, "TSV query_id<TAB>target_id")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--output", output, "Evaluation report JSON path");
  eval_cmd->add_option("--summary", summary_path,
                       "Plain-text summary grid path");
  eval_cmd->add_flag("--emit-timings", emit_timings,
                     "Include wall-clock timings in the report JSON");

  CLI::App* plan_cmd = app.add_subcommand(
      "export-plan", "Write the coupling matrix of one document pair as CSV");
  add_common_options(*plan_cmd, plan_opt);
  plan_cmd->add_option("--query-id", query_id, "Source document id")
      ->required();
  plan_cmd->add_option("--target-id", target_id, "Target document id")
      ->required();
  plan_cmd->add_option("--output", output,
                       "CSV path (a directory with --epsilon-sweep)")
      ->required();
  plan_cmd->add_option("--epsilon-sweep", epsilon_sweep,
                       "Comma-separated epsilon list; one CSV per value")
      ->delimiter(',');
  plan_cmd->add_flag("--exact", exact_plan,
                     "Export the exact vertex plan instead of Sinkhorn's");
  plan_cmd->add_option("--coords", coords_path,
                       "Also write support-word coordinates as TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (rank_cmd->parsed()) return cmd_rank(rank_opt, query_id, output);
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval_opt, golden_path, output, summary_path,
                          emit_timings);
    }
    return cmd_export_plan(plan_opt, query_id, target_id, output,
                           epsilon_sweep, exact_plan, coords_path);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
