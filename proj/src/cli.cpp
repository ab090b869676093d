#include "w2w/cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "w2w/corpus.hpp"
#include "w2w/counts.hpp"
#include "w2w/error.hpp"
#include "w2w/eval.hpp"
#include "w2w/lexicon.hpp"
#include "w2w/scoring.hpp"

namespace w2w::cli {

namespace {

struct CorpusOptions {
  std::string src_file;
  std::string tgt_file;
  std::string from_counts;
  bool pretokenized = false;
  bool lowercase = false;
  std::size_t max_len = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct BuildOptions {
  CorpusOptions corpus;
  std::string src_lang = "src";
  std::string tgt_lang = "tgt";
  std::string method = "cpe";
  std::size_t k = 10;
  std::uint64_t m = 5000;
  std::uint64_t min_count = 1;
  std::string out;
  std::string save_counts;
};

struct QueryOptions {
  std::string lexicon;
  std::vector<std::string> words;
  std::size_t n = 10;
};

struct EvaluateOptions {
  std::string lexicon;
  std::string gold;
  std::vector<std::size_t> k_values{1, 5};
  bool verbose = false;
};

struct SampleOptions {
  CorpusOptions corpus;
  std::string side = "source";
  std::size_t n = 2000;
  double temperature = 1.25;
  std::string charset = "all";
  std::uint64_t seed = 0;
};

void add_corpus_flags(CLI::App& cmd, CorpusOptions& opts) {
  auto* src = cmd.add_option("--src", opts.src_file, "Source side of the parallel corpus, one sentence per line");
  auto* tgt = cmd.add_option("--tgt", opts.tgt_file, "Target side, line-aligned with --src");
  auto* counts = cmd.add_option("--from-counts", opts.from_counts, "Load counts from a cache written by build --save-counts");
  src->needs(tgt);
  tgt->needs(src);
  counts->excludes(src)->excludes(tgt);
  cmd.add_flag("--pretokenized", opts.pretokenized, "Input is already tokenized; split on whitespace only");
  cmd.add_flag("--lowercase", opts.lowercase, "Lowercase tokens");
  cmd.add_option("--max-len", opts.max_len, "Drop pairs with more tokens than this on either side (0 = no limit)");
  cmd.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
}

CountStore load_corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err) {
  if (!opts.from_counts.empty()) return load_counts(opts.from_counts);
  if (opts.src_file.empty()) throw InvalidInput("either --src/--tgt or --from-counts is required");

  TokenizerConfig config;
  config.mode = opts.pretokenized ? TokenizerMode::kPretokenized : TokenizerMode::kGeneric;
  config.lowercase = opts.lowercase;
  if (opts.max_len > 0) config.max_tokens_per_side = opts.max_len;
  ParallelReader reader(opts.src_file, opts.tgt_file, config,
                        [&err](const std::string& msg) { err << "warning: " << msg << '\n'; });
  CountStore store = count_stream(reader, opts.threads);
  const auto& stats = reader.stats();
  out << "lines read: " << stats.total_read << "  kept pairs: " << store.n_pairs()
      << "  skipped: empty_side=" << stats.empty_side
      << " over_length=" << stats.over_length << " malformed=" << stats.malformed << '\n';
  return store;
}

int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err) {
  CountStore store = load_corpus(opts.corpus, out, err);
  if (store.empty()) throw InvalidInput("empty corpus");
  if (!opts.save_counts.empty()) save_counts(store, opts.save_counts);
  if (opts.min_count > 1) store = prune(store, opts.min_count);

  BuildConfig config;
  config.src_lang = opts.src_lang;
  config.tgt_lang = opts.tgt_lang;
  config.method = {parse_method(opts.method), opts.m};
  config.k = opts.k;
  config.threads = opts.corpus.threads;
  const Lexicon lex = build_lexicon(store, config);
  write_lexicon(lex, std::filesystem::path(opts.out));
  out << "lexicon: " << opts.out << "  entries=" << lex.size() << "  method="
      << method_name(lex.method.kind) << " m=" << lex.method.m << " k=" << lex.k
      << "  n_pairs=" << lex.n_pairs << "  version=" << kToolVersion << '\n';
  return kOk;
}

int cmd_query(const QueryOptions& opts, std::ostream& out) {
  const Lexicon lex = read_lexicon(std::filesystem::path(opts.lexicon));
  int status = kOk;
  for (const auto& word : opts.words) {
    out << word << '\t';
    const auto hits = query(lex, word, opts.n);
    if (!hits) {
      out << "<NOT FOUND>\n";
      status = kSoftMiss;
      continue;
    }
    for (std::size_t i = 0; i < hits->size(); ++i) out << (i ? "," : "") << (*hits)[i].word;
    out << '\n';
  }
  return status;
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  const Lexicon lex = read_lexicon(std::filesystem::path(opts.lexicon));
  const GoldDictionary gold = load_gold(
      std::filesystem::path(opts.gold), [&err](const std::string& msg) { err << "warning: " << msg << '\n'; });
  const EvalReport report = precision_at_k(lex, gold, opts.k_values);
  if (opts.verbose) err << describe(report);
  out << summary_line(report) << '\n';
  return kOk;
}

int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err) {
  std::ostringstream corpus_log;
  const CountStore store = load_corpus(opts.corpus, corpus_log, err);
  err << corpus_log.str();
  SamplerConfig cfg;
  cfg.n = opts.n;
  cfg.temperature = opts.temperature;
  cfg.charset = parse_charset(opts.charset);
  cfg.seed = opts.seed;
  const Side side = opts.side == "target" ? Side::kTarget : Side::kSource;
  for (const auto& word : sample_test_words(store, side, cfg, [&err](const std::string& msg) {
         err << "warning: " << msg << '\n';
       })) {
    out << word << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilingual lexicon extraction from parallel corpora", "w2w"};
  app.require_subcommand(1);

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build a top-k lexicon from a parallel corpus");
  add_corpus_flags(*build_cmd, build.corpus);
  build_cmd->add_option("--src-lang", build.src_lang, "Source language label");
  build_cmd->add_option("--tgt-lang", build.tgt_lang, "Target language label");
  build_cmd->add_option("--method", build.method, "Scoring method")
      ->check(CLI::IsMember({"cooc", "pmi", "cpe"}));
  build_cmd->add_option("--k", build.k, "Translations kept per source word")->check(CLI::PositiveNumber);
  build_cmd->add_option("--m", build.m, "Confounders corrected for by cpe")->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--min-count", build.min_count, "Drop words seen in fewer sentences")
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("--out", build.out, "Output lexicon file")->required();
  build_cmd->add_option("--save-counts", build.save_counts, "Also write the count cache here");

  QueryOptions query_opts;
  auto* query_cmd = app.add_subcommand("query", "Print translations of words");
  query_cmd->add_option("lexicon", query_opts.lexicon, "Lexicon file")->required();
  query_cmd->add_option("words", query_opts.words, "Source words")->required();
  query_cmd->add_option("--n", query_opts.n, "Translations per word")->check(CLI::PositiveNumber);

  EvaluateOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("evaluate", "Precision@k of a lexicon against a gold dictionary");
  eval_cmd->add_option("lexicon", eval_opts.lexicon, "Lexicon file")->required();
  eval_cmd->add_option("gold", eval_opts.gold, "Gold dictionary, '<source> <target>' per line")->required();
  eval_cmd->add_option("--k", eval_opts.k_values, "k values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--verbose", eval_opts.verbose, "Also print the full report to stderr");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample test words by temperature-smoothed frequency");
  add_corpus_flags(*sample_cmd, sample.corpus);
  sample_cmd->add_option("--side", sample.side, "Which side to sample from")
      ->check(CLI::IsMember({"source", "target"}));
  sample_cmd->add_option("--n", sample.n, "Number of words")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--temperature", sample.temperature, "Smoothing temperature T; weight = count^(1/T)")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--charset", sample.charset,
                         "Allowed codepoints as hex ranges, e.g. 0061-007A,00E0-00FF, or 'all'");
  sample_cmd->add_option("--seed", sample.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build_cmd) return cmd_build(build, out, err);
    if (*query_cmd) return cmd_query(query_opts, out);
    if (*eval_cmd) return cmd_evaluate(eval_opts, out, err);
    if (*sample_cmd) return cmd_sample(sample, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFormat;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFormat;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return kSoftMiss;
  }
  return kUsage;
}

}  // namespace w2w::cli
