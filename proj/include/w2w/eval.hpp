#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "w2w/corpus.hpp"
#include "w2w/counts.hpp"
#include "w2w/lexicon.hpp"

namespace w2w {

// Source words mapped to their acceptable translations. Sources and targets
// keep first-appearance order; (source, target) pairs are unique.
class GoldDictionary {
 public:
  // Returns false if the pair was already present.
  bool add(std::string_view source, std::string_view target);

  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<std::string>& targets(std::string_view source) const;
  std::size_t n_sources() const { return sources_.size(); }
  std::size_t n_pairs() const { return n_pairs_; }
  // Pairs whose source and target are the same string.
  std::size_t n_degenerate_pairs() const { return n_degenerate_; }

 private:
  std::vector<std::string> sources_;
  std::unordered_map<std::string, std::vector<std::string>> targets_;
  std::size_t n_pairs_ = 0;
  std::size_t n_degenerate_ = 0;
};

// Whitespace-separated "<source> <target>" per line; blank lines ignored.
// Lines with any other number of fields are skipped and their line numbers
// reported through `warn`. Throws IoError if unreadable and
// InvalidInput("empty gold dictionary") if no pair is left.
GoldDictionary load_gold(std::istream& in, const WarningSink& warn = stderr_warnings());
GoldDictionary load_gold(const std::filesystem::path& path,
                         const WarningSink& warn = stderr_warnings());

struct EvalReport {
  std::vector<std::size_t> k_values;
  std::map<std::size_t, double> precision;
  std::size_t n_test = 0;
  std::size_t n_in_lexicon = 0;
  double coverage = 0.0;
  std::size_t n_degenerate_pairs = 0;
};

// P@k = share of gold sources with at least one gold translation among the
// first k lexicon translations. Sources missing from the lexicon are misses;
// coverage reports how many were present.
EvalReport precision_at_k(const Lexicon& lex, const GoldDictionary& gold,
                          const std::vector<std::size_t>& k_values);

// "P@1=<f> P@5=<f> coverage=<f> n=<int>" with one P@k field per k value.
std::string summary_line(const EvalReport& report);
// Multi-line human-readable report.
std::string describe(const EvalReport& report);

// Inclusive codepoint range.
struct CodepointRange {
  std::uint32_t first;
  std::uint32_t last;
};

// Parses "0041-005A,0061-007A,AC00" (hex, comma separated). "all" is the
// whole codepoint space.
std::vector<CodepointRange> parse_charset(std::string_view spec);

enum class Side { kSource, kTarget };

struct SamplerConfig {
  std::size_t n = 2000;
  double temperature = 1.25;
  std::vector<CodepointRange> charset{{0, 0x10FFFF}};
  std::uint64_t seed = 0;
};

// True if every codepoint of `word` lies in one of the ranges.
bool in_charset(std::string_view word, const std::vector<CodepointRange>& charset);

struct WeightedWord {
  std::string word;
  double weight;  // normalized
};

// Eligible words of one side in vocabulary order with weights
// count^(1/T) / sum.
std::vector<WeightedWord> sampling_weights(const CountStore& store, Side side,
                                           const SamplerConfig& cfg);

// Draws min(n, eligible) distinct words, one at a time, each with
// probability proportional to its weight among the words not yet drawn.
// Uses a 64-bit Mersenne Twister seeded with cfg.seed; uniform variates are
// the top 53 bits of each output. Warns when fewer than n words are eligible
// and throws InvalidInput naming the charset when none are.
std::vector<std::string> sample_test_words(const CountStore& store, Side side,
                                           const SamplerConfig& cfg,
                                           const WarningSink& warn = stderr_warnings());

}  // namespace w2w
