#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "w2w/counts.hpp"
#include "w2w/scoring.hpp"

namespace w2w {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct Translation {
  std::string word;
  double score;

  bool operator==(const Translation&) const = default;
};

struct LexiconEntry {
  std::string source;
  std::vector<Translation> translations;  // rank order, 1..k items

  bool operator==(const LexiconEntry&) const = default;
};

// Top-k translations for every source word of a corpus.
class Lexicon {
 public:
  std::string src_lang;
  std::string tgt_lang;
  Method method;
  std::size_t k = 10;
  Count n_pairs = 0;

  // Appends an entry. Throws InvalidInput on a duplicate source word, an
  // empty translation list, or more than k translations.
  void add_entry(LexiconEntry entry);

  // Entries in insertion order (source-vocabulary id order for built lexicons).
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const LexiconEntry* find(std::string_view source) const;

  bool operator==(const Lexicon& other) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

struct BuildConfig {
  std::string src_lang = "src";
  std::string tgt_lang = "tgt";
  Method method;
  std::size_t k = 10;
  unsigned threads = 1;
};

// Scores every source word of the store and keeps its top k. Source words
// are scored concurrently on `threads` workers; the result does not depend
// on the thread count. Throws InvalidInput("empty corpus") for an empty store.
Lexicon build_lexicon(const CountStore& store, const BuildConfig& config);

// Score text: 9 significant digits, trailing zeros kept ("%#.9g").
std::string format_score(double score);

// Lexicon file v1. One header line, then
// <source>\t<rank>\t<target>\t<score> per translation.
void write_lexicon(const Lexicon& lex, std::ostream& out);
void write_lexicon(const Lexicon& lex, const std::filesystem::path& path);

// Throws FormatError for a bad header and for integrity problems (rank gaps,
// duplicate ranks, split or truncated records), naming the line number.
Lexicon read_lexicon(std::istream& in, const std::string& name = "<stream>");
Lexicon read_lexicon(const std::filesystem::path& path);

// First min(n, available) translations of `word`; nullopt if the word has no
// entry.
std::optional<std::vector<Translation>> query(const Lexicon& lex,
                                              std::string_view word,
                                              std::size_t n);

}  // namespace w2w
