#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "w2w/corpus.hpp"

namespace w2w {

using WordId = std::uint32_t;
using Count = std::uint64_t;

// Insertion-ordered bijection between words and dense ids 0, 1, 2, ...
class Vocab {
 public:
  // Returns the id of `word`, registering it if new.
  WordId add(std::string_view word);

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const Vocab& other) const { return words_ == other.words_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> ids_;
};

struct CountCell {
  WordId id;
  Count count;

  bool operator==(const CountCell&) const = default;
};

// Sparse row sorted by id, no zero counts.
using CountRow = std::vector<CountCell>;

// Sentence-level occurrence statistics of a parallel corpus.
//
// Every count uses presence semantics: a word counts once per sentence side,
// a (source, target) pair once per sentence pair, and an unordered pair of
// distinct source words once per sentence pair. The source-source table is
// stored in both directions without its diagonal; src_src(x, x) reports #(x).
class CountStore {
 public:
  CountStore() = default;

  const Vocab& src_vocab() const { return src_vocab_; }
  const Vocab& tgt_vocab() const { return tgt_vocab_; }
  Count n_pairs() const { return n_pairs_; }
  bool empty() const { return n_pairs_ == 0; }

  Count src_count(WordId x) const { return src_count_.at(x); }
  Count tgt_count(WordId y) const { return tgt_count_.at(y); }
  std::span<const Count> src_counts() const { return src_count_; }
  std::span<const Count> tgt_counts() const { return tgt_count_; }

  // #(x, y) for every target y co-occurring with x, sorted by target id.
  const CountRow& cross_row(WordId x) const { return cross_.at(x); }
  // #(x, x') for every source x' != x co-occurring with x, sorted by id.
  const CountRow& src_src_row(WordId x) const { return src_src_.at(x); }

  Count cross(WordId x, WordId y) const;
  Count src_src(WordId x, WordId other) const;

  // Id of a source word, or NotFoundError naming the word.
  WordId require_source(std::string_view word) const;

  bool operator==(const CountStore&) const = default;

 private:
  friend class CountBuilder;
  friend CountStore merge(const CountStore&, const CountStore&);
  friend CountStore prune(const CountStore&, Count);
  friend CountStore load_counts(const std::filesystem::path&);

  Vocab src_vocab_;
  Vocab tgt_vocab_;
  Count n_pairs_ = 0;
  std::vector<Count> src_count_;
  std::vector<Count> tgt_count_;
  std::vector<CountRow> cross_;
  std::vector<CountRow> src_src_;
};

// Incremental single-threaded accumulation. Vocabulary ids follow first
// appearance: source tokens of pair 1 left to right, then pair 2, ...
class CountBuilder {
 public:
  void add(const SentencePair& pair);
  void add(std::span<const std::string> source_tokens,
           std::span<const std::string> target_tokens);

  // Produces the store; the builder is left empty.
  CountStore finish();

 private:
  struct PairHash {
    std::size_t operator()(std::uint64_t key) const {
      key ^= key >> 33;
      key *= 0xff51afd7ed558ccdULL;
      key ^= key >> 33;
      return static_cast<std::size_t>(key);
    }
  };
  using PairTable = std::unordered_map<std::uint64_t, Count, PairHash>;

  CountStore store_;
  PairTable cross_;
  PairTable src_src_;
  std::vector<WordId> src_ids_;
  std::vector<WordId> tgt_ids_;
};

CountStore accumulate(std::span<const SentencePair> pairs);

// Counts of the concatenation left ++ right. Ids of `left` are kept; words
// new in `right` are appended in right's id order, so merging contiguous
// shards in stream order reproduces the single-pass ids exactly.
CountStore merge(const CountStore& left, const CountStore& right);

// Drops words with sentence frequency below `min_count` (either side) and
// every count touching them. Source words left with no co-occurring target
// are dropped as well. Ids are compacted preserving relative order; n_pairs
// is unchanged. min_count must be >= 1.
CountStore prune(const CountStore& store, Count min_count);

// Accumulates `pairs` on up to `threads` workers over contiguous shards and
// merges in order. The result equals accumulate(pairs) exactly.
CountStore accumulate_parallel(std::span<const SentencePair> pairs,
                               unsigned threads);

// Streams a reader in batches through accumulate_parallel.
CountStore count_stream(ParallelReader& reader, unsigned threads,
                        std::size_t batch_size = 1 << 16);

// TSV cache. Sections: #vocab-src, #vocab-tgt, #counts-src, #counts-tgt,
// #cross, #srcsrc, #meta n_pairs=<N>.
void save_counts(const CountStore& store, const std::filesystem::path& path);
CountStore load_counts(const std::filesystem::path& path);

}  // namespace w2w
