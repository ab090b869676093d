#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace w2w {

enum class TokenizerMode { kGeneric, kPretokenized };

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::kGeneric;
  bool lowercase = false;
  // Pairs with more tokens than this on either side are dropped.
  std::optional<std::size_t> max_tokens_per_side;
};

struct SentencePair {
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
  std::size_t line_number = 0;  // 1-based
};

struct SkipStats {
  std::uint64_t empty_side = 0;
  std::uint64_t over_length = 0;
  std::uint64_t malformed = 0;
  std::uint64_t total_read = 0;

  bool operator==(const SkipStats&) const = default;
};

// True if `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

// Splits one line into tokens.
//
// Pretokenized mode returns the maximal runs of non-whitespace characters.
// Generic mode additionally peels Unicode punctuation (general category P*)
// off both edges of each run, one character per token; punctuation inside a
// run ("don't", "a.b") stays attached. Whitespace is the Unicode White_Space
// property. `line` must be valid UTF-8.
std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerConfig& config);

using WarningSink = std::function<void(const std::string&)>;

// Default sink: prints "warning: <msg>" to stderr.
WarningSink stderr_warnings();

// Reads two line-aligned files as a stream of tokenized sentence pairs.
//
// Pairs where either side is empty after tokenization, or too long, are
// skipped and counted. Lines that are not valid UTF-8 are counted as
// malformed. If one file runs out before the other, the stream ends at the
// shorter file, one malformed record is counted and a warning is emitted.
// CR before LF is stripped.
class ParallelReader {
 public:
  // Throws IoError naming the path if either file cannot be opened.
  ParallelReader(const std::filesystem::path& src_path,
                 const std::filesystem::path& tgt_path,
                 TokenizerConfig config,
                 WarningSink warn = stderr_warnings());

  ParallelReader(const ParallelReader&) = delete;
  ParallelReader& operator=(const ParallelReader&) = delete;
  ParallelReader(ParallelReader&&) = default;
  ParallelReader& operator=(ParallelReader&&) = default;

  // Next kept pair, or nullopt at end of stream.
  std::optional<SentencePair> next();

  // Reads up to `max_pairs` kept pairs into `out` (cleared first). Returns
  // false once the stream is exhausted and nothing was read.
  bool next_batch(std::size_t max_pairs, std::vector<SentencePair>& out);

  const SkipStats& stats() const { return stats_; }

 private:
  std::filesystem::path src_path_;
  std::filesystem::path tgt_path_;
  std::ifstream src_;
  std::ifstream tgt_;
  TokenizerConfig config_;
  WarningSink warn_;
  SkipStats stats_;
  std::size_t line_ = 0;
  bool done_ = false;
};

// Convenience: drains a reader into memory.
std::vector<SentencePair> read_parallel(const std::filesystem::path& src_path,
                                        const std::filesystem::path& tgt_path,
                                        const TokenizerConfig& config,
                                        SkipStats* stats = nullptr,
                                        WarningSink warn = stderr_warnings());

}  // namespace w2w
