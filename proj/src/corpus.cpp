#include "w2w/corpus.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <iostream>
#include <utility>

#include "w2w/error.hpp"

namespace w2w {

namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

// Decodes valid UTF-8. Ill-formed sequences become U+FFFD.
std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(begin),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string emit(std::string_view line, const std::vector<CodePoint>& cps,
                 std::size_t from, std::size_t to, bool lowercase) {
  if (!lowercase) {
    return std::string(line.substr(cps[from].begin,
                                   cps[to - 1].end - cps[from].begin));
  }
  std::string out;
  for (std::size_t i = from; i < to; ++i) append_utf8(out, u_tolower(cps[i].value));
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  const auto cps = decode(line);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (u_isUWhiteSpace(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < cps.size() && !u_isUWhiteSpace(cps[run_end].value)) ++run_end;

    if (config.mode == TokenizerMode::kPretokenized) {
      tokens.push_back(emit(line, cps, i, run_end, config.lowercase));
    } else {
      std::size_t lo = i;
      while (lo < run_end && u_ispunct(cps[lo].value)) {
        tokens.push_back(emit(line, cps, lo, lo + 1, config.lowercase));
        ++lo;
      }
      std::size_t hi = run_end;
      while (hi > lo && u_ispunct(cps[hi - 1].value)) --hi;
      if (lo < hi) tokens.push_back(emit(line, cps, lo, hi, config.lowercase));
      for (std::size_t p = hi; p < run_end; ++p)
        tokens.push_back(emit(line, cps, p, p + 1, config.lowercase));
    }
    i = run_end;
  }
  return tokens;
}

WarningSink stderr_warnings() {
  return [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
}

ParallelReader::ParallelReader(const std::filesystem::path& src_path,
                               const std::filesystem::path& tgt_path,
                               TokenizerConfig config, WarningSink warn)
    : src_path_(src_path),
      tgt_path_(tgt_path),
      src_(src_path, std::ios::binary),
      tgt_(tgt_path, std::ios::binary),
      config_(std::move(config)),
      warn_(std::move(warn)) {
  if (!src_) throw IoError("cannot open source corpus: " + src_path.string());
  if (!tgt_) throw IoError("cannot open target corpus: " + tgt_path.string());
}

std::optional<SentencePair> ParallelReader::next() {
  std::string src_line;
  std::string tgt_line;
  while (!done_) {
    const bool have_src = static_cast<bool>(std::getline(src_, src_line));
    const bool have_tgt = static_cast<bool>(std::getline(tgt_, tgt_line));
    if (src_.bad()) throw IoError("read failed: " + src_path_.string());
    if (tgt_.bad()) throw IoError("read failed: " + tgt_path_.string());
    if (!have_src && !have_tgt) {
      done_ = true;
      break;
    }
    ++line_;
    ++stats_.total_read;
    if (have_src != have_tgt) {
      done_ = true;
      ++stats_.malformed;
      if (warn_) {
        warn_("line count mismatch: " +
              (have_src ? tgt_path_.string() : src_path_.string()) +
              " ends at line " + std::to_string(line_ - 1) +
              "; remaining lines of " +
              (have_src ? src_path_.string() : tgt_path_.string()) +
              " ignored");
      }
      break;
    }
    strip_cr(src_line);
    strip_cr(tgt_line);
    if (!is_valid_utf8(src_line) || !is_valid_utf8(tgt_line)) {
      ++stats_.malformed;
      continue;
    }
    SentencePair pair;
    pair.source_tokens = tokenize(src_line, config_);
    pair.target_tokens = tokenize(tgt_line, config_);
    pair.line_number = line_;
    if (pair.source_tokens.empty() || pair.target_tokens.empty()) {
      ++stats_.empty_side;
      continue;
    }
    if (config_.max_tokens_per_side &&
        (pair.source_tokens.size() > *config_.max_tokens_per_side ||
         pair.target_tokens.size() > *config_.max_tokens_per_side)) {
      ++stats_.over_length;
      continue;
    }
    return pair;
  }
  return std::nullopt;
}

bool ParallelReader::next_batch(std::size_t max_pairs,
                                std::vector<SentencePair>& out) {
  out.clear();
  while (out.size() < max_pairs) {
    auto pair = next();
    if (!pair) break;
    out.push_back(std::move(*pair));
  }
  return !out.empty();
}

std::vector<SentencePair> read_parallel(const std::filesystem::path& src_path,
                                        const std::filesystem::path& tgt_path,
                                        const TokenizerConfig& config,
                                        SkipStats* stats, WarningSink warn) {
  ParallelReader reader(src_path, tgt_path, config, std::move(warn));
  std::vector<SentencePair> pairs;
  while (auto pair = reader.next()) pairs.push_back(std::move(*pair));
  if (stats) *stats = reader.stats();
  return pairs;
}

}  // namespace w2w
