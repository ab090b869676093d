#include <gtest/gtest.h>

#include <random>

#include "support/random_corpus.hpp"
#include "w2w/corpus.hpp"
#include "w2w/error.hpp"

namespace w2w {
namespace {

using testing::TempDir;
using Tokens = std::vector<std::string>;

TokenizerConfig generic(bool lowercase = false) {
  return {TokenizerMode::kGeneric, lowercase, std::nullopt};
}

TokenizerConfig pretokenized() { return {TokenizerMode::kPretokenized, false, std::nullopt}; }

TEST(TokenizeTest, GenericSplitsTrailingPunctuation) {
  EXPECT_EQ(tokenize("the apple.", generic()), (Tokens{"the", "apple", "."}));
}

TEST(TokenizeTest, EmptyInput) {
  EXPECT_TRUE(tokenize("", generic()).empty());
  EXPECT_TRUE(tokenize("   \t ", generic()).empty());
  EXPECT_TRUE(tokenize("", pretokenized()).empty());
}

TEST(TokenizeTest, PretokenizedKeepsRuns) {
  EXPECT_EQ(tokenize("Don't  stop", pretokenized()), (Tokens{"Don't", "stop"}));
  EXPECT_EQ(tokenize("a.b, c!", pretokenized()), (Tokens{"a.b,", "c!"}));
}

TEST(TokenizeTest, GenericKeepsInteriorPunctuation) {
  EXPECT_EQ(tokenize("Don't stop", generic()), (Tokens{"Don't", "stop"}));
  EXPECT_EQ(tokenize("e.g. x", generic()), (Tokens{"e.g", ".", "x"}));
}

TEST(TokenizeTest, GenericPeelsEachEdgeCharacter) {
  EXPECT_EQ(tokenize("\"Hello!\"", generic()), (Tokens{"\"", "Hello", "!", "\""}));
  EXPECT_EQ(tokenize("...", generic()), (Tokens{".", ".", "."}));
}

TEST(TokenizeTest, UnicodePunctuationAndWhitespace) {
  EXPECT_EQ(tokenize("¿Qué? «oui»", generic()), (Tokens{"¿", "Qué", "?", "«", "oui", "»"}));
  // U+00A0 and U+3000 separate tokens; CJK full stop is punctuation.
  EXPECT_EQ(tokenize("a b　你好。", generic()), (Tokens{"a", "b", "你好", "。"}));
}

TEST(TokenizeTest, CasePreservedUnlessLowercasing) {
  EXPECT_EQ(tokenize("Thank You", generic()), (Tokens{"Thank", "You"}));
  EXPECT_EQ(tokenize("Thank ÉCOLE Привет", generic(true)), (Tokens{"thank", "école", "привет"}));
}

TEST(TokenizeTest, GenericIsIdempotentOnRandomLines) {
  const std::vector<std::string> pieces = {"a", "Bé", ".", ",", "'", "don't", "«", "»", "x-y",
                                           "!", " ", "  ", "\t", "(", ")", "你", "。", "3.5"};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string line;
    const auto len = rng() % 12;
    for (std::size_t i = 0; i < len; ++i) line += pieces[rng() % pieces.size()];
    for (bool lower : {false, true}) {
      const auto tokens = tokenize(line, generic(lower));
      std::string joined;
      for (std::size_t i = 0; i < tokens.size(); ++i) joined += (i ? " " : "") + tokens[i];
      ASSERT_EQ(tokenize(joined, generic(lower)), tokens) << "line: " << line;
      for (const auto& t : tokens) {
        ASSERT_FALSE(t.empty());
        ASSERT_EQ(t.find_first_of(" \t"), std::string::npos);
      }
      ASSERT_EQ(tokenize(line, generic(lower)), tokens);
    }
  }
}

TEST(Utf8Test, Validation) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("héllo 你好"));
  EXPECT_FALSE(is_valid_utf8("bad \xC3"));
  EXPECT_FALSE(is_valid_utf8("\xFF"));
}

std::vector<SentencePair> drain(const TempDir& dir, const std::string& src, const std::string& tgt,
                                SkipStats* stats, TokenizerConfig config = generic(),
                                std::vector<std::string>* warnings = nullptr) {
  return read_parallel(dir.write("src.txt", src), dir.write("tgt.txt", tgt), config, stats,
                       [warnings](const std::string& msg) {
                         if (warnings) warnings->push_back(msg);
                       });
}

TEST(ParallelReaderTest, ReadsAlignedPairs) {
  TempDir dir;
  SkipStats stats;
  const auto pairs = drain(dir, "a b\nc\n", "x\ny z\n", &stats);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].line_number, 1u);
  EXPECT_EQ(pairs[1].line_number, 2u);
  EXPECT_EQ(pairs[0].source_tokens, (Tokens{"a", "b"}));
  EXPECT_EQ(pairs[1].target_tokens, (Tokens{"y", "z"}));
  EXPECT_EQ(stats.empty_side, 0u);
  EXPECT_EQ(stats.over_length, 0u);
  EXPECT_EQ(stats.malformed, 0u);
}

TEST(ParallelReaderTest, DropsEmptySide) {
  TempDir dir;
  SkipStats stats;
  const auto pairs = drain(dir, "a\n\n", "x\ny\n", &stats);
  EXPECT_EQ(pairs.size(), 1u);
  EXPECT_EQ(stats.empty_side, 1u);
}

TEST(ParallelReaderTest, UnequalLengthsTruncateAndWarn) {
  TempDir dir;
  SkipStats stats;
  std::vector<std::string> warnings;
  const auto pairs = drain(dir, "a\nb\nc\n", "x\ny\n", &stats, generic(), &warnings);
  EXPECT_EQ(pairs.size(), 2u);
  EXPECT_EQ(stats.malformed, 1u);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_GE(stats.total_read, stats.empty_side + stats.over_length + stats.malformed);
}

TEST(ParallelReaderTest, StripsCarriageReturns) {
  TempDir dir;
  const auto pairs = drain(dir, "a b\r\nc\r\n", "x\r\ny\r\n", nullptr);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].source_tokens, (Tokens{"a", "b"}));
  EXPECT_EQ(pairs[1].target_tokens, (Tokens{"y"}));
}

TEST(ParallelReaderTest, InvalidUtf8LineIsMalformed) {
  TempDir dir;
  SkipStats stats;
  const auto pairs = drain(dir, "a\nb\xC3\nc\n", "x\ny\nz\n", &stats);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1].line_number, 3u);
  EXPECT_EQ(stats.malformed, 1u);
}

TEST(ParallelReaderTest, OverLengthDropped) {
  TempDir dir;
  SkipStats stats;
  TokenizerConfig config = generic();
  config.max_tokens_per_side = 2;
  const auto pairs = drain(dir, "a b c\nd\n", "x\ny\n", &stats, config);
  EXPECT_EQ(pairs.size(), 1u);
  EXPECT_EQ(stats.over_length, 1u);
  EXPECT_EQ(stats.total_read, 2u);
}

TEST(ParallelReaderTest, UnreadableFileNamesPath) {
  TempDir dir;
  const auto tgt = dir.write("tgt.txt", "x\n");
  try {
    ParallelReader reader(dir / "missing.txt", tgt, generic());
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.txt"), std::string::npos);
  }
}

TEST(ParallelReaderTest, StreamingTwiceIsIdentical) {
  TempDir dir;
  const auto src = dir.write("s", "The cat.\n\nA dog!\nx y z\n");
  const auto tgt = dir.write("t", "Le chat.\nrien\n\nx\nextra\n");
  SkipStats first_stats, second_stats;
  const auto first = read_parallel(src, tgt, generic(), &first_stats, nullptr);
  const auto second = read_parallel(src, tgt, generic(), &second_stats, nullptr);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].source_tokens, second[i].source_tokens);
    EXPECT_EQ(first[i].target_tokens, second[i].target_tokens);
    EXPECT_EQ(first[i].line_number, second[i].line_number);
  }
  EXPECT_EQ(first_stats, second_stats);
  EXPECT_EQ(first_stats.empty_side, 2u);
  EXPECT_EQ(first_stats.malformed, 1u);
}

TEST(ParallelReaderTest, BatchesCoverStream) {
  TempDir dir;
  std::string src, tgt;
  for (int i = 0; i < 25; ++i) {
    src += "w" + std::to_string(i) + "\n";
    tgt += "v" + std::to_string(i) + "\n";
  }
  ParallelReader reader(dir.write("s", src), dir.write("t", tgt), generic(), nullptr);
  std::vector<SentencePair> batch;
  std::size_t total = 0, batches = 0;
  while (reader.next_batch(10, batch)) {
    total += batch.size();
    ++batches;
  }
  EXPECT_EQ(total, 25u);
  EXPECT_EQ(batches, 3u);
}

}  // namespace
}  // namespace w2w
