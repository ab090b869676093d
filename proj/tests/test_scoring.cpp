#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "support/random_corpus.hpp"
#include "w2w/error.hpp"
#include "w2w/scoring.hpp"

namespace w2w {
namespace {

using testing::apple_corpus;
using testing::make_pairs;
using testing::oracle_counts;
using testing::random_corpus;
using testing::rel_close;

std::map<std::string, double> by_word(const CountStore& store, const ScoreVector& v) {
  std::map<std::string, double> out;
  for (const auto& e : v.entries) out[store.tgt_vocab().word(e.target)] = e.score;
  return out;
}

std::vector<std::string> words(const CountStore& store, const RankedList& list) {
  std::vector<std::string> out;
  for (const auto& e : list) out.push_back(store.tgt_vocab().word(e.target));
  return out;
}

CountStore toy_store() { return accumulate(make_pairs({{"a b", "x y"}, {"a", "x"}})); }

TEST(CooccurrenceTest, ToyScores) {
  const auto s = toy_store();
  EXPECT_EQ(by_word(s, score_cooccurrence(s, s.require_source("a"))),
            (std::map<std::string, double>{{"x", 1.0}, {"y", 0.5}}));
  EXPECT_EQ(by_word(s, score_cooccurrence(s, s.require_source("b"))),
            (std::map<std::string, double>{{"x", 1.0}, {"y", 1.0}}));
}

TEST(CooccurrenceTest, UnknownWord) {
  const auto s = toy_store();
  EXPECT_THROW(s.require_source("zzz"), NotFoundError);
  EXPECT_THROW(score_cooccurrence(s, 99), NotFoundError);
  EXPECT_THROW(score_pmi(s, 99), NotFoundError);
  EXPECT_THROW(score_cpe(s, 99, 5), NotFoundError);
  EXPECT_THROW(select_confounders(s, 99, 5), NotFoundError);
}

TEST(PmiTest, ToyScores) {
  const auto s = toy_store();
  const auto scores = by_word(s, score_pmi(s, s.require_source("a")));
  EXPECT_EQ(scores.at("x"), 0.0);
  EXPECT_EQ(scores.at("y"), 0.0);
}

TEST(PmiTest, AppleCorpus) {
  const auto s = accumulate(apple_corpus());
  const auto apple = s.require_source("apple");
  const auto scores = by_word(s, score_pmi(s, apple));
  EXPECT_DOUBLE_EQ(scores.at("la"), -std::log(3.0));
  EXPECT_NEAR(scores.at("la"), -1.0986, 1e-4);
  EXPECT_EQ(scores.at("pomme"), 0.0);
  EXPECT_EQ(words(s, top_k(score_pmi(s, apple), 1, s)), (std::vector<std::string>{"pomme"}));
}

TEST(PmiTest, ExpRoundTripRecoversJointCount) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = accumulate(random_corpus(seed));
    for (WordId x = 0; x < s.src_vocab().size(); ++x) {
      for (const auto& e : score_pmi(s, x).entries) {
        const double joint = std::exp(e.score) * static_cast<double>(s.tgt_count(e.target));
        ASSERT_TRUE(rel_close(joint, static_cast<double>(s.cross(x, e.target)), 1e-12));
      }
    }
  }
}

TEST(ConfoundersTest, ZeroAndApple) {
  const auto s = accumulate(apple_corpus());
  const auto apple = s.require_source("apple");
  EXPECT_TRUE(select_confounders(s, apple, 0).empty());
  EXPECT_EQ(select_confounders(s, apple, 5), (std::vector<WordId>{s.require_source("the")}));
  // "the" co-occurs with three words, all once: id order.
  const auto the = select_confounders(s, s.require_source("the"), 5000);
  EXPECT_EQ(the, (std::vector<WordId>{s.require_source("apple"), s.require_source("juice"),
                                      s.require_source("dog")}));
}

TEST(ConfoundersTest, MatchesSortOracleAndIsPrefixMonotone) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto pairs = random_corpus(seed);
    const auto s = accumulate(pairs);
    const auto oracle = oracle_counts(pairs);
    for (WordId x = 0; x < s.src_vocab().size(); ++x) {
      const auto& word = s.src_vocab().word(x);
      const auto full = select_confounders(s, x, 1000);
      for (std::uint64_t m : {0u, 1u, 2u, 3u, 7u, 1000u}) {
        const auto got = select_confounders(s, x, m);
        std::vector<std::string> names;
        for (auto id : got) names.push_back(s.src_vocab().word(id));
        ASSERT_EQ(names, testing::oracle_confounders(oracle, word, m));
        ASSERT_EQ(std::find(got.begin(), got.end(), x), got.end()) << "self included";
        ASSERT_TRUE(std::equal(got.begin(), got.end(), full.begin()));
      }
    }
  }
}

TEST(CpeTest, AppleCorpusControlsForConfounder) {
  const auto s = accumulate(apple_corpus());
  const auto apple = s.require_source("apple");
  const auto scores = by_word(s, score_cpe(s, apple, 5000));
  EXPECT_EQ(scores.at("pomme"), 1.0 - 1.0 / 3.0);
  EXPECT_EQ(scores.at("la"), 0.0);
  EXPECT_EQ(words(s, top_k(score_cpe(s, apple, 5000), 1, s)), (std::vector<std::string>{"pomme"}));
  EXPECT_EQ(words(s, top_k(score_cooccurrence(s, apple), 1, s)), (std::vector<std::string>{"la"}));
}

TEST(CpeTest, ZeroConfoundersIsConditionalProbability) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = accumulate(random_corpus(seed));
    for (WordId x = 0; x < s.src_vocab().size(); ++x) {
      const auto cpe = score_cpe(s, x, 0);
      const auto cooc = score_cooccurrence(s, x);
      ASSERT_EQ(cpe.entries, cooc.entries);
    }
  }
}

TEST(CpeTest, SelfAsConfounderWouldZeroSharedTargets) {
  // Adding x itself with weight p(x|x) = 1 cancels p(y|x) exactly, which is
  // why confounder selection excludes it.
  const auto s = accumulate(apple_corpus());
  const auto apple = s.require_source("apple");
  for (const auto& e : score_cooccurrence(s, apple).entries) {
    const double self_term = (static_cast<double>(s.cross(apple, e.target)) /
                              static_cast<double>(s.src_count(apple))) *
                             (static_cast<double>(s.src_src(apple, apple)) /
                              static_cast<double>(s.src_count(apple)));
    EXPECT_EQ(e.score - self_term, 0.0);
  }
}

TEST(ScorersTest, MatchBruteForceOracles) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto pairs = random_corpus(seed);
    const auto s = accumulate(pairs);
    const auto oracle = oracle_counts(pairs);
    for (WordId x = 0; x < s.src_vocab().size(); ++x) {
      const auto& word = s.src_vocab().word(x);
      const auto check = [&](const ScoreVector& got, const std::map<std::string, double>& want) {
        const auto got_words = by_word(s, got);
        ASSERT_EQ(got_words.size(), want.size());
        for (const auto& [y, v] : want) {
          ASSERT_TRUE(got_words.contains(y));
          ASSERT_TRUE(rel_close(got_words.at(y), v)) << got_words.at(y) << " vs " << v;
          ASSERT_TRUE(std::isfinite(got_words.at(y)));
        }
      };
      check(score_cooccurrence(s, x), testing::oracle_cooccurrence(oracle, word));
      check(score_pmi(s, x), testing::oracle_pmi(oracle, word));
      for (std::uint64_t m : {1u, 3u, 5000u}) check(score_cpe(s, x, m), testing::oracle_cpe(oracle, word, m));
    }
  }
}

TEST(RankingLawTest, PmiOrderEqualsRatioOrder) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = accumulate(random_corpus(seed));
    for (WordId x = 0; x < s.src_vocab().size(); ++x) {
      ScoreVector ratio{x, {}};
      for (const auto& cell : s.cross_row(x))
        ratio.entries.push_back({cell.id, static_cast<double>(cell.count) /
                                              static_cast<double>(s.tgt_count(cell.id))});
      const auto pmi_rank = top_k(score_pmi(s, x), 1000, s);
      const auto ratio_rank = top_k(ratio, 1000, s);
      ASSERT_EQ(pmi_rank.size(), ratio_rank.size());
      for (std::size_t i = 0; i < pmi_rank.size(); ++i) ASSERT_EQ(pmi_rank[i].target, ratio_rank[i].target);
    }
  }
}

TEST(RankingLawTest, CooccurrenceInvariantToScaling) {
  // Repeating every sentence pair three times multiplies all counts by 3.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto pairs = random_corpus(seed);
    std::vector<SentencePair> tripled;
    for (int r = 0; r < 3; ++r) tripled.insert(tripled.end(), pairs.begin(), pairs.end());
    const auto a = accumulate(pairs);
    const auto b = accumulate(tripled);
    for (WordId x = 0; x < a.src_vocab().size(); ++x) {
      const auto ra = top_k(score_cooccurrence(a, x), 1000, a);
      const auto rb = top_k(score_cooccurrence(b, x), 1000, b);
      ASSERT_EQ(ra.size(), rb.size());
      for (std::size_t i = 0; i < ra.size(); ++i) ASSERT_EQ(ra[i].target, rb[i].target);
    }
  }
}

TEST(TopKTest, Truncates) {
  const auto s = toy_store();
  const auto a = score_cooccurrence(s, s.require_source("a"));
  const auto top = top_k(a, 1, s);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(s.tgt_vocab().word(top[0].target), "x");
  EXPECT_EQ(top[0].score, 1.0);
  EXPECT_EQ(top_k(a, 10, s).size(), 2u);
}

TEST(TopKTest, TiesBrokenByFrequencyThenId) {
  const auto s = toy_store();
  const ScoreVector tied{0, {{1, 0.0}, {0, 0.0}}};  // y first, x second
  EXPECT_EQ(top_k(tied, 2, s), (RankedList{{0, 0.0}, {1, 0.0}}));

  const auto equal_freq = accumulate(make_pairs({{"a", "p q"}}));
  const ScoreVector same{0, {{1, 0.5}, {0, 0.5}}};
  EXPECT_EQ(top_k(same, 2, equal_freq), (RankedList{{0, 0.5}, {1, 0.5}}));
}

TEST(TopKTest, MatchesSortOracle) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto pairs = random_corpus(seed);
    const auto s = accumulate(pairs);
    const auto oracle = oracle_counts(pairs);
    // Coarse scores force many ties.
    ScoreVector v{0, {}};
    std::map<std::string, double> named;
    for (WordId y = 0; y < s.tgt_vocab().size(); ++y) {
      if (rng() % 3 == 0) continue;
      const double value = static_cast<double>(rng() % 4) / 2.0 - 0.5;
      v.entries.push_back({y, value});
      named[s.tgt_vocab().word(y)] = value;
    }
    for (std::size_t k : {1u, 2u, 5u, 100u}) {
      const auto got = top_k(v, k, s);
      const auto want = testing::oracle_top_k(oracle, named, k);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        ASSERT_EQ(s.tgt_vocab().word(got[i].target), want[i].first);
        ASSERT_EQ(got[i].score, want[i].second);
      }
    }
  }
}

TEST(MethodTest, NamesRoundTrip) {
  for (auto kind : {MethodKind::kCooccurrence, MethodKind::kPmi, MethodKind::kCpe})
    EXPECT_EQ(parse_method(method_name(kind)), kind);
  EXPECT_THROW(parse_method("tfidf"), InvalidInput);
  EXPECT_EQ(Method{}.m, 5000u);
  EXPECT_EQ(Method{}.kind, MethodKind::kCpe);
}

}  // namespace
}  // namespace w2w
