#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "w2w/counts.hpp"

namespace w2w {

enum class MethodKind { kCooccurrence, kPmi, kCpe };

struct Method {
  MethodKind kind = MethodKind::kCpe;
  // Number of confounders corrected for; used by CPE only.
  std::uint64_t m = 5000;

  bool operator==(const Method&) const = default;
};

// "cooc" / "pmi" / "cpe".
std::string_view method_name(MethodKind kind);
// Inverse of method_name; throws InvalidInput for anything else.
MethodKind parse_method(std::string_view name);

struct ScoredTarget {
  WordId target;
  double score;

  bool operator==(const ScoredTarget&) const = default;
};

// Scores of every target co-occurring with `source`, in target-id order.
struct ScoreVector {
  WordId source = 0;
  std::vector<ScoredTarget> entries;
};

using RankedList = std::vector<ScoredTarget>;

// p(y|x) = #(x,y) / #(x).
ScoreVector score_cooccurrence(const CountStore& store, WordId x);

// ln #(x,y) - ln #(y), evaluated as ln(#(x,y) / #(y)). The -ln #(x) term of
// PMI is constant per source word and left out.
ScoreVector score_pmi(const CountStore& store, WordId x);

// Up to m source words x' != x with #(x,x') >= 1, by #(x,x') descending,
// then id ascending.
std::vector<WordId> select_confounders(const CountStore& store, WordId x,
                                       std::uint64_t m);

// Controlled predictive effects:
//
//   p(y|x) - sum over x' in select_confounders(x, m) of p(y|x') * p(x'|x)
//
// with p(y|x') = #(x',y)/#(x') and p(x'|x) = #(x,x')/#(x). The weights are
// not renormalized over the truncated confounder set, so m = 0 gives p(y|x).
// The correction for each y accumulates in confounder order.
ScoreVector score_cpe(const CountStore& store, WordId x, std::uint64_t m);

ScoreVector score(const CountStore& store, WordId x, const Method& method);

// Best min(k, |candidates|) entries ordered by score descending, #(y)
// descending, target id ascending.
RankedList top_k(const ScoreVector& scores, std::size_t k,
                 const CountStore& store);

// Strict weak order used by top_k.
inline bool ranks_before(const ScoredTarget& a, const ScoredTarget& b,
                         const CountStore& store) {
  if (a.score != b.score) return a.score > b.score;
  const Count fa = store.tgt_count(a.target);
  const Count fb = store.tgt_count(b.target);
  if (fa != fb) return fa > fb;
  return a.target < b.target;
}

}  // namespace w2w
