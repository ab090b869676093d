#include "w2w/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "w2w/error.hpp"

namespace w2w {

namespace {

void require_in_vocab(const CountStore& store, WordId x) {
  if (x >= store.src_vocab().size())
    throw NotFoundError("source word id " + std::to_string(x) + " not in vocabulary");
}

// Position of each candidate target of the current source word, -1 elsewhere.
// Reset after every use so it can be reused across calls on one thread.
std::vector<std::int64_t>& scratch_positions(std::size_t n_targets) {
  thread_local std::vector<std::int64_t> positions;
  if (positions.size() < n_targets) positions.resize(n_targets, -1);
  return positions;
}

}  // namespace

std::string_view method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kCooccurrence: return "cooc";
    case MethodKind::kPmi: return "pmi";
    case MethodKind::kCpe: return "cpe";
  }
  return "?";
}

MethodKind parse_method(std::string_view name) {
  if (name == "cooc") return MethodKind::kCooccurrence;
  if (name == "pmi") return MethodKind::kPmi;
  if (name == "cpe") return MethodKind::kCpe;
  throw InvalidInput("unknown method '" + std::string(name) + "' (expected cooc, pmi or cpe)");
}

ScoreVector score_cooccurrence(const CountStore& store, WordId x) {
  require_in_vocab(store, x);
  const double total = static_cast<double>(store.src_count(x));
  ScoreVector out{x, {}};
  const auto& row = store.cross_row(x);
  out.entries.reserve(row.size());
  for (const auto& cell : row)
    out.entries.push_back({cell.id, static_cast<double>(cell.count) / total});
  return out;
}

ScoreVector score_pmi(const CountStore& store, WordId x) {
  require_in_vocab(store, x);
  ScoreVector out{x, {}};
  const auto& row = store.cross_row(x);
  out.entries.reserve(row.size());
  for (const auto& cell : row) {
    // One log of the ratio: equal ratios give bit-identical scores, so ties
    // rank exactly as #(x,y)/#(y) does.
    const double ratio = static_cast<double>(cell.count) /
                         static_cast<double>(store.tgt_count(cell.id));
    out.entries.push_back({cell.id, std::log(ratio)});
  }
  return out;
}

std::vector<WordId> select_confounders(const CountStore& store, WordId x,
                                       std::uint64_t m) {
  require_in_vocab(store, x);
  CountRow row = store.src_src_row(x);
  const auto order = [](const CountCell& a, const CountCell& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.id < b.id;
  };
  const auto keep = static_cast<std::size_t>(std::min<std::uint64_t>(m, row.size()));
  std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(), order);
  std::vector<WordId> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(row[i].id);
  return out;
}

ScoreVector score_cpe(const CountStore& store, WordId x, std::uint64_t m) {
  ScoreVector out = score_cooccurrence(store, x);
  if (m == 0 || out.entries.empty()) return out;

  const auto& candidates = store.cross_row(x);
  const double total = static_cast<double>(store.src_count(x));
  auto& positions = scratch_positions(store.tgt_vocab().size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    positions[candidates[i].id] = static_cast<std::int64_t>(i);

  std::vector<double> correction(candidates.size(), 0.0);
  for (WordId other : select_confounders(store, x, m)) {
    const double weight = static_cast<double>(store.src_src(x, other)) / total;
    const double other_total = static_cast<double>(store.src_count(other));
    const auto& row = store.cross_row(other);
    if (row.size() <= 4 * candidates.size()) {
      for (const auto& cell : row) {
        const auto pos = positions[cell.id];
        if (pos < 0) continue;
        correction[static_cast<std::size_t>(pos)] +=
            (static_cast<double>(cell.count) / other_total) * weight;
      }
    } else {
      auto it = row.begin();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        it = std::lower_bound(it, row.end(), candidates[i].id,
                              [](const CountCell& c, WordId v) { return c.id < v; });
        if (it == row.end()) break;
        if (it->id == candidates[i].id)
          correction[i] += (static_cast<double>(it->count) / other_total) * weight;
      }
    }
  }

  for (const auto& cell : candidates) positions[cell.id] = -1;
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i].score -= correction[i];
  return out;
}

ScoreVector score(const CountStore& store, WordId x, const Method& method) {
  switch (method.kind) {
    case MethodKind::kCooccurrence: return score_cooccurrence(store, x);
    case MethodKind::kPmi: return score_pmi(store, x);
    case MethodKind::kCpe: return score_cpe(store, x, method.m);
  }
  throw InvalidInput("unknown method");
}

RankedList top_k(const ScoreVector& scores, std::size_t k,
                 const CountStore& store) {
  RankedList out = scores.entries;
  const std::size_t keep = std::min(k, out.size());
  const auto order = [&store](const ScoredTarget& a, const ScoredTarget& b) {
    return ranks_before(a, b, store);
  };
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), order);
  out.resize(keep);
  return out;
}

}  // namespace w2w
