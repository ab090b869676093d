#pragma once

#include <algorithm>
#include <string>

#include "w2w/counts.hpp"

namespace w2w::testing {

// Empty string if every CountStore invariant holds, else the first violation.
inline std::string check_store_invariants(const CountStore& store) {
  const auto n = store.n_pairs();
  const auto& sv = store.src_vocab();
  const auto& tv = store.tgt_vocab();
  for (WordId x = 0; x < sv.size(); ++x) {
    if (sv.find(sv.word(x)) != x) return "vocab not bijective at " + sv.word(x);
    const auto cx = store.src_count(x);
    if (cx > n) return "#(x) > N for " + sv.word(x);
    if (store.src_src(x, x) != cx) return "diagonal #(x,x) != #(x) for " + sv.word(x);
    const auto& row = store.cross_row(x);
    if (cx >= 1 && row.empty()) return "source word without any target: " + sv.word(x);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      if (i > 0 && row[i - 1].id >= cell.id) return "cross row not sorted";
      if (cell.count == 0) return "zero stored in cross row";
      if (cell.count > std::min(cx, store.tgt_count(cell.id)))
        return "#(x,y) > min(#x,#y) for " + sv.word(x) + "," + tv.word(cell.id);
    }
    for (const auto& cell : store.src_src_row(x)) {
      if (cell.id == x) return "diagonal stored in source-source row";
      if (cell.count == 0) return "zero stored in source-source row";
      if (store.src_src(cell.id, x) != cell.count) return "source-source table not symmetric";
      if (cell.count > std::min(cx, store.src_count(cell.id))) return "#(x,x') > min(#x,#x')";
    }
  }
  for (WordId y = 0; y < tv.size(); ++y) {
    if (tv.find(tv.word(y)) != y) return "target vocab not bijective";
    if (store.tgt_count(y) > n) return "#(y) > N";
  }
  return {};
}

}  // namespace w2w::testing
