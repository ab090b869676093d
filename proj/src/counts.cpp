#include "w2w/counts.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "w2w/error.hpp"

namespace w2w {

namespace {

std::uint64_t pack(WordId a, WordId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

Count row_lookup(const CountRow& row, WordId id) {
  auto it = std::lower_bound(row.begin(), row.end(), id,
                             [](const CountCell& c, WordId v) { return c.id < v; });
  return (it != row.end() && it->id == id) ? it->count : 0;
}

void sort_row(CountRow& row) {
  std::sort(row.begin(), row.end(),
            [](const CountCell& a, const CountCell& b) { return a.id < b.id; });
}

// Sum of two id-sorted rows.
CountRow add_rows(const CountRow& a, const CountRow& b) {
  CountRow out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->id < j->id) {
      out.push_back(*i++);
    } else if (j->id < i->id) {
      out.push_back(*j++);
    } else {
      out.push_back({i->id, i->count + j->count});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

void dedup(std::vector<WordId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

WordId Vocab::add(std::string_view word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocab::find(std::string_view word) const {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  return std::nullopt;
}

Count CountStore::cross(WordId x, WordId y) const {
  return row_lookup(cross_.at(x), y);
}

Count CountStore::src_src(WordId x, WordId other) const {
  if (x == other) return src_count_.at(x);
  return row_lookup(src_src_.at(x), other);
}

WordId CountStore::require_source(std::string_view word) const {
  if (auto id = src_vocab_.find(word)) return *id;
  throw NotFoundError("source word not in vocabulary: " + std::string(word));
}

void CountBuilder::add(const SentencePair& pair) {
  add(pair.source_tokens, pair.target_tokens);
}

void CountBuilder::add(std::span<const std::string> source_tokens,
                       std::span<const std::string> target_tokens) {
  src_ids_.clear();
  tgt_ids_.clear();
  for (const auto& token : source_tokens) src_ids_.push_back(store_.src_vocab_.add(token));
  for (const auto& token : target_tokens) tgt_ids_.push_back(store_.tgt_vocab_.add(token));
  store_.src_count_.resize(store_.src_vocab_.size(), 0);
  store_.tgt_count_.resize(store_.tgt_vocab_.size(), 0);
  dedup(src_ids_);
  dedup(tgt_ids_);

  ++store_.n_pairs_;
  for (WordId x : src_ids_) ++store_.src_count_[x];
  for (WordId y : tgt_ids_) ++store_.tgt_count_[y];
  for (WordId x : src_ids_)
    for (WordId y : tgt_ids_) ++cross_[pack(x, y)];
  for (std::size_t i = 0; i < src_ids_.size(); ++i)
    for (std::size_t j = i + 1; j < src_ids_.size(); ++j)
      ++src_src_[pack(src_ids_[i], src_ids_[j])];
}

CountStore CountBuilder::finish() {
  const std::size_t n_src = store_.src_vocab_.size();
  store_.cross_.assign(n_src, {});
  store_.src_src_.assign(n_src, {});
  for (const auto& [key, count] : cross_) {
    store_.cross_[key >> 32].push_back({static_cast<WordId>(key), count});
  }
  for (const auto& [key, count] : src_src_) {
    const auto a = static_cast<WordId>(key >> 32);
    const auto b = static_cast<WordId>(key);
    store_.src_src_[a].push_back({b, count});
    store_.src_src_[b].push_back({a, count});
  }
  for (auto& row : store_.cross_) sort_row(row);
  for (auto& row : store_.src_src_) sort_row(row);
  cross_.clear();
  src_src_.clear();
  return std::exchange(store_, CountStore{});
}

CountStore accumulate(std::span<const SentencePair> pairs) {
  CountBuilder builder;
  for (const auto& pair : pairs) builder.add(pair);
  return builder.finish();
}

CountStore merge(const CountStore& left, const CountStore& right) {
  CountStore out = left;
  std::vector<WordId> src_map(right.src_vocab_.size());
  std::vector<WordId> tgt_map(right.tgt_vocab_.size());
  for (WordId i = 0; i < src_map.size(); ++i) src_map[i] = out.src_vocab_.add(right.src_vocab_.word(i));
  for (WordId i = 0; i < tgt_map.size(); ++i) tgt_map[i] = out.tgt_vocab_.add(right.tgt_vocab_.word(i));

  const std::size_t n_src = out.src_vocab_.size();
  out.n_pairs_ += right.n_pairs_;
  out.src_count_.resize(n_src, 0);
  out.tgt_count_.resize(out.tgt_vocab_.size(), 0);
  out.cross_.resize(n_src);
  out.src_src_.resize(n_src);
  for (WordId i = 0; i < src_map.size(); ++i) out.src_count_[src_map[i]] += right.src_count_[i];
  for (WordId i = 0; i < tgt_map.size(); ++i) out.tgt_count_[tgt_map[i]] += right.tgt_count_[i];

  CountRow mapped;
  for (WordId i = 0; i < src_map.size(); ++i) {
    const WordId x = src_map[i];
    mapped.clear();
    for (const auto& cell : right.cross_[i]) mapped.push_back({tgt_map[cell.id], cell.count});
    sort_row(mapped);
    out.cross_[x] = add_rows(out.cross_[x], mapped);

    mapped.clear();
    for (const auto& cell : right.src_src_[i]) mapped.push_back({src_map[cell.id], cell.count});
    sort_row(mapped);
    out.src_src_[x] = add_rows(out.src_src_[x], mapped);
  }
  return out;
}

CountStore prune(const CountStore& store, Count min_count) {
  if (min_count < 1) throw InvalidInput("min_count must be >= 1");
  constexpr WordId kDropped = ~WordId{0};

  CountStore out;
  out.n_pairs_ = store.n_pairs_;
  std::vector<WordId> tgt_map(store.tgt_vocab_.size(), kDropped);
  for (WordId y = 0; y < tgt_map.size(); ++y) {
    if (store.tgt_count_[y] >= min_count) {
      tgt_map[y] = out.tgt_vocab_.add(store.tgt_vocab_.word(y));
      out.tgt_count_.push_back(store.tgt_count_[y]);
    }
  }

  std::vector<WordId> src_map(store.src_vocab_.size(), kDropped);
  for (WordId x = 0; x < src_map.size(); ++x) {
    if (store.src_count_[x] < min_count) continue;
    const auto& row = store.cross_[x];
    const bool has_target = std::any_of(row.begin(), row.end(), [&](const CountCell& c) {
      return tgt_map[c.id] != kDropped;
    });
    if (!has_target) continue;
    src_map[x] = out.src_vocab_.add(store.src_vocab_.word(x));
    out.src_count_.push_back(store.src_count_[x]);
  }

  out.cross_.resize(out.src_vocab_.size());
  out.src_src_.resize(out.src_vocab_.size());
  for (WordId x = 0; x < src_map.size(); ++x) {
    if (src_map[x] == kDropped) continue;
    auto& cross = out.cross_[src_map[x]];
    for (const auto& cell : store.cross_[x])
      if (tgt_map[cell.id] != kDropped) cross.push_back({tgt_map[cell.id], cell.count});
    auto& src_src = out.src_src_[src_map[x]];
    for (const auto& cell : store.src_src_[x])
      if (src_map[cell.id] != kDropped) src_src.push_back({src_map[cell.id], cell.count});
  }
  return out;
}

CountStore accumulate_parallel(std::span<const SentencePair> pairs,
                               unsigned threads) {
  threads = std::max(1u, threads);
  const std::size_t n_shards = std::min<std::size_t>(threads, std::max<std::size_t>(1, pairs.size()));
  if (n_shards == 1) return accumulate(pairs);

  std::vector<CountStore> shards(n_shards);
  std::vector<std::thread> workers;
  workers.reserve(n_shards);
  const std::size_t per = pairs.size() / n_shards;
  const std::size_t extra = pairs.size() % n_shards;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < n_shards; ++s) {
    const std::size_t len = per + (s < extra ? 1 : 0);
    workers.emplace_back([&shards, s, part = pairs.subspan(begin, len)] {
      shards[s] = accumulate(part);
    });
    begin += len;
  }
  for (auto& w : workers) w.join();

  CountStore out = std::move(shards[0]);
  for (std::size_t s = 1; s < n_shards; ++s) out = merge(out, shards[s]);
  return out;
}

CountStore count_stream(ParallelReader& reader, unsigned threads,
                        std::size_t batch_size) {
  CountStore total;
  std::vector<SentencePair> batch;
  while (reader.next_batch(batch_size, batch)) {
    CountStore part = accumulate_parallel(batch, threads);
    total = total.empty() ? std::move(part) : merge(total, part);
  }
  return total;
}

void save_counts(const CountStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "#vocab-src\n";
  for (WordId i = 0; i < store.src_vocab().size(); ++i) out << i << '\t' << store.src_vocab().word(i) << '\n';
  out << "#vocab-tgt\n";
  for (WordId i = 0; i < store.tgt_vocab().size(); ++i) out << i << '\t' << store.tgt_vocab().word(i) << '\n';
  out << "#counts-src\n";
  for (WordId i = 0; i < store.src_vocab().size(); ++i) out << i << '\t' << store.src_count(i) << '\n';
  out << "#counts-tgt\n";
  for (WordId i = 0; i < store.tgt_vocab().size(); ++i) out << i << '\t' << store.tgt_count(i) << '\n';
  out << "#cross\n";
  for (WordId x = 0; x < store.src_vocab().size(); ++x)
    for (const auto& cell : store.cross_row(x)) out << x << '\t' << cell.id << '\t' << cell.count << '\n';
  out << "#srcsrc\n";
  for (WordId x = 0; x < store.src_vocab().size(); ++x)
    for (const auto& cell : store.src_src_row(x))
      if (x < cell.id) out << x << '\t' << cell.id << '\t' << cell.count << '\n';
  out << "#meta n_pairs=" << store.n_pairs() << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::uint64_t parse_uint(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || field.empty())
    throw FormatError("line " + std::to_string(line_no) + ": expected integer, got '" + std::string(field) + "'");
  return value;
}

}  // namespace

CountStore load_counts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open count cache: " + path.string());

  enum class Section { kNone, kVocabSrc, kVocabTgt, kCountsSrc, kCountsTgt, kCross, kSrcSrc };
  Section section = Section::kNone;
  CountStore store;
  bool have_meta = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  auto check_id = [&](std::uint64_t id, std::size_t size) {
    if (id >= size) fail("id out of range");
    return static_cast<WordId>(id);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with('#')) {
      if (line == "#vocab-src") section = Section::kVocabSrc;
      else if (line == "#vocab-tgt") section = Section::kVocabTgt;
      else if (line == "#counts-src") section = Section::kCountsSrc;
      else if (line == "#counts-tgt") section = Section::kCountsTgt;
      else if (line == "#cross") section = Section::kCross;
      else if (line == "#srcsrc") section = Section::kSrcSrc;
      else if (line.starts_with("#meta n_pairs=")) {
        store.n_pairs_ = parse_uint(std::string_view(line).substr(14), line_no);
        have_meta = true;
        section = Section::kNone;
      } else {
        fail("unknown section '" + line + "'");
      }
      if (section == Section::kCountsSrc) {
        store.src_count_.assign(store.src_vocab_.size(), 0);
        store.cross_.assign(store.src_vocab_.size(), {});
        store.src_src_.assign(store.src_vocab_.size(), {});
      } else if (section == Section::kCountsTgt) {
        store.tgt_count_.assign(store.tgt_vocab_.size(), 0);
      }
      continue;
    }
    const auto fields = split_tabs(line);
    switch (section) {
      case Section::kVocabSrc:
      case Section::kVocabTgt: {
        if (fields.size() != 2) fail("expected <id>\\t<word>");
        auto& vocab = section == Section::kVocabSrc ? store.src_vocab_ : store.tgt_vocab_;
        if (parse_uint(fields[0], line_no) != vocab.size()) fail("vocabulary ids must be dense and ordered");
        if (vocab.find(fields[1])) fail("duplicate word");
        vocab.add(fields[1]);
        break;
      }
      case Section::kCountsSrc:
      case Section::kCountsTgt: {
        if (fields.size() != 2) fail("expected <id>\\t<count>");
        auto& counts = section == Section::kCountsSrc ? store.src_count_ : store.tgt_count_;
        counts[check_id(parse_uint(fields[0], line_no), counts.size())] = parse_uint(fields[1], line_no);
        break;
      }
      case Section::kCross: {
        if (fields.size() != 3) fail("expected <src>\\t<tgt>\\t<count>");
        const WordId x = check_id(parse_uint(fields[0], line_no), store.cross_.size());
        const WordId y = check_id(parse_uint(fields[1], line_no), store.tgt_count_.size());
        store.cross_[x].push_back({y, parse_uint(fields[2], line_no)});
        break;
      }
      case Section::kSrcSrc: {
        if (fields.size() != 3) fail("expected <src>\\t<src>\\t<count>");
        const WordId a = check_id(parse_uint(fields[0], line_no), store.src_src_.size());
        const WordId b = check_id(parse_uint(fields[1], line_no), store.src_src_.size());
        if (a >= b) fail("source pairs must be written with first id < second id");
        const Count c = parse_uint(fields[2], line_no);
        store.src_src_[a].push_back({b, c});
        store.src_src_[b].push_back({a, c});
        break;
      }
      case Section::kNone:
        fail("data outside a section");
    }
  }
  if (!have_meta) throw FormatError(path.string() + ": missing #meta line");
  if (store.src_count_.size() != store.src_vocab_.size() ||
      store.tgt_count_.size() != store.tgt_vocab_.size())
    throw FormatError(path.string() + ": missing count sections");
  for (auto& row : store.cross_) sort_row(row);
  for (auto& row : store.src_src_) sort_row(row);
  return store;
}

}  // namespace w2w
