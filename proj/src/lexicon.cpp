#include "w2w/lexicon.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "w2w/error.hpp"

namespace w2w {

namespace {

constexpr std::string_view kMagic = "#word2word-lexicon";
constexpr std::string_view kVersion = "v1";

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

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

void Lexicon::add_entry(LexiconEntry entry) {
  if (entry.translations.empty())
    throw InvalidInput("lexicon entry '" + entry.source + "' has no translations");
  if (entry.translations.size() > k)
    throw InvalidInput("lexicon entry '" + entry.source + "' has more than k translations");
  if (index_.contains(entry.source))
    throw InvalidInput("duplicate lexicon entry '" + entry.source + "'");
  std::set<std::string_view> targets;
  for (const auto& t : entry.translations)
    if (!targets.insert(t.word).second)
      throw InvalidInput("lexicon entry '" + entry.source + "' repeats translation '" + t.word + "'");
  index_.emplace(entry.source, entries_.size());
  entries_.push_back(std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view source) const {
  auto it = index_.find(source);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

bool Lexicon::operator==(const Lexicon& other) const {
  return src_lang == other.src_lang && tgt_lang == other.tgt_lang &&
         method == other.method && k == other.k && n_pairs == other.n_pairs &&
         entries_ == other.entries_;
}

Lexicon build_lexicon(const CountStore& store, const BuildConfig& config) {
  if (store.empty()) throw InvalidInput("empty corpus");
  if (config.k < 1) throw InvalidInput("k must be >= 1");

  const std::size_t n_src = store.src_vocab().size();
  std::vector<RankedList> ranked(n_src);
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 64;
  auto work = [&] {
    for (std::size_t begin = next.fetch_add(kChunk); begin < n_src;
         begin = next.fetch_add(kChunk)) {
      const std::size_t end = std::min(n_src, begin + kChunk);
      for (std::size_t x = begin; x < end; ++x) {
        const auto id = static_cast<WordId>(x);
        ranked[x] = top_k(score(store, id, config.method), config.k, store);
      }
    }
  };
  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back(work);
  }

  Lexicon lex;
  lex.src_lang = config.src_lang;
  lex.tgt_lang = config.tgt_lang;
  lex.method = config.method;
  lex.k = config.k;
  lex.n_pairs = store.n_pairs();
  for (std::size_t x = 0; x < n_src; ++x) {
    if (ranked[x].empty()) continue;
    LexiconEntry entry{store.src_vocab().word(static_cast<WordId>(x)), {}};
    entry.translations.reserve(ranked[x].size());
    for (const auto& t : ranked[x])
      entry.translations.push_back({store.tgt_vocab().word(t.target), t.score});
    lex.add_entry(std::move(entry));
  }
  return lex;
}

std::string format_score(double score) {
  if (!std::isfinite(score)) throw InvalidInput("non-finite score");
  if (score == 0.0) score = 0.0;  // no "-0"
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%#.9g", score);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_lexicon(const Lexicon& lex, std::ostream& out) {
  out << kMagic << '\t' << kVersion << "\tsrc=" << lex.src_lang
      << "\ttgt=" << lex.tgt_lang << "\tmethod=" << method_name(lex.method.kind)
      << "\tm=" << lex.method.m << "\tk=" << lex.k << "\tn_pairs=" << lex.n_pairs
      << '\n';
  for (const auto& entry : lex.entries()) {
    std::size_t rank = 1;
    for (const auto& t : entry.translations) {
      out << entry.source << '\t' << rank++ << '\t' << t.word << '\t'
          << format_score(t.score) << '\n';
    }
  }
}

void write_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_lexicon(lex, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

Lexicon read_lexicon(std::istream& in, const std::string& name) {
  const std::string content{std::istreambuf_iterator<char>(in), {}};
  if (in.bad()) throw IoError("read failed: " + name);

  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw FormatError(name + ":" + std::to_string(line_no) + ": " + what);
  };

  Lexicon lex;
  std::size_t pos = 0;
  std::optional<LexiconEntry> current;
  std::set<std::string, std::less<>> finished;
  auto flush = [&] {
    if (!current) return;
    finished.insert(current->source);
    try {
      lex.add_entry(std::move(*current));
    } catch (const InvalidInput& e) {
      fail(e.what());
    }
    current.reset();
  };

  while (pos < content.size()) {
    ++line_no;
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) fail("truncated record (no line terminator)");
    const std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    const auto fields = split_tabs(line);

    if (line_no == 1) {
      if (fields.size() != 8 || fields[0] != kMagic || fields[1] != kVersion)
        fail("not a v1 lexicon file (bad header)");
      auto value = [&](std::size_t i, std::string_view key) {
        if (!fields[i].starts_with(key)) fail("bad header: expected " + std::string(key));
        return fields[i].substr(key.size());
      };
      lex.src_lang = std::string(value(2, "src="));
      lex.tgt_lang = std::string(value(3, "tgt="));
      try {
        lex.method.kind = parse_method(value(4, "method="));
      } catch (const InvalidInput& e) {
        fail(std::string("bad header: ") + e.what());
      }
      auto m = parse_number<std::uint64_t>(value(5, "m="));
      auto k = parse_number<std::size_t>(value(6, "k="));
      auto n = parse_number<Count>(value(7, "n_pairs="));
      if (!m || !k || !n || *k < 1) fail("bad header: invalid m, k or n_pairs");
      lex.method.m = *m;
      lex.k = *k;
      lex.n_pairs = *n;
      continue;
    }

    if (fields.size() != 4) fail("expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    const auto rank = parse_number<std::size_t>(fields[1]);
    const auto score = parse_number<double>(fields[3]);
    if (!rank || *rank < 1) fail("invalid rank '" + std::string(fields[1]) + "'");
    if (!score || !std::isfinite(*score)) fail("invalid score '" + std::string(fields[3]) + "'");
    if (fields[0].empty() || fields[2].empty()) fail("empty word");
    if (*rank > lex.k) fail("rank " + std::to_string(*rank) + " exceeds k");

    if (!current || current->source != fields[0]) {
      flush();
      if (finished.contains(fields[0]))
        fail("records for '" + std::string(fields[0]) + "' are not contiguous");
      if (*rank != 1) fail("rank gap: '" + std::string(fields[0]) + "' starts at rank " + std::to_string(*rank));
      current = LexiconEntry{std::string(fields[0]), {}};
    } else if (*rank != current->translations.size() + 1) {
      fail((*rank <= current->translations.size() ? "duplicate rank " : "rank gap at ") +
           std::to_string(*rank) + " for '" + current->source + "'");
    }
    current->translations.push_back({std::string(fields[2]), *score});
  }
  if (line_no == 0) throw FormatError(name + ":1: empty file (missing header)");
  flush();
  return lex;
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon: " + path.string());
  return read_lexicon(in, path.string());
}

std::optional<std::vector<Translation>> query(const Lexicon& lex,
                                              std::string_view word,
                                              std::size_t n) {
  const auto* entry = lex.find(word);
  if (!entry) return std::nullopt;
  const auto keep = std::min(n, entry->translations.size());
  return std::vector<Translation>(entry->translations.begin(),
                                  entry->translations.begin() + static_cast<std::ptrdiff_t>(keep));
}

}  // namespace w2w
