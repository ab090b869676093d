#include "w2w/eval.hpp"

#include <unicode/utf8.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "w2w/error.hpp"

namespace w2w {

namespace {

std::string fixed9(double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.9f", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

// Fenwick tree over sampling weights supporting removal.
class WeightTree {
 public:
  explicit WeightTree(const std::vector<double>& weights)
      : leaf_(weights), tree_(weights.size() + 1, 0.0) {
    for (std::size_t i = 0; i < weights.size(); ++i) add(i, weights[i]);
  }

  double total() const {
    double sum = 0.0;
    for (std::size_t i = leaf_.size(); i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  // Index whose cumulative interval contains `u`, skipping removed entries.
  std::size_t find(double u) const {
    std::size_t pos = 0;
    std::size_t step = std::bit_floor(leaf_.size());
    for (; step > 0; step >>= 1) {
      if (pos + step <= leaf_.size() && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    // Rounding can land on a removed slot or run past the end.
    std::size_t i = std::min(pos, leaf_.size() - 1);
    for (std::size_t j = i; j < leaf_.size(); ++j)
      if (leaf_[j] > 0.0) return j;
    for (std::size_t j = i; j-- > 0;)
      if (leaf_[j] > 0.0) return j;
    return i;
  }

  void remove(std::size_t i) {
    add(i, -leaf_[i]);
    leaf_[i] = 0.0;
  }

 private:
  void add(std::size_t i, double delta) {
    for (std::size_t j = i + 1; j <= leaf_.size(); j += j & (~j + 1)) tree_[j] += delta;
  }

  std::vector<double> leaf_;
  std::vector<double> tree_;
};

}  // namespace

bool GoldDictionary::add(std::string_view source, std::string_view target) {
  auto [it, inserted] = targets_.try_emplace(std::string(source));
  if (inserted) sources_.emplace_back(source);
  auto& targets = it->second;
  if (std::find(targets.begin(), targets.end(), target) != targets.end()) return false;
  targets.emplace_back(target);
  ++n_pairs_;
  if (source == target) ++n_degenerate_;
  return true;
}

const std::vector<std::string>& GoldDictionary::targets(std::string_view source) const {
  static const std::vector<std::string> kNone;
  auto it = targets_.find(std::string(source));
  return it == targets_.end() ? kNone : it->second;
}

GoldDictionary load_gold(std::istream& in, const WarningSink& warn) {
  GoldDictionary gold;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> rejected;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(std::move(f));
    if (parts.empty()) continue;
    if (parts.size() != 2) {
      rejected.push_back(line_no);
      continue;
    }
    gold.add(parts[0], parts[1]);
  }
  if (in.bad()) throw IoError("read failed while loading gold dictionary");
  if (!rejected.empty() && warn) {
    std::string lines;
    for (std::size_t i = 0; i < rejected.size() && i < 20; ++i)
      lines += (i ? "," : "") + std::to_string(rejected[i]);
    if (rejected.size() > 20) lines += ",...";
    warn("gold dictionary: skipped " + std::to_string(rejected.size()) +
         " line(s) without exactly 2 fields: " + lines);
  }
  if (gold.n_pairs() == 0) throw InvalidInput("empty gold dictionary");
  return gold;
}

GoldDictionary load_gold(const std::filesystem::path& path, const WarningSink& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open gold dictionary: " + path.string());
  try {
    return load_gold(in, warn);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(e.what()) + ": " + path.string());
  }
}

EvalReport precision_at_k(const Lexicon& lex, const GoldDictionary& gold,
                          const std::vector<std::size_t>& k_values) {
  if (k_values.empty()) throw InvalidInput("no k values given");
  for (auto k : k_values)
    if (k < 1) throw InvalidInput("k values must be >= 1");

  EvalReport report;
  report.k_values = k_values;
  report.n_test = gold.n_sources();
  report.n_degenerate_pairs = gold.n_degenerate_pairs();

  std::map<std::size_t, std::size_t> hits;
  for (auto k : k_values) hits[k] = 0;
  for (const auto& source : gold.sources()) {
    const auto* entry = lex.find(source);
    if (!entry) continue;
    ++report.n_in_lexicon;
    const auto& golds = gold.targets(source);
    // Rank of the best-ranked gold translation, if any.
    std::size_t first_hit = 0;
    for (std::size_t r = 0; r < entry->translations.size() && first_hit == 0; ++r) {
      const auto& word = entry->translations[r].word;
      if (std::find(golds.begin(), golds.end(), word) != golds.end()) first_hit = r + 1;
    }
    if (first_hit == 0) continue;
    for (auto& [k, count] : hits)
      if (first_hit <= k) ++count;
  }

  const auto denom = static_cast<double>(report.n_test);
  for (const auto& [k, count] : hits)
    report.precision[k] = report.n_test ? static_cast<double>(count) / denom : 0.0;
  report.coverage = report.n_test ? static_cast<double>(report.n_in_lexicon) / denom : 0.0;
  return report;
}

std::string summary_line(const EvalReport& report) {
  std::string out;
  for (auto k : report.k_values)
    out += "P@" + std::to_string(k) + "=" + fixed9(report.precision.at(k)) + " ";
  out += "coverage=" + fixed9(report.coverage) + " n=" + std::to_string(report.n_test);
  return out;
}

std::string describe(const EvalReport& report) {
  std::ostringstream out;
  out << "test words:        " << report.n_test << '\n'
      << "in lexicon:        " << report.n_in_lexicon << " (coverage "
      << fixed9(report.coverage) << ")\n"
      << "degenerate pairs:  " << report.n_degenerate_pairs << '\n';
  for (auto k : report.k_values)
    out << "P@" << k << ":" << std::string(k < 10 ? 15 : 14, ' ')
        << fixed9(report.precision.at(k)) << '\n';
  return out.str();
}

std::vector<CodepointRange> parse_charset(std::string_view spec) {
  if (spec == "all") return {{0, 0x10FFFF}};
  std::vector<CodepointRange> out;
  auto parse_hex = [&](std::string_view text) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value > 0x10FFFF)
      throw InvalidInput("bad codepoint '" + std::string(text) + "' in charset '" + std::string(spec) + "'");
    return value;
  };
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto item = spec.substr(start, comma - start);
    const auto dash = item.find('-');
    CodepointRange range{};
    if (dash == std::string_view::npos) {
      range.first = range.last = parse_hex(item);
    } else {
      range.first = parse_hex(item.substr(0, dash));
      range.last = parse_hex(item.substr(dash + 1));
    }
    if (range.first > range.last)
      throw InvalidInput("empty codepoint range in charset '" + std::string(spec) + "'");
    out.push_back(range);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool in_charset(std::string_view word, const std::vector<CodepointRange>& charset) {
  const auto* s = reinterpret_cast<const uint8_t*>(word.data());
  const auto length = static_cast<int32_t>(word.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
    const auto cp = static_cast<std::uint32_t>(c);
    const bool ok = std::any_of(charset.begin(), charset.end(), [cp](const CodepointRange& r) {
      return r.first <= cp && cp <= r.last;
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

std::string describe_charset(const std::vector<CodepointRange>& charset) {
  std::string out;
  char buf[32];
  for (const auto& r : charset) {
    std::snprintf(buf, sizeof buf, "%04X-%04X", r.first, r.last);
    out += (out.empty() ? "" : ",") + std::string(buf);
  }
  return out;
}

void validate(const SamplerConfig& cfg) {
  if (cfg.n < 1) throw InvalidInput("sample size must be >= 1");
  if (!(cfg.temperature > 0.0) || !std::isfinite(cfg.temperature))
    throw InvalidInput("temperature must be a positive number");
  if (cfg.charset.empty()) throw InvalidInput("charset is empty");
}

}  // namespace

std::vector<WeightedWord> sampling_weights(const CountStore& store, Side side,
                                           const SamplerConfig& cfg) {
  validate(cfg);
  const Vocab& vocab = side == Side::kSource ? store.src_vocab() : store.tgt_vocab();
  const auto counts = side == Side::kSource ? store.src_counts() : store.tgt_counts();
  const double exponent = 1.0 / cfg.temperature;
  std::vector<WeightedWord> out;
  double total = 0.0;
  for (WordId id = 0; id < vocab.size(); ++id) {
    if (counts[id] == 0 || !in_charset(vocab.word(id), cfg.charset)) continue;
    const double w = std::pow(static_cast<double>(counts[id]), exponent);
    out.push_back({vocab.word(id), w});
    total += w;
  }
  for (auto& item : out) item.weight /= total;
  return out;
}

std::vector<std::string> sample_test_words(const CountStore& store, Side side,
                                           const SamplerConfig& cfg,
                                           const WarningSink& warn) {
  if (store.empty()) throw InvalidInput("empty corpus");
  auto eligible = sampling_weights(store, side, cfg);
  if (eligible.empty())
    throw InvalidInput("no words made only of charset " + describe_charset(cfg.charset));
  if (eligible.size() < cfg.n && warn) {
    warn("only " + std::to_string(eligible.size()) + " eligible words for a sample of " +
         std::to_string(cfg.n) + "; returning all of them");
  }

  std::vector<double> weights;
  weights.reserve(eligible.size());
  for (const auto& item : eligible) weights.push_back(item.weight);
  WeightTree tree(weights);
  std::mt19937_64 rng(cfg.seed);

  const std::size_t n = std::min(cfg.n, eligible.size());
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t draw = 0; draw < n; ++draw) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const std::size_t pick = tree.find(unit * tree.total());
    out.push_back(eligible[pick].word);
    tree.remove(pick);
  }
  return out;
}

}  // namespace w2w
