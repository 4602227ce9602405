#include "simlm/counts.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <thread>
#include <unordered_map>

#include "simlm/errors.hpp"

namespace simlm {

namespace {

std::uint64_t pack(WordId a, WordId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

using PairCounts = std::unordered_map<std::uint64_t, Count>;

void count_pairs(std::span<const Sentence> sentences, PairCounts &out) {
  for (const auto &s : sentences)
    for (std::size_t i = 1; i < s.size(); ++i) ++out[pack(s[i - 1], s[i])];
}

}  // namespace

CountTable CountTable::from_parts(std::vector<Count> unigram,
                                  std::vector<BigramCount> bigrams) {
  const std::size_t v = unigram.size();
  CountTable t;
  for (std::size_t w = 0; w < v; ++w) {
    if (unigram[w] < 0)
      throw ValidationError("negative unigram count for word id " + std::to_string(w));
    t.total_unigrams_ += unigram[w];
  }
  std::sort(bigrams.begin(), bigrams.end(), [](const BigramCount &a, const BigramCount &b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  t.offsets_.assign(v + 1, 0);
  t.row_totals_.assign(v, 0);
  t.entries_.reserve(bigrams.size());
  for (std::size_t i = 0; i < bigrams.size(); ++i) {
    const auto &b = bigrams[i];
    if (b.first >= v || b.second >= v)
      throw ValidationError("bigram refers to a word id outside the vocabulary");
    if (b.count <= 0)
      throw ValidationError("bigram count must be positive (" + std::to_string(b.first) +
                            "," + std::to_string(b.second) + ")");
    if (i > 0 && bigrams[i - 1].first == b.first && bigrams[i - 1].second == b.second)
      throw ValidationError("duplicate bigram (" + std::to_string(b.first) + "," +
                            std::to_string(b.second) + ")");
    t.entries_.push_back({b.second, b.count});
    ++t.offsets_[b.first + 1];
    t.row_totals_[b.first] += b.count;
    t.total_bigrams_ += b.count;
  }
  for (std::size_t w = 0; w < v; ++w) {
    t.offsets_[w + 1] += t.offsets_[w];
    if (t.row_totals_[w] > unigram[w])
      throw ValidationError("bigrams starting with word id " + std::to_string(w) +
                            " exceed its unigram count");
  }
  t.unigram_ = std::move(unigram);
  return t;
}

Count CountTable::bigram(WordId w1, WordId w2) const {
  auto row = successors(w1);
  auto it = std::lower_bound(row.begin(), row.end(), w2,
                             [](const BigramEntry &e, WordId w) { return e.next < w; });
  return it != row.end() && it->next == w2 ? it->count : 0;
}

std::span<const BigramEntry> CountTable::successors(WordId w1) const {
  if (w1 >= unigram_.size()) return {};
  return std::span(entries_).subspan(offsets_[w1], offsets_[w1 + 1] - offsets_[w1]);
}

std::vector<BigramCount> CountTable::bigrams() const {
  std::vector<BigramCount> out;
  out.reserve(entries_.size());
  for (WordId w = 0; w < unigram_.size(); ++w)
    for (const auto &e : successors(w)) out.push_back({w, e.next, e.count});
  return out;
}

bool CountTable::operator==(const CountTable &other) const {
  return unigram_ == other.unigram_ && offsets_ == other.offsets_ &&
         entries_ == other.entries_ && total_bigrams_ == other.total_bigrams_;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  while (i < line.size()) {
    while (i < line.size() && space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void validate_utf8(std::string_view text, std::size_t base_offset) {
  const auto *s = reinterpret_cast<const unsigned char *>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = s[i];
    std::size_t len;
    unsigned char lo = 0x80, hi = 0xBF;  // range of the first continuation byte
    if (c < 0x80) {
      ++i;
      continue;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      if (c == 0xE0) lo = 0xA0;
      if (c == 0xED) hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;
    } else {
      throw IngestionError(base_offset + i);
    }
    for (std::size_t k = 1; k < len; ++k) {
      if (i + k >= n) throw IngestionError(base_offset + i + k);
      unsigned char cc = s[i + k];
      unsigned char l = k == 1 ? lo : 0x80, h = k == 1 ? hi : 0xBF;
      if (cc < l || cc > h) throw IngestionError(base_offset + i + k);
    }
    i += len;
  }
}

CorpusCounts build_counts(std::span<const std::string> sentences, int min_word_count,
                          unsigned threads) {
  if (min_word_count < 1) throw ConfigError("min_word_count must be at least 1");

  std::size_t offset = 0;
  std::vector<std::vector<std::string_view>> tokenized;
  tokenized.reserve(sentences.size());
  std::unordered_map<std::string_view, Count> freq;
  std::vector<std::string_view> first_seen;
  std::size_t tokens = 0;
  for (const auto &line : sentences) {
    validate_utf8(line, offset);
    offset += line.size() + 1;
    auto toks = split_tokens(line);
    for (auto t : toks)
      if (freq[t]++ == 0) first_seen.push_back(t);
    tokens += toks.size();
    if (!toks.empty()) tokenized.push_back(std::move(toks));
  }
  if (tokens == 0) throw EmptyCorpusError();

  CorpusCounts out;
  for (auto w : first_seen)
    if (freq[w] >= min_word_count) out.vocab.add(w);

  std::vector<Sentence> ids;
  ids.reserve(tokenized.size());
  std::vector<Count> unigram(out.vocab.size(), 0);
  for (const auto &toks : tokenized) {
    Sentence s;
    s.reserve(toks.size());
    for (auto t : toks) {
      WordId id = out.vocab.lookup(t);
      ++unigram[id];
      s.push_back(id);
    }
    ids.push_back(std::move(s));
  }

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ids.size())));
  std::vector<PairCounts> shards(threads);
  if (threads == 1) {
    count_pairs(ids, shards[0]);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (ids.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = std::min(ids.size(), t * chunk);
      std::size_t end = std::min(ids.size(), begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        count_pairs(std::span(ids).subspan(begin, end - begin), shards[t]);
      });
    }
  }
  for (unsigned t = 1; t < threads; ++t)
    for (const auto &[key, c] : shards[t]) shards[0][key] += c;

  std::vector<BigramCount> bigrams;
  bigrams.reserve(shards[0].size());
  for (const auto &[key, c] : shards[0])
    bigrams.push_back({static_cast<WordId>(key >> 32), static_cast<WordId>(key & 0xffffffffu), c});
  out.table = CountTable::from_parts(std::move(unigram), std::move(bigrams));
  return out;
}

std::vector<Sentence> map_sentences(std::span<const std::string> sentences,
                                    const Vocabulary &vocab) {
  std::vector<Sentence> out;
  std::size_t offset = 0;
  for (const auto &line : sentences) {
    validate_utf8(line, offset);
    offset += line.size() + 1;
    Sentence s;
    for (auto t : split_tokens(line)) s.push_back(vocab.lookup(t));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> read_sentences(std::istream &in) {
  std::vector<std::string> out;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    validate_utf8(line, offset);
    offset += line.size() + 1;
    if (!split_tokens(line).empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::string> read_sentences_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_sentences(in);
}

}  // namespace simlm
