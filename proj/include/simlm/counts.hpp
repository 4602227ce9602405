#ifndef SIMLM_COUNTS_HPP
#define SIMLM_COUNTS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simlm/vocabulary.hpp"

namespace simlm {

struct BigramEntry {
  WordId next;
  Count count;
  bool operator==(const BigramEntry &) const = default;
};

struct BigramCount {
  WordId first;
  WordId second;
  Count count;
};

// Unigram counts c(w) and sparse bigram counts c(w1,w2). Bigrams are kept in
// compressed rows: successors(w1) is sorted by successor id and holds no zero
// counts. Immutable once built.
class CountTable {
 public:
  CountTable() = default;

  // Validates every invariant and throws ValidationError on failure. Bigrams
  // may arrive in any order but must not repeat a pair.
  static CountTable from_parts(std::vector<Count> unigram,
                               std::vector<BigramCount> bigrams);

  std::size_t vocab_size() const { return unigram_.size(); }
  Count unigram(WordId w) const { return unigram_.at(w); }
  std::span<const Count> unigrams() const { return unigram_; }
  Count total_unigrams() const { return total_unigrams_; }

  Count bigram(WordId w1, WordId w2) const;
  std::span<const BigramEntry> successors(WordId w1) const;
  // Sum over w2 of c(w1, w2).
  Count successor_total(WordId w1) const { return row_totals_.at(w1); }

  // N, the number of bigram tokens.
  Count total_bigrams() const { return total_bigrams_; }
  std::size_t bigram_types() const { return entries_.size(); }

  // All stored bigrams in (w1, w2) order.
  std::vector<BigramCount> bigrams() const;

  bool operator==(const CountTable &other) const;

 private:
  std::vector<Count> unigram_;
  std::vector<std::size_t> offsets_{0};
  std::vector<BigramEntry> entries_;
  std::vector<Count> row_totals_;
  Count total_unigrams_ = 0;
  Count total_bigrams_ = 0;
};

struct CorpusCounts {
  Vocabulary vocab;
  CountTable table;
};

using Sentence = std::vector<WordId>;

// Whitespace tokenization, tokens taken verbatim.
std::vector<std::string_view> split_tokens(std::string_view line);

// Throws IngestionError with the absolute offset of the first bad byte;
// `base_offset` is the position of `text` within the enclosing stream.
void validate_utf8(std::string_view text, std::size_t base_offset = 0);

// Builds the vocabulary and counts from one string per sentence. Words seen
// fewer than `min_word_count` times collapse into <unk>. Bigrams never cross
// sentences. With threads > 1 the corpus is counted in shards and merged; the
// result does not depend on the thread count.
CorpusCounts build_counts(std::span<const std::string> sentences,
                          int min_word_count = 1, unsigned threads = 1);

// Maps sentences onto an existing vocabulary; unknown tokens become <unk>.
std::vector<Sentence> map_sentences(std::span<const std::string> sentences,
                                    const Vocabulary &vocab);

// Reads one sentence per line, skipping blank lines. Validates UTF-8 against
// the offset within the stream.
std::vector<std::string> read_sentences(std::istream &in);
std::vector<std::string> read_sentences_file(const std::string &path);

}  // namespace simlm

#endif  // SIMLM_COUNTS_HPP
