#ifndef SIMLM_SYNTHETIC_HPP
#define SIMLM_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace simlm {

// Deterministic random source. Values are derived from the raw mt19937_64
// stream directly, so output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                      // [0, 1)
  std::size_t below(std::size_t n);      // [0, n)
  std::size_t pick(const std::vector<double> &cumulative);  // by cumulative weights
  template <typename It>
  void shuffle(It first, It last) {
    for (auto n = last - first; n > 1; --n) std::swap(first[n - 1], first[below(n)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct PlantedConfig {
  int classes = 4;
  int words_per_class = 25;
  // Fraction of all word-pair types withheld from training text.
  double held_out_fraction = 0.2;
  int min_sentence_length = 8;
  int max_sentence_length = 16;
  double zipf_exponent = 1.0;
};

// A class-structured bigram source. Words in the same class share one
// successor distribution: the class of the next word follows a fixed cyclic
// transition table, and the word within that class follows a Zipf law whose
// ranking depends on the source class. A random subset of pair types is
// marked held out; training text never contains them.
class PlantedModel {
 public:
  PlantedModel(PlantedConfig config, std::uint64_t seed);

  const PlantedConfig &config() const { return config_; }
  std::size_t size() const { return words_.size(); }
  const std::string &word(std::size_t i) const { return words_[i]; }
  int class_of(std::size_t i) const { return static_cast<int>(i) / config_.words_per_class; }
  // True P(w2 | w1).
  double prob(std::size_t w1, std::size_t w2) const;
  bool held_out(std::size_t w1, std::size_t w2) const { return held_out_[w1 * size() + w2]; }

  // Word indices of one sentence drawn from the full model.
  std::vector<std::size_t> sample(Rng &rng) const;
  std::vector<std::size_t> sample(Rng &rng, std::size_t length) const;
  // Sentences as text. Training text is cut at every held-out pair, so those
  // pairs never appear as bigrams.
  std::vector<std::string> sample_text(Rng &rng, std::size_t sentences, bool training) const;

 private:
  PlantedConfig config_;
  std::vector<std::string> words_;
  std::vector<std::vector<double>> cumulative_;  // per source class
  std::vector<std::vector<double>> prob_;        // per source class
  std::vector<double> start_cumulative_;
  std::vector<bool> held_out_;
};

struct SyntheticCorpus {
  std::vector<std::string> train, tune, test;
};

SyntheticCorpus generate_corpus(const PlantedModel &model, std::size_t train_sentences,
                                std::size_t tune_sentences, std::size_t test_sentences,
                                std::uint64_t seed);

struct LatticeGenConfig {
  // Acoustic advantage given to the corrupted word.
  double margin = 0.5;
  // Probability that a position gets a corrupted alternative.
  double confusion_rate = 0.5;
  int min_length = 5;
  int max_length = 10;
};

// Lattice files (text) over the planted vocabulary. Each is a chain of
// positions holding the reference word and, at confusable positions, a random
// other word whose acoustic score is better by `margin`.
std::vector<std::string> generate_lattices(const PlantedModel &model, std::size_t count,
                                           const LatticeGenConfig &config, std::uint64_t seed);

}  // namespace simlm

#endif  // SIMLM_SYNTHETIC_HPP
