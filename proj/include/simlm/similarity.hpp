#ifndef SIMLM_SIMILARITY_HPP
#define SIMLM_SIMILARITY_HPP

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "simlm/backoff.hpp"

namespace simlm {

// k: neighbor cap. t: distance threshold. beta: weight decay. gamma: weight of
// the unigram in the interpolated redistribution. t and beta are on the
// base-10 scale: distances use log10 and weights are 10^(-beta * D).
struct SimilarityParams {
  int k = 60;
  double t = 2.5;
  double beta = 4.0;
  double gamma = 0.15;

  void validate() const;
  bool operator==(const SimilarityParams &) const = default;
};

enum class KlMode {
  kExact,      // sum over the whole vocabulary
  kTruncated,  // sum over observed successors of w1 only, clamped at 0
};

// D(w1 || w1p) = sum_w2 P(w2|w1) log10(P(w2|w1) / P(w2|w1p)) with P taken from
// the baseline back-off model. Infinite when w1p gives zero probability to a
// word w1 predicts. Throws DomainError if either word has zero count.
double kl_distance(WordId w1, WordId w1p, const BackoffLM &base, KlMode mode = KlMode::kExact);

struct RankedWord {
  WordId word;
  double distance;
};

// Distances from a conditioning word to every candidate (every other word
// with a positive count), ordered by distance and then word id. Lists are
// built on first request and kept; in exact mode the log10 baseline rows are
// cached as well, so memory grows as V^2 for a fully queried vocabulary.
class DistanceIndex {
 public:
  explicit DistanceIndex(const BackoffLM &base, KlMode mode = KlMode::kExact);

  const BackoffLM &base() const { return base_; }
  KlMode mode() const { return mode_; }
  bool is_candidate(WordId w) const { return base_.model().counts().unigram(w) > 0; }

  // Same value kl_distance() returns.
  double distance(WordId w1, WordId w1p) const;
  // Candidates other than w1 with finite distance. Empty for zero-count w1.
  std::span<const RankedWord> ranked(WordId w1) const;

 private:
  const std::vector<double> &log_row(WordId w) const;

  const BackoffLM &base_;
  KlMode mode_;
  std::size_t vocab_size_;
  std::unique_ptr<std::once_flag[]> log_once_;
  mutable std::vector<std::vector<double>> log_rows_;
  std::unique_ptr<std::once_flag[]> ranked_once_;
  mutable std::vector<std::vector<RankedWord>> ranked_;
};

struct Neighbor {
  WordId word;
  double distance;
  double weight;  // normalized
};

// S(w1): at most k candidates with distance below t, nearest first.
struct NeighborSet {
  WordId center = 0;
  std::vector<Neighbor> neighbors;
  bool empty() const { return neighbors.empty(); }
};

// Throws DomainError if c(w1) is 0. An empty set is a valid result.
NeighborSet neighbor_set(WordId w1, const SimilarityParams &params, const DistanceIndex &index);

// Weighted average of the neighbors' baseline conditionals. Throws
// NoNeighborsError on an empty set.
double p_sim(WordId w2, const NeighborSet &set, const BackoffLM &base);

// P_r(w2|w1) = gamma P(w2) + (1 - gamma) P_SIM(w2|w1), or P(w2) when w1 has
// no neighbors. Neighbor sets are cached per conditioning word.
class SimilarityScheme : public RedistributionScheme {
 public:
  SimilarityScheme(const DistanceIndex &index, SimilarityParams params);

  std::string_view name() const override { return "sim"; }
  double prob(WordId w1, WordId w2) const override;
  void distribution(WordId w1, std::span<double> out) const override;

  const NeighborSet &neighbors(WordId w1) const;
  const SimilarityParams &params() const { return params_; }

 private:
  const DistanceIndex &index_;
  const BackoffLM &base_;
  SimilarityParams params_;
  std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<NeighborSet> sets_;
};

}  // namespace simlm

#endif  // SIMLM_SIMILARITY_HPP
