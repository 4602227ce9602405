#ifndef SIMLM_COOC_HPP
#define SIMLM_COOC_HPP

#include <array>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "simlm/backoff.hpp"

namespace simlm {

struct ConfusionEntry {
  WordId word;
  double prob;
};

// P_C(. | center), sparse and ordered by word id.
struct ConfusionRow {
  WordId center = 0;
  std::vector<ConfusionEntry> entries;
};

// Cooccurrence smoothing over maximum-likelihood bigram statistics. Every
// probability here comes from the joint c(w1,w2)/N: P(w1) and P(w2) are its
// left and right marginals, P(w2|w1) and P(w1|w2) its two conditionals.
// Terms whose conditioning side has zero count are dropped.
class CoocModel {
 public:
  explicit CoocModel(std::shared_ptr<const CorpusCounts> data);

  const Vocabulary &vocab() const { return data_->vocab; }
  std::size_t vocab_size() const { return left_.size(); }

  // Marginal probability of w as the first word of a bigram.
  double p_left(WordId w) const;
  // Marginal probability of w as the second word of a bigram.
  double p_right(WordId w) const;
  double p_next(WordId w2, WordId w1) const;  // P(w2 | w1)
  double p_prev(WordId w1, WordId w2) const;  // P(w1 | w2)

  // P_C(w1p | w1) = (1 / P(w1)) sum_w2 P(w1|w2) P(w1p|w2) P(w2). Throws
  // DomainError when P(w1) is 0.
  double confusion_prob(WordId w1p, WordId w1) const;
  const ConfusionRow &confusion_row(WordId w1) const;

  // P_S(w2 | w1) = sum_w1p P(w2|w1p) P_C(w1p|w1). Throws DomainError when
  // P(w1) is 0.
  double p_cooc(WordId w2, WordId w1) const;
  // Dense P_S(. | w1), cached.
  std::span<const double> cooc_row(WordId w1) const;

 private:
  void require_center(WordId w1) const;

  std::shared_ptr<const CorpusCounts> data_;
  double total_ = 0.0;
  std::vector<Count> left_, right_;
  std::vector<std::size_t> pred_offsets_;
  std::vector<BigramEntry> pred_;  // next field holds the predecessor id
  std::unique_ptr<std::once_flag[]> confusion_once_;
  mutable std::vector<ConfusionRow> confusion_;
  std::unique_ptr<std::once_flag[]> smoothed_once_;
  mutable std::vector<std::vector<double>> smoothed_;
};

// P_S as the redistribution inside the back-off estimator. Histories that
// never start a bigram fall back to the unigram distribution.
class CoocScheme : public RedistributionScheme {
 public:
  CoocScheme(const CoocModel &cooc, const BackoffModel &model) : cooc_(cooc), model_(model) {}
  std::string_view name() const override { return "cooc"; }
  double prob(WordId w1, WordId w2) const override;
  void distribution(WordId w1, std::span<double> out) const override;

 private:
  const CoocModel &cooc_;
  const BackoffModel &model_;
};

// lambda[0] P_ML(w2|w1) + lambda[1] P_S(w2|w1) + lambda[2] P(w2), with the
// unigram alone for histories that never start a bigram. Lambdas are
// nonnegative and sum to 1.
class CoocInterpolatedLM : public ConditionalModel {
 public:
  CoocInterpolatedLM(const CoocModel &cooc, const BackoffModel &model,
                     std::array<double, 3> lambdas);

  double prob(WordId w1, WordId w2) const override;
  double unigram(WordId w) const override { return model_.p_unigram(w); }
  const Vocabulary &vocabulary() const override { return model_.vocab(); }

 private:
  const CoocModel &cooc_;
  const BackoffModel &model_;
  std::array<double, 3> lambdas_;
};

}  // namespace simlm

#endif  // SIMLM_COOC_HPP
