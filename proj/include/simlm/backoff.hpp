#ifndef SIMLM_BACKOFF_HPP
#define SIMLM_BACKOFF_HPP

#include <atomic>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "simlm/counts.hpp"

namespace simlm {

// n_c: number of distinct bigram types seen exactly c times.
struct FreqOfFreq {
  std::map<Count, Count> n;
  Count operator()(Count c) const {
    auto it = n.find(c);
    return it == n.end() ? 0 : it->second;
  }
};

FreqOfFreq counts_of_counts(const CountTable &counts);

inline constexpr Count kNoCeiling = std::numeric_limits<Count>::max();

// Raw Good-Turing count (c+1) n_{c+1} / n_c, with no guard of any kind.
// Returns 0 when n_c is 0.
double good_turing_count(Count c, const FreqOfFreq &fof);

// Katz discounted count: Good-Turing below the ceiling, c itself at or above
// it. Falls back to c whenever the Good-Turing value is undefined, zero, or
// larger than c, so 0 < c* <= c always holds.
double discounted_count(Count c, const FreqOfFreq &fof, Count discount_ceiling);

struct BackoffConfig {
  // Bigrams counted fewer times than this are routed as unseen.
  Count min_bigram_count = 2;
  Count discount_ceiling = 5;

  void validate() const;
};

// Anything that returns a conditional distribution P(w2 | w1) over a closed
// vocabulary.
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;
  virtual double prob(WordId w1, WordId w2) const = 0;
  // Context-free probability, used where no history exists.
  virtual double unigram(WordId w) const = 0;
  virtual const Vocabulary &vocabulary() const = 0;
  // out[w2] = prob(w1, w2) for every w2; out.size() == vocabulary().size().
  virtual void distribution(WordId w1, std::span<double> out) const;
};

// Counts plus everything Katz needs that does not depend on the
// redistribution scheme: counts of counts, discounted counts, leftover mass
// and the MLE unigram distribution. Immutable.
class BackoffModel {
 public:
  explicit BackoffModel(std::shared_ptr<const CorpusCounts> data, BackoffConfig config = {});

  const CountTable &counts() const { return data_->table; }
  const Vocabulary &vocab() const { return data_->vocab; }
  const std::shared_ptr<const CorpusCounts> &data() const { return data_; }
  const BackoffConfig &config() const { return config_; }
  const FreqOfFreq &fof() const { return fof_; }
  std::size_t vocab_size() const { return unigram_.size(); }

  bool is_seen(WordId w1, WordId w2) const {
    return counts().bigram(w1, w2) >= config_.min_bigram_count;
  }
  // Successors of w1 counted at least min_bigram_count times, by id.
  std::span<const BigramEntry> seen_successors(WordId w1) const;

  double discounted(Count c) const;
  // c*(w1,w2) / c(w1). Throws NotSeenError for unseen pairs and DomainError
  // when c(w1) is 0.
  double p_d(WordId w1, WordId w2) const;
  // 1 - sum of p_d over seen successors. Throws DomainError when c(w1) is 0.
  double beta_tilde(WordId w1) const;

  double p_unigram(WordId w) const { return unigram_.at(w); }
  std::span<const double> unigram_dist() const { return unigram_; }

 private:
  std::shared_ptr<const CorpusCounts> data_;
  BackoffConfig config_;
  FreqOfFreq fof_;
  std::vector<double> discount_;  // c* for c < ceiling, indexed by c
  std::vector<std::size_t> seen_offsets_;
  std::vector<BigramEntry> seen_;
  std::vector<double> beta_tilde_;
  std::vector<double> unigram_;
};

// P_r(w2 | w1), the distribution that shares out the leftover mass.
// Implementations must be proper distributions over w2 for every w1.
class RedistributionScheme {
 public:
  virtual ~RedistributionScheme() = default;
  virtual std::string_view name() const = 0;
  virtual double prob(WordId w1, WordId w2) const = 0;
  virtual void distribution(WordId w1, std::span<double> out) const;
};

// Katz: P_r(w2 | w1) = P(w2).
class UnigramScheme : public RedistributionScheme {
 public:
  explicit UnigramScheme(const BackoffModel &model) : model_(model) {}
  std::string_view name() const override { return "katz"; }
  double prob(WordId, WordId w2) const override { return model_.p_unigram(w2); }
  void distribution(WordId w1, std::span<double> out) const override;

 private:
  const BackoffModel &model_;
};

struct Leftover {
  double beta_tilde;
  double alpha;
};

// The back-off estimator: P_d on seen pairs, alpha(w1) * P_r(w2|w1) on the
// rest, and the unigram distribution for histories never seen in training.
// alpha is computed on first use per history and cached; concurrent callers
// may race to fill an entry but always store the same value.
class BackoffLM : public ConditionalModel {
 public:
  BackoffLM(const BackoffModel &model, const RedistributionScheme &scheme);

  double prob(WordId w1, WordId w2) const override;
  double unigram(WordId w) const override { return model_.p_unigram(w); }
  const Vocabulary &vocabulary() const override { return model_.vocab(); }
  void distribution(WordId w1, std::span<double> out) const override;

  // beta~(w1) and alpha(w1) = beta~ / (1 - sum over seen w2 of P_r). Throws
  // DomainError when c(w1) is 0 and DegenerateDistributionError when the
  // denominator vanishes while mass is left over.
  Leftover leftover_and_alpha(WordId w1) const;
  // alpha computed the long way, beta~ / sum over unseen w2 of P_r.
  double alpha_by_unseen_sum(WordId w1) const;

  const BackoffModel &model() const { return model_; }
  const RedistributionScheme &scheme() const { return scheme_; }

 private:
  double alpha(WordId w1) const;

  const BackoffModel &model_;
  const RedistributionScheme &scheme_;
  mutable std::vector<std::atomic<double>> alpha_cache_;
};

}  // namespace simlm

#endif  // SIMLM_BACKOFF_HPP
