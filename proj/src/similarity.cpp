#include "simlm/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simlm/errors.hpp"

namespace simlm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_count(const BackoffLM &base, WordId w) {
  if (w >= base.model().vocab_size() || base.model().counts().unigram(w) == 0)
    throw DomainError("KL distance needs a word with positive count");
}

double safe_log10(double p) { return p > 0.0 ? std::log10(p) : -kInf; }

// Sum of p[i] * (logp[i] - logq[i]) over the support of p.
double relative_entropy(std::span<const double> p, std::span<const double> logp,
                        std::span<const double> logq) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (logq[i] == -kInf) return kInf;
    d += p[i] * (logp[i] - logq[i]);
  }
  return std::max(d, 0.0);
}

double truncated_distance(WordId w1, WordId w1p, const BackoffLM &base) {
  double d = 0.0;
  for (const auto &e : base.model().counts().successors(w1)) {
    double p = base.prob(w1, e.next);
    if (p <= 0.0) continue;
    double q = base.prob(w1p, e.next);
    if (q <= 0.0) return kInf;
    d += p * (std::log10(p) - std::log10(q));
  }
  return std::max(d, 0.0);
}

}  // namespace

void SimilarityParams::validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
}

double kl_distance(WordId w1, WordId w1p, const BackoffLM &base, KlMode mode) {
  require_count(base, w1);
  require_count(base, w1p);
  if (mode == KlMode::kTruncated) return truncated_distance(w1, w1p, base);
  const std::size_t v = base.model().vocab_size();
  std::vector<double> p(v), q(v), logp(v), logq(v);
  base.distribution(w1, p);
  base.distribution(w1p, q);
  std::transform(p.begin(), p.end(), logp.begin(), safe_log10);
  std::transform(q.begin(), q.end(), logq.begin(), safe_log10);
  return relative_entropy(p, logp, logq);
}

DistanceIndex::DistanceIndex(const BackoffLM &base, KlMode mode)
    : base_(base),
      mode_(mode),
      vocab_size_(base.model().vocab_size()),
      log_once_(new std::once_flag[vocab_size_]),
      log_rows_(vocab_size_),
      ranked_once_(new std::once_flag[vocab_size_]),
      ranked_(vocab_size_) {}

const std::vector<double> &DistanceIndex::log_row(WordId w) const {
  std::call_once(log_once_[w], [&] {
    std::vector<double> row(vocab_size_);
    base_.distribution(w, row);
    std::transform(row.begin(), row.end(), row.begin(), safe_log10);
    log_rows_[w] = std::move(row);
  });
  return log_rows_[w];
}

double DistanceIndex::distance(WordId w1, WordId w1p) const {
  require_count(base_, w1);
  require_count(base_, w1p);
  if (mode_ == KlMode::kTruncated) return truncated_distance(w1, w1p, base_);
  std::vector<double> p(vocab_size_);
  base_.distribution(w1, p);
  return relative_entropy(p, log_row(w1), log_row(w1p));
}

std::span<const RankedWord> DistanceIndex::ranked(WordId w1) const {
  if (w1 >= vocab_size_ || !is_candidate(w1)) return {};
  std::call_once(ranked_once_[w1], [&] {
    std::vector<RankedWord> out;
    std::vector<double> p;
    if (mode_ == KlMode::kExact) {
      p.resize(vocab_size_);
      base_.distribution(w1, p);
    }
    for (WordId w = 0; w < vocab_size_; ++w) {
      if (w == w1 || !is_candidate(w)) continue;
      double d = mode_ == KlMode::kExact ? relative_entropy(p, log_row(w1), log_row(w))
                                         : truncated_distance(w1, w, base_);
      if (std::isfinite(d)) out.push_back({w, d});
    }
    std::sort(out.begin(), out.end(), [](const RankedWord &a, const RankedWord &b) {
      return a.distance != b.distance ? a.distance < b.distance : a.word < b.word;
    });
    ranked_[w1] = std::move(out);
  });
  return ranked_[w1];
}

NeighborSet neighbor_set(WordId w1, const SimilarityParams &params, const DistanceIndex &index) {
  params.validate();
  require_count(index.base(), w1);
  NeighborSet set;
  set.center = w1;
  for (const auto &r : index.ranked(w1)) {
    if (set.neighbors.size() >= static_cast<std::size_t>(params.k) || !(r.distance < params.t))
      break;
    set.neighbors.push_back({r.word, r.distance, 0.0});
  }
  if (set.empty()) return set;
  // Shift by the nearest distance before exponentiating; it cancels on
  // normalization.
  const double d0 = set.neighbors.front().distance;
  double total = 0.0;
  for (auto &n : set.neighbors) {
    n.weight = std::pow(10.0, -params.beta * (n.distance - d0));
    total += n.weight;
  }
  for (auto &n : set.neighbors) n.weight /= total;
  return set;
}

double p_sim(WordId w2, const NeighborSet &set, const BackoffLM &base) {
  if (set.empty()) throw NoNeighborsError("no neighbors for word id " + std::to_string(set.center));
  double p = 0.0;
  for (const auto &n : set.neighbors) p += n.weight * base.prob(n.word, w2);
  return p;
}

SimilarityScheme::SimilarityScheme(const DistanceIndex &index, SimilarityParams params)
    : index_(index),
      base_(index.base()),
      params_(params),
      once_(new std::once_flag[index.base().model().vocab_size()]),
      sets_(index.base().model().vocab_size()) {
  params_.validate();
}

const NeighborSet &SimilarityScheme::neighbors(WordId w1) const {
  std::call_once(once_[w1], [&] {
    if (index_.is_candidate(w1)) {
      sets_[w1] = neighbor_set(w1, params_, index_);
    } else {
      sets_[w1].center = w1;
    }
  });
  return sets_[w1];
}

double SimilarityScheme::prob(WordId w1, WordId w2) const {
  const double pu = base_.unigram(w2);
  const NeighborSet &set = neighbors(w1);
  if (set.empty() || params_.gamma == 1.0) return pu;
  return params_.gamma * pu + (1.0 - params_.gamma) * p_sim(w2, set, base_);
}

void SimilarityScheme::distribution(WordId w1, std::span<double> out) const {
  auto u = base_.model().unigram_dist();
  const NeighborSet &set = neighbors(w1);
  if (set.empty() || params_.gamma == 1.0) {
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  std::vector<double> sim(out.size(), 0.0), row(out.size());
  for (const auto &n : set.neighbors) {
    base_.distribution(n.word, row);
    for (std::size_t i = 0; i < row.size(); ++i) sim[i] += n.weight * row[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = params_.gamma * u[i] + (1.0 - params_.gamma) * sim[i];
}

}  // namespace simlm
