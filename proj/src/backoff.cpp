#include "simlm/backoff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simlm/errors.hpp"

namespace simlm {

namespace {
constexpr double kUncached = std::numeric_limits<double>::quiet_NaN();
// 1 - (seen P_r mass) at or below this is treated as zero.
constexpr double kDegenerateEps = 1e-12;
}  // namespace

FreqOfFreq counts_of_counts(const CountTable &counts) {
  FreqOfFreq fof;
  for (WordId w = 0; w < counts.vocab_size(); ++w)
    for (const auto &e : counts.successors(w)) ++fof.n[e.count];
  return fof;
}

double good_turing_count(Count c, const FreqOfFreq &fof) {
  if (c <= 0) throw DomainError("Good-Turing count needs c >= 1, got " + std::to_string(c));
  Count nc = fof(c);
  if (nc == 0) return 0.0;
  return static_cast<double>(c + 1) * static_cast<double>(fof(c + 1)) / static_cast<double>(nc);
}

double discounted_count(Count c, const FreqOfFreq &fof, Count discount_ceiling) {
  if (c <= 0) throw DomainError("discounted count needs c >= 1, got " + std::to_string(c));
  if (c >= discount_ceiling) return static_cast<double>(c);
  if (fof(c) == 0 || fof(c + 1) == 0) return static_cast<double>(c);
  double star = good_turing_count(c, fof);
  return star > static_cast<double>(c) ? static_cast<double>(c) : star;
}

void BackoffConfig::validate() const {
  if (min_bigram_count < 1) throw ConfigError("min_bigram_count must be at least 1");
  if (discount_ceiling < 1) throw ConfigError("discount_ceiling must be at least 1");
}

void ConditionalModel::distribution(WordId w1, std::span<double> out) const {
  for (std::size_t w2 = 0; w2 < out.size(); ++w2) out[w2] = prob(w1, static_cast<WordId>(w2));
}

BackoffModel::BackoffModel(std::shared_ptr<const CorpusCounts> data, BackoffConfig config)
    : data_(std::move(data)), config_(config) {
  config_.validate();
  const CountTable &t = counts();
  const std::size_t v = t.vocab_size();
  fof_ = counts_of_counts(t);

  Count max_count = fof_.n.empty() ? 0 : fof_.n.rbegin()->first;
  Count table_size = std::min(config_.discount_ceiling, max_count + 1);
  discount_.assign(static_cast<std::size_t>(std::max<Count>(table_size, 1)), 0.0);
  for (Count c = 1; c < table_size; ++c)
    discount_[c] = discounted_count(c, fof_, config_.discount_ceiling);

  seen_offsets_.assign(v + 1, 0);
  beta_tilde_.assign(v, 1.0);
  for (WordId w = 0; w < v; ++w) {
    double kept = 0.0;
    for (const auto &e : t.successors(w)) {
      if (e.count < config_.min_bigram_count) continue;
      seen_.push_back(e);
      kept += discounted(e.count);
    }
    seen_offsets_[w + 1] = seen_.size();
    Count cw = t.unigram(w);
    if (cw > 0) beta_tilde_[w] = (static_cast<double>(cw) - kept) / static_cast<double>(cw);
  }

  unigram_.assign(v, 0.0);
  const double total = static_cast<double>(t.total_unigrams());
  if (total > 0)
    for (WordId w = 0; w < v; ++w) unigram_[w] = static_cast<double>(t.unigram(w)) / total;
}

std::span<const BigramEntry> BackoffModel::seen_successors(WordId w1) const {
  if (w1 >= vocab_size()) return {};
  return std::span(seen_).subspan(seen_offsets_[w1], seen_offsets_[w1 + 1] - seen_offsets_[w1]);
}

double BackoffModel::discounted(Count c) const {
  if (c > 0 && static_cast<std::size_t>(c) < discount_.size()) return discount_[c];
  return discounted_count(c, fof_, config_.discount_ceiling);
}

double BackoffModel::p_d(WordId w1, WordId w2) const {
  Count cw = counts().unigram(w1);
  if (cw == 0) throw DomainError("conditioning word '" + vocab().word(w1) + "' has zero count");
  Count c = counts().bigram(w1, w2);
  if (c < config_.min_bigram_count)
    throw NotSeenError("not a seen bigram: " + vocab().word(w1) + " " + vocab().word(w2));
  return discounted(c) / static_cast<double>(cw);
}

double BackoffModel::beta_tilde(WordId w1) const {
  if (counts().unigram(w1) == 0)
    throw DomainError("conditioning word '" + vocab().word(w1) + "' has zero count");
  return beta_tilde_[w1];
}

void RedistributionScheme::distribution(WordId w1, std::span<double> out) const {
  for (std::size_t w2 = 0; w2 < out.size(); ++w2) out[w2] = prob(w1, static_cast<WordId>(w2));
}

void UnigramScheme::distribution(WordId, std::span<double> out) const {
  auto u = model_.unigram_dist();
  std::copy(u.begin(), u.end(), out.begin());
}

BackoffLM::BackoffLM(const BackoffModel &model, const RedistributionScheme &scheme)
    : model_(model), scheme_(scheme), alpha_cache_(model.vocab_size()) {
  for (auto &a : alpha_cache_) a.store(kUncached, std::memory_order_relaxed);
}

Leftover BackoffLM::leftover_and_alpha(WordId w1) const {
  const double beta = model_.beta_tilde(w1);
  if (beta <= 0.0) return {beta, 0.0};
  double seen_mass = 0.0;
  for (const auto &e : model_.seen_successors(w1)) seen_mass += scheme_.prob(w1, e.next);
  const double denom = 1.0 - seen_mass;
  if (denom <= kDegenerateEps)
    throw DegenerateDistributionError("scheme '" + std::string(scheme_.name()) +
                                      "' leaves no mass for unseen successors of '" +
                                      model_.vocab().word(w1) + "'");
  return {beta, beta / denom};
}

double BackoffLM::alpha_by_unseen_sum(WordId w1) const {
  const double beta = model_.beta_tilde(w1);
  if (beta <= 0.0) return 0.0;
  std::vector<double> pr(model_.vocab_size());
  scheme_.distribution(w1, pr);
  for (const auto &e : model_.seen_successors(w1)) pr[e.next] = 0.0;
  double unseen_mass = 0.0;
  for (double p : pr) unseen_mass += p;
  if (unseen_mass <= kDegenerateEps)
    throw DegenerateDistributionError("no unseen mass after '" + model_.vocab().word(w1) + "'");
  return beta / unseen_mass;
}

double BackoffLM::alpha(WordId w1) const {
  double a = alpha_cache_[w1].load(std::memory_order_relaxed);
  if (std::isnan(a)) {
    a = leftover_and_alpha(w1).alpha;
    alpha_cache_[w1].store(a, std::memory_order_relaxed);
  }
  return a;
}

double BackoffLM::prob(WordId w1, WordId w2) const {
  const CountTable &t = model_.counts();
  Count cw = t.unigram(w1);
  if (cw == 0) return model_.p_unigram(w2);
  Count c = t.bigram(w1, w2);
  if (c >= model_.config().min_bigram_count)
    return model_.discounted(c) / static_cast<double>(cw);
  double a = alpha(w1);
  return a == 0.0 ? 0.0 : a * scheme_.prob(w1, w2);
}

void BackoffLM::distribution(WordId w1, std::span<double> out) const {
  const CountTable &t = model_.counts();
  Count cw = t.unigram(w1);
  if (cw == 0) {
    auto u = model_.unigram_dist();
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  double a = alpha(w1);
  if (a == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
  } else {
    scheme_.distribution(w1, out);
    for (double &p : out) p *= a;
  }
  for (const auto &e : model_.seen_successors(w1))
    out[e.next] = model_.discounted(e.count) / static_cast<double>(cw);
}

}  // namespace simlm
