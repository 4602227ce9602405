#include "simlm/cooc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simlm/errors.hpp"

namespace simlm {

CoocModel::CoocModel(std::shared_ptr<const CorpusCounts> data) : data_(std::move(data)) {
  const CountTable &t = data_->table;
  const std::size_t v = t.vocab_size();
  total_ = static_cast<double>(t.total_bigrams());
  left_.assign(v, 0);
  right_.assign(v, 0);
  pred_offsets_.assign(v + 1, 0);
  for (WordId w = 0; w < v; ++w) {
    left_[w] = t.successor_total(w);
    for (const auto &e : t.successors(w)) {
      right_[e.next] += e.count;
      ++pred_offsets_[e.next + 1];
    }
  }
  for (std::size_t w = 0; w < v; ++w) pred_offsets_[w + 1] += pred_offsets_[w];
  pred_.resize(t.bigram_types());
  std::vector<std::size_t> fill(pred_offsets_.begin(), pred_offsets_.end() - 1);
  for (WordId w = 0; w < v; ++w)
    for (const auto &e : t.successors(w)) pred_[fill[e.next]++] = {w, e.count};

  confusion_once_.reset(new std::once_flag[v]);
  confusion_.resize(v);
  smoothed_once_.reset(new std::once_flag[v]);
  smoothed_.resize(v);
}

double CoocModel::p_left(WordId w) const {
  return total_ > 0 ? static_cast<double>(left_.at(w)) / total_ : 0.0;
}

double CoocModel::p_right(WordId w) const {
  return total_ > 0 ? static_cast<double>(right_.at(w)) / total_ : 0.0;
}

double CoocModel::p_next(WordId w2, WordId w1) const {
  if (left_.at(w1) == 0) return 0.0;
  return static_cast<double>(data_->table.bigram(w1, w2)) / static_cast<double>(left_[w1]);
}

double CoocModel::p_prev(WordId w1, WordId w2) const {
  if (right_.at(w2) == 0) return 0.0;
  return static_cast<double>(data_->table.bigram(w1, w2)) / static_cast<double>(right_[w2]);
}

void CoocModel::require_center(WordId w1) const {
  if (w1 >= vocab_size() || left_[w1] == 0)
    throw DomainError("confusion probability needs P(w1) > 0");
}

double CoocModel::confusion_prob(WordId w1p, WordId w1) const {
  require_center(w1);
  if (w1p >= vocab_size()) return 0.0;
  double sum = 0.0;
  for (const auto &e : data_->table.successors(w1))
    sum += p_prev(w1, e.next) * p_prev(w1p, e.next) * p_right(e.next);
  return sum / p_left(w1);
}

const ConfusionRow &CoocModel::confusion_row(WordId w1) const {
  require_center(w1);
  std::call_once(confusion_once_[w1], [&] {
    std::vector<double> dense(vocab_size(), 0.0);
    const double pw1 = p_left(w1);
    for (const auto &e : data_->table.successors(w1)) {
      const double scale = p_prev(w1, e.next) * p_right(e.next) / pw1;
      const double col = static_cast<double>(right_[e.next]);
      for (std::size_t i = pred_offsets_[e.next]; i < pred_offsets_[e.next + 1]; ++i)
        dense[pred_[i].next] += scale * (static_cast<double>(pred_[i].count) / col);
    }
    ConfusionRow row;
    row.center = w1;
    for (WordId w = 0; w < dense.size(); ++w)
      if (dense[w] > 0.0) row.entries.push_back({w, dense[w]});
    confusion_[w1] = std::move(row);
  });
  return confusion_[w1];
}

std::span<const double> CoocModel::cooc_row(WordId w1) const {
  const ConfusionRow &conf = confusion_row(w1);
  std::call_once(smoothed_once_[w1], [&] {
    std::vector<double> row(vocab_size(), 0.0);
    for (const auto &c : conf.entries) {
      const double denom = static_cast<double>(left_[c.word]);
      for (const auto &e : data_->table.successors(c.word))
        row[e.next] += c.prob * (static_cast<double>(e.count) / denom);
    }
    smoothed_[w1] = std::move(row);
  });
  return smoothed_[w1];
}

double CoocModel::p_cooc(WordId w2, WordId w1) const { return cooc_row(w1)[w2]; }

double CoocScheme::prob(WordId w1, WordId w2) const {
  if (cooc_.p_left(w1) == 0.0) return model_.p_unigram(w2);
  return cooc_.p_cooc(w2, w1);
}

void CoocScheme::distribution(WordId w1, std::span<double> out) const {
  if (cooc_.p_left(w1) == 0.0) {
    auto u = model_.unigram_dist();
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  auto row = cooc_.cooc_row(w1);
  std::copy(row.begin(), row.end(), out.begin());
}

CoocInterpolatedLM::CoocInterpolatedLM(const CoocModel &cooc, const BackoffModel &model,
                                       std::array<double, 3> lambdas)
    : cooc_(cooc), model_(model), lambdas_(lambdas) {
  double sum = 0.0;
  for (double l : lambdas_) {
    if (!(l >= 0.0)) throw ConfigError("interpolation weights must be nonnegative");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("interpolation weights must sum to 1");
}

double CoocInterpolatedLM::prob(WordId w1, WordId w2) const {
  const double pu = model_.p_unigram(w2);
  if (cooc_.p_left(w1) == 0.0) return pu;
  return lambdas_[0] * cooc_.p_next(w2, w1) + lambdas_[1] * cooc_.p_cooc(w2, w1) +
         lambdas_[2] * pu;
}

}  // namespace simlm
