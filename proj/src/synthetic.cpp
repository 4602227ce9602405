#include "simlm/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "simlm/errors.hpp"

namespace simlm {

namespace {

std::vector<double> cumulate(const std::vector<double> &weights) {
  std::vector<double> c(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) c[i] = (total += weights[i]);
  for (double &x : c) x /= total;
  c.back() = 1.0;
  return c;
}

// Next-class distribution for source class c.
std::vector<double> class_transitions(int c, int classes) {
  std::vector<double> t(classes, 0.0);
  if (classes == 1) return {1.0};
  t[(c + 1) % classes] += 0.6;
  t[(c + 2) % classes] += 0.25;
  double rest = 1.0 - 0.6 - 0.25;
  std::vector<int> others;
  for (int d = 0; d < classes; ++d)
    if (d != (c + 1) % classes && d != (c + 2) % classes) others.push_back(d);
  if (others.empty()) {
    t[(c + 1) % classes] += rest;
  } else {
    for (int d : others) t[d] += rest / static_cast<double>(others.size());
  }
  return t;
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::size_t Rng::pick(const std::vector<double> &cumulative) {
  const double u = uniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

PlantedModel::PlantedModel(PlantedConfig config, std::uint64_t seed) : config_(config) {
  if (config_.classes < 1 || config_.words_per_class < 1)
    throw ConfigError("planted model needs at least one class and one word per class");
  if (config_.min_sentence_length < 1 || config_.max_sentence_length < config_.min_sentence_length)
    throw ConfigError("bad sentence length range");
  if (!(config_.held_out_fraction >= 0.0 && config_.held_out_fraction < 1.0))
    throw ConfigError("held-out fraction must lie in [0, 1)");
  Rng rng(seed);
  const int classes = config_.classes, per = config_.words_per_class;
  for (int c = 0; c < classes; ++c)
    for (int i = 0; i < per; ++i) words_.push_back(fmt::format("c{}_w{:02}", c, i));
  const std::size_t v = words_.size();

  std::vector<double> zipf(per);
  for (int r = 0; r < per; ++r) zipf[r] = std::pow(r + 1.0, -config_.zipf_exponent);
  double zsum = 0.0;
  for (double z : zipf) zsum += z;

  for (int c = 0; c < classes; ++c) {
    auto trans = class_transitions(c, classes);
    std::vector<double> p(v, 0.0);
    for (int d = 0; d < classes; ++d) {
      std::vector<int> rank(per);
      for (int i = 0; i < per; ++i) rank[i] = i;
      rng.shuffle(rank.begin(), rank.end());
      for (int i = 0; i < per; ++i) p[d * per + i] = trans[d] * zipf[rank[i]] / zsum;
    }
    cumulative_.push_back(cumulate(p));
    prob_.push_back(std::move(p));
  }
  std::vector<double> start(v);
  for (std::size_t w = 0; w < v; ++w) start[w] = zipf[w % per];
  start_cumulative_ = cumulate(start);

  std::vector<std::size_t> pairs(v * v);
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = i;
  rng.shuffle(pairs.begin(), pairs.end());
  held_out_.assign(v * v, false);
  const auto n_held = static_cast<std::size_t>(std::llround(config_.held_out_fraction * pairs.size()));
  for (std::size_t i = 0; i < n_held; ++i) held_out_[pairs[i]] = true;
}

double PlantedModel::prob(std::size_t w1, std::size_t w2) const {
  return prob_[class_of(w1)][w2];
}

std::vector<std::size_t> PlantedModel::sample(Rng &rng) const {
  const int span = config_.max_sentence_length - config_.min_sentence_length + 1;
  return sample(rng, static_cast<std::size_t>(config_.min_sentence_length) + rng.below(span));
}

std::vector<std::size_t> PlantedModel::sample(Rng &rng, std::size_t len) const {
  std::vector<std::size_t> s;
  s.push_back(rng.pick(start_cumulative_));
  while (s.size() < len) s.push_back(rng.pick(cumulative_[class_of(s.back())]));
  return s;
}

std::vector<std::string> PlantedModel::sample_text(Rng &rng, std::size_t sentences,
                                                   bool training) const {
  std::vector<std::string> out;
  for (std::size_t n = 0; n < sentences; ++n) {
    auto s = sample(rng);
    std::string line = words_[s[0]];
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (training && held_out(s[i - 1], s[i])) {
        out.push_back(std::move(line));
        line.clear();
      } else {
        line += ' ';
      }
      line += words_[s[i]];
    }
    out.push_back(std::move(line));
  }
  return out;
}

SyntheticCorpus generate_corpus(const PlantedModel &model, std::size_t train_sentences,
                                std::size_t tune_sentences, std::size_t test_sentences,
                                std::uint64_t seed) {
  Rng rng(seed);
  SyntheticCorpus c;
  c.train = model.sample_text(rng, train_sentences, true);
  c.tune = model.sample_text(rng, tune_sentences, false);
  c.test = model.sample_text(rng, test_sentences, false);
  return c;
}

std::vector<std::string> generate_lattices(const PlantedModel &model, std::size_t count,
                                           const LatticeGenConfig &config, std::uint64_t seed) {
  if (config.min_length < 1 || config.max_length < config.min_length)
    throw ConfigError("bad lattice length range");
  if (!(config.margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  Rng rng(seed);
  std::vector<std::string> files;
  for (std::size_t n = 0; n < count; ++n) {
    const int span = config.max_length - config.min_length + 1;
    const auto len = static_cast<std::size_t>(config.min_length) + rng.below(span);
    const auto ref = model.sample(rng, len);
    std::string text = fmt::format("LATTICE {} 0 {}\n", len + 1, len);
    for (std::size_t i = 0; i < len; ++i) {
      const double base = rng.uniform();
      if (rng.uniform() < config.confusion_rate && model.size() > 1) {
        std::size_t wrong = rng.below(model.size() - 1);
        if (wrong >= ref[i]) ++wrong;
        text += fmt::format("A {} {} {} {:.6f}\n", i, i + 1, model.word(ref[i]), base + config.margin);
        text += fmt::format("A {} {} {} {:.6f}\n", i, i + 1, model.word(wrong), base);
      } else {
        text += fmt::format("A {} {} {} {:.6f}\n", i, i + 1, model.word(ref[i]), base);
      }
    }
    text += "REF";
    for (std::size_t w : ref) text += " " + model.word(w);
    text += '\n';
    files.push_back(std::move(text));
  }
  return files;
}

}  // namespace simlm
