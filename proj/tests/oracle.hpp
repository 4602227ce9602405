// Brute-force reference implementations used to check the library. They
// work on dense matrices and share no code with src/.
#ifndef SIMLM_TESTS_ORACLE_HPP
#define SIMLM_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "simlm/counts.hpp"

namespace oracle {

using Row = std::vector<double>;
using ProbFn = std::function<double(std::size_t, std::size_t)>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Dense {
  std::size_t v = 0;
  std::vector<long long> uni;
  std::vector<std::vector<long long>> big;
};

inline Dense dense(const simlm::CountTable &t) {
  Dense d;
  d.v = t.vocab_size();
  d.uni.resize(d.v);
  d.big.assign(d.v, std::vector<long long>(d.v, 0));
  for (std::size_t a = 0; a < d.v; ++a) {
    d.uni[a] = t.unigram(static_cast<simlm::WordId>(a));
    for (std::size_t b = 0; b < d.v; ++b)
      d.big[a][b] = t.bigram(static_cast<simlm::WordId>(a), static_cast<simlm::WordId>(b));
  }
  return d;
}

// Bigram counts straight from whitespace-split lines, keyed by word strings.
inline std::map<std::pair<std::string, std::string>, long long> string_bigrams(
    const std::vector<std::string> &lines) {
  std::map<std::pair<std::string, std::string>, long long> out;
  for (const auto &line : lines) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    for (std::string w; in >> w;) toks.push_back(w);
    for (std::size_t i = 1; i < toks.size(); ++i) ++out[{toks[i - 1], toks[i]}];
  }
  return out;
}

// Katz back-off; the normalizer is computed from the unseen side.
struct Katz {
  Dense d;
  long long min_count;
  long long ceiling;
  std::map<long long, long long> nc;
  long long total = 0;

  Katz(Dense dd, long long min_count_, long long ceiling_)
      : d(std::move(dd)), min_count(min_count_), ceiling(ceiling_) {
    for (const auto &row : d.big)
      for (long long c : row)
        if (c > 0) ++nc[c];
    total = std::accumulate(d.uni.begin(), d.uni.end(), 0LL);
  }
  long long n(long long c) const {
    auto it = nc.find(c);
    return it == nc.end() ? 0 : it->second;
  }
  double cstar(long long c) const {
    if (c >= ceiling || n(c) == 0 || n(c + 1) == 0) return static_cast<double>(c);
    double s = static_cast<double>(c + 1) * n(c + 1) / n(c);
    return std::min(s, static_cast<double>(c));
  }
  double unigram(std::size_t w) const { return static_cast<double>(d.uni[w]) / total; }
  bool seen(std::size_t a, std::size_t b) const { return d.big[a][b] >= min_count; }
  double beta(std::size_t a) const {
    double kept = 0.0;
    for (std::size_t b = 0; b < d.v; ++b)
      if (d.big[a][b] > 0 && seen(a, b)) kept += cstar(d.big[a][b]);
    return (d.uni[a] - kept) / d.uni[a];
  }
  double alpha(std::size_t a, const ProbFn &pr) const {
    double b = beta(a);
    if (b <= 0) return 0.0;
    double unseen = 0.0;
    for (std::size_t w = 0; w < d.v; ++w)
      if (!seen(a, w)) unseen += pr(a, w);
    return b / unseen;
  }
  double prob(std::size_t a, std::size_t b, const ProbFn &pr) const {
    if (d.uni[a] == 0) return unigram(b);
    if (seen(a, b)) return cstar(d.big[a][b]) / d.uni[a];
    return alpha(a, pr) * pr(a, b);
  }
  ProbFn unigram_scheme() const {
    return [this](std::size_t, std::size_t b) { return unigram(b); };
  }
  std::vector<Row> matrix(const ProbFn &pr) const {
    std::vector<Row> m(d.v, Row(d.v));
    for (std::size_t a = 0; a < d.v; ++a)
      for (std::size_t b = 0; b < d.v; ++b) m[a][b] = prob(a, b, pr);
    return m;
  }
};

inline double kl10(const Row &p, const Row &q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    s += p[i] * std::log10(p[i] / q[i]);
  }
  return s;
}

struct Neighbor {
  std::size_t word;
  double distance;
  double weight;
};

// Neighbors of `a` under a dense baseline matrix.
inline std::vector<Neighbor> neighbors(const Katz &katz, const std::vector<Row> &base,
                                       std::size_t a, int k, double t, double beta) {
  std::vector<Neighbor> all;
  for (std::size_t w = 0; w < katz.d.v; ++w) {
    if (w == a || katz.d.uni[w] == 0) continue;
    double dist = std::max(0.0, kl10(base[a], base[w]));
    if (dist < t) all.push_back({w, dist, 0.0});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Neighbor &x, const Neighbor &y) { return x.distance < y.distance; });
  if (all.size() > static_cast<std::size_t>(k)) all.resize(k);
  double z = 0.0;
  for (auto &n : all) z += n.weight = std::pow(10.0, -beta * n.distance);
  for (auto &n : all) n.weight /= z;
  return all;
}

// Redistribution row of the similarity scheme.
inline Row sim_row(const Katz &katz, const std::vector<Row> &base, std::size_t a, int k, double t,
                   double beta, double gamma) {
  Row out(katz.d.v);
  auto nb = katz.d.uni[a] > 0 ? neighbors(katz, base, a, k, t, beta) : std::vector<Neighbor>{};
  for (std::size_t b = 0; b < katz.d.v; ++b) {
    if (nb.empty()) {
      out[b] = katz.unigram(b);
      continue;
    }
    double s = 0.0;
    for (const auto &n : nb) s += n.weight * base[n.word][b];
    out[b] = gamma * katz.unigram(b) + (1 - gamma) * s;
  }
  return out;
}

// Cooccurrence quantities from the joint bigram distribution.
struct Cooc {
  Dense d;
  double n = 0.0;
  explicit Cooc(Dense dd) : d(std::move(dd)) {
    for (const auto &row : d.big)
      for (long long c : row) n += c;
  }
  double joint(std::size_t a, std::size_t b) const { return d.big[a][b] / n; }
  double left(std::size_t a) const {
    double s = 0;
    for (std::size_t b = 0; b < d.v; ++b) s += joint(a, b);
    return s;
  }
  double right(std::size_t b) const {
    double s = 0;
    for (std::size_t a = 0; a < d.v; ++a) s += joint(a, b);
    return s;
  }
  double next(std::size_t b, std::size_t a) const {
    double l = left(a);
    return l > 0 ? joint(a, b) / l : 0.0;
  }
  double prev(std::size_t a, std::size_t b) const {
    double r = right(b);
    return r > 0 ? joint(a, b) / r : 0.0;
  }
  // Written through the joint, which makes the symmetry visible.
  double confusion(std::size_t ap, std::size_t a) const {
    double s = 0.0;
    for (std::size_t b = 0; b < d.v; ++b) {
      double r = right(b);
      if (r > 0) s += joint(a, b) * joint(ap, b) / r;
    }
    return s / left(a);
  }
  // Double sum over the conditioning and the conditioned word.
  double smoothed(std::size_t b, std::size_t a) const {
    double s = 0.0;
    for (std::size_t ap = 0; ap < d.v; ++ap)
      for (std::size_t bp = 0; bp < d.v; ++bp)
        s += next(b, ap) * prev(ap, bp) * next(bp, a);
    return s;
  }
};

inline double perplexity(const std::vector<double> &probs) {
  if (probs.empty()) return 1.0;
  double s = 0.0;
  for (double p : probs) s += std::log(p);
  return std::exp(-s / probs.size());
}

struct LatArc {
  std::size_t from, to, word;
  double acoustic;
};

struct PathResult {
  std::vector<std::size_t> words;
  double score = kInf;
};

// Exhaustive search over start-to-end paths.
inline PathResult best_path(std::size_t start, std::size_t end, const std::vector<LatArc> &arcs,
                            const std::function<double(std::size_t)> &unigram,
                            const ProbFn &cond, double weight) {
  PathResult best;
  std::vector<std::size_t> words;
  std::function<void(std::size_t, double)> walk = [&](std::size_t node, double score) {
    if (node == end) {
      if (score < best.score || (score == best.score && words < best.words)) {
        best.score = score;
        best.words = words;
      }
      return;
    }
    for (const auto &a : arcs) {
      if (a.from != node) continue;
      double p = words.empty() ? unigram(a.word) : cond(words.back(), a.word);
      double lm = p > 0 ? -std::log(p) : kInf;
      words.push_back(a.word);
      walk(a.to, score + a.acoustic + weight * lm);
      words.pop_back();
    }
  };
  walk(start, 0.0);
  return best;
}

inline std::size_t path_count(std::size_t start, std::size_t end, const std::vector<LatArc> &arcs) {
  if (start == end) return 1;
  std::size_t n = 0;
  for (const auto &a : arcs)
    if (a.from == start) n += path_count(a.to, end, arcs);
  return n;
}

inline std::size_t levenshtein(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  std::vector<std::vector<std::size_t>> m(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) m[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) m[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      m[i][j] = std::min({m[i - 1][j] + 1, m[i][j - 1] + 1,
                          m[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return m[a.size()][b.size()];
}

// Two-sided exact binomial sign test with integer binomials.
inline double sign_test(unsigned a, unsigned b) {
  unsigned n = a + b;
  if (n == 0) return 1.0;
  unsigned lo = std::min(a, b);
  long double tail = 0.0L, c = 1.0L;
  for (unsigned i = 0; i <= lo; ++i) {
    tail += c;
    c = c * (n - i) / (i + 1);
  }
  long double p = 2.0L * tail / std::pow(2.0L, static_cast<long double>(n));
  return static_cast<double>(std::min(p, 1.0L));
}

// Random Zipf-ish corpus over `v` words, `sentences` lines.
inline std::vector<std::string> random_corpus(std::size_t v, std::size_t sentences,
                                              std::size_t max_len, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<double> w(v);
  for (std::size_t i = 0; i < v; ++i) w[i] = 1.0 / (i + 1);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::vector<std::string> out;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string line;
    std::size_t prev = pick(rng);
    for (std::size_t i = 0, n = len(rng); i < n; ++i) {
      // Mix a per-word successor bias into the draw so rows differ.
      std::size_t next = (rng() % 3 == 0) ? (prev * 7 + 3) % v : pick(rng);
      if (!line.empty()) line += ' ';
      line += "w" + std::to_string(next);
      prev = next;
    }
    out.push_back(line);
  }
  return out;
}

}  // namespace oracle

#endif  // SIMLM_TESTS_ORACLE_HPP
