// Random inputs shared by the unit tests and the acceptance runner.
#ifndef SIMLM_TESTS_FIXTURES_HPP
#define SIMLM_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "simlm/backoff.hpp"
#include "simlm/lattice.hpp"

namespace fixtures {

// Conditional model backed by a dense row-stochastic matrix with no zeros.
class TableModel : public simlm::ConditionalModel {
 public:
  TableModel(std::size_t v, unsigned seed) {
    for (std::size_t i = 0; i < v; ++i) vocab_.add("t" + std::to_string(i));
    const std::size_t n = vocab_.size();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    auto fill = [&](std::vector<double> &row) {
      row.resize(n);
      double z = 0;
      for (double &p : row) z += p = u(rng);
      for (double &p : row) p /= z;
    };
    fill(unigram_);
    rows_.resize(n);
    for (auto &r : rows_) fill(r);
  }
  double prob(simlm::WordId a, simlm::WordId b) const override { return rows_[a][b]; }
  double unigram(simlm::WordId w) const override { return unigram_[w]; }
  const simlm::Vocabulary &vocabulary() const override { return vocab_; }

 private:
  simlm::Vocabulary vocab_;
  std::vector<double> unigram_;
  std::vector<std::vector<double>> rows_;
};

// Random DAG on nodes 0..n-1 with start 0 and end n-1. A chain of arcs keeps
// every node on a start-to-end path; extra forward arcs add branching.
inline simlm::Lattice random_lattice(std::mt19937 &rng, std::size_t vocab, std::size_t max_paths) {
  std::uniform_int_distribution<std::size_t> nodes(2, 7);
  std::uniform_int_distribution<simlm::WordId> word(0, static_cast<simlm::WordId>(vocab - 1));
  std::uniform_real_distribution<double> acoustic(0.0, 5.0);
  while (true) {
    simlm::Lattice l;
    l.node_count = nodes(rng);
    l.start = 0;
    l.end = l.node_count - 1;
    for (std::size_t i = 0; i + 1 < l.node_count; ++i)
      l.arcs.push_back({i, i + 1, word(rng), acoustic(rng)});
    std::uniform_int_distribution<std::size_t> extra(0, 2 * l.node_count);
    for (std::size_t e = 0, n = extra(rng); e < n; ++e) {
      std::size_t a = rng() % (l.node_count - 1);
      std::size_t b = a + 1 + rng() % (l.node_count - 1 - a);
      l.arcs.push_back({a, b, word(rng), acoustic(rng)});
    }
    std::vector<oracle::LatArc> arcs;
    for (const auto &a : l.arcs) arcs.push_back({a.from, a.to, a.word, a.acoustic});
    if (oracle::path_count(l.start, l.end, arcs) <= max_paths) return l;
  }
}

// Count table whose counts of counts cover 1..m without gaps.
inline simlm::CountTable gapless_table(std::mt19937 &rng) {
  std::uniform_int_distribution<int> top(2, 30), per(1, 40);
  const int m = top(rng);
  std::vector<long long> counts;
  for (int c = 1; c <= m; ++c)
    for (int i = 0, n = per(rng); i < n; ++i) counts.push_back(c);
  std::shuffle(counts.begin(), counts.end(), rng);
  const std::size_t v = 1 + static_cast<std::size_t>(std::sqrt(counts.size())) + 1;
  std::vector<simlm::Count> uni(v, 0);
  std::vector<simlm::BigramCount> big;
  std::size_t cell = 0;
  for (long long c : counts) {
    // Cells 0..v*v-1 over words 1..v-1 in row-major order, skipping <unk>.
    simlm::WordId a = static_cast<simlm::WordId>(1 + cell / (v - 1));
    simlm::WordId b = static_cast<simlm::WordId>(1 + cell % (v - 1));
    ++cell;
    big.push_back({a, b, c});
    uni[a] += c;
  }
  return simlm::CountTable::from_parts(uni, big);
}

inline std::vector<oracle::LatArc> oracle_arcs(const simlm::Lattice &l) {
  std::vector<oracle::LatArc> arcs;
  for (const auto &a : l.arcs) arcs.push_back({a.from, a.to, a.word, a.acoustic});
  return arcs;
}

}  // namespace fixtures

#endif  // SIMLM_TESTS_FIXTURES_HPP
