#include "simlm/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "simlm/errors.hpp"

namespace simlm {

namespace {

constexpr WordId kNoWord = std::numeric_limits<WordId>::max();
constexpr std::size_t kNoArc = std::numeric_limits<std::size_t>::max();

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char *what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  return value;
}

double lm_cost(const ConditionalModel &lm, WordId prev, WordId word) {
  const double p = prev == kNoWord ? lm.unigram(word) : lm.prob(prev, word);
  return p > 0.0 ? -std::log(p) : std::numeric_limits<double>::infinity();
}

}  // namespace

LatticeFile parse_lattice(std::istream &in, const Vocabulary &vocab) {
  LatticeFile f;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  auto word_id = [&](std::string_view w) {
    auto id = vocab.find(w);
    if (!id) {
      f.warnings.push_back("line " + std::to_string(line_no) + ": unknown word '" +
                           std::string(w) + "' mapped to " + std::string(kUnkWord));
      return vocab.unk_id();
    }
    return *id;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_tokens(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok[0] != "LATTICE" || tok.size() != 4)
        throw ParseError(line_no, "expected 'LATTICE <node_count> <start> <end>'");
      f.lattice.node_count = parse_number<std::size_t>(tok[1], line_no, "node count");
      f.lattice.start = parse_number<std::size_t>(tok[2], line_no, "start node");
      f.lattice.end = parse_number<std::size_t>(tok[3], line_no, "end node");
      header = true;
    } else if (tok[0] == "A") {
      if (tok.size() != 5) throw ParseError(line_no, "expected 'A <from> <to> <word> <score>'");
      Arc a;
      a.from = parse_number<std::size_t>(tok[1], line_no, "node");
      a.to = parse_number<std::size_t>(tok[2], line_no, "node");
      a.word = word_id(tok[3]);
      a.acoustic = parse_number<double>(tok[4], line_no, "acoustic score");
      f.lattice.arcs.push_back(a);
    } else if (tok[0] == "REF") {
      if (f.reference) throw ParseError(line_no, "second REF line");
      std::vector<WordId> ref;
      for (std::size_t i = 1; i < tok.size(); ++i) ref.push_back(word_id(tok[i]));
      f.reference = std::move(ref);
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!header) throw ParseError(line_no + 1, "missing LATTICE header");
  validate_lattice(f.lattice);
  return f;
}

LatticeFile read_lattice_file(const std::string &path, const Vocabulary &vocab) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_lattice(in, vocab);
}

void write_lattice(std::ostream &out, const Lattice &lattice, const Vocabulary &vocab,
                   const std::vector<WordId> *reference) {
  out << "LATTICE " << lattice.node_count << ' ' << lattice.start << ' ' << lattice.end << '\n';
  for (const auto &a : lattice.arcs)
    fmt::print(out, "A {} {} {} {:.6f}\n", a.from, a.to, vocab.word(a.word), a.acoustic);
  if (reference) {
    out << "REF";
    for (WordId w : *reference) out << ' ' << vocab.word(w);
    out << '\n';
  }
}

std::vector<std::size_t> topological_order(const Lattice &lattice) {
  const std::size_t n = lattice.node_count;
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto &a : lattice.arcs) {
    ++indegree[a.to];
    out[a.from].push_back(a.to);
  }
  std::vector<std::size_t> order, ready;
  for (std::size_t v = n; v-- > 0;)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (std::size_t w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  if (order.size() != n) throw NotDagError();
  return order;
}

void validate_lattice(const Lattice &lattice) {
  const std::size_t n = lattice.node_count;
  if (n < 2) throw ValidationError("lattice needs at least two nodes");
  if (lattice.start >= n || lattice.end >= n) throw ValidationError("start or end node out of range");
  if (lattice.start == lattice.end) throw ValidationError("start and end must differ");
  for (const auto &a : lattice.arcs) {
    if (a.from >= n || a.to >= n) throw ValidationError("arc refers to a node out of range");
    if (!std::isfinite(a.acoustic) || a.acoustic < 0.0)
      throw ValidationError("acoustic scores must be finite and nonnegative");
  }
  topological_order(lattice);
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (const auto &a : lattice.arcs) {
    if (a.to == lattice.start) throw ValidationError("start node has an incoming arc");
    if (a.from == lattice.end) throw ValidationError("end node has an outgoing arc");
    fwd[a.from].push_back(a.to);
    bwd[a.to].push_back(a.from);
  }
  auto reach = [n](std::size_t from, const std::vector<std::vector<std::size_t>> &adj) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    return seen;
  };
  auto from_start = reach(lattice.start, fwd);
  auto to_end = reach(lattice.end, bwd);
  for (std::size_t v = 0; v < n; ++v)
    if (!from_start[v] || !to_end[v])
      throw ValidationError("node " + std::to_string(v) + " is not on any start-to-end path");
}

Hypothesis score_path(const Lattice &lattice, std::span<const std::size_t> arcs,
                      const ConditionalModel &lm, double lm_weight) {
  Hypothesis h;
  WordId prev = kNoWord;
  for (std::size_t i : arcs) {
    const Arc &a = lattice.arcs.at(i);
    const double cost = lm_cost(lm, prev, a.word);
    h.score += a.acoustic + lm_weight * cost;
    h.acoustic += a.acoustic;
    h.lm_cost += cost;
    h.words.push_back(a.word);
    h.arcs.push_back(i);
    prev = a.word;
  }
  return h;
}

Hypothesis best_path(const Lattice &lattice, const ConditionalModel &lm, double lm_weight) {
  struct State {
    double score;
    std::size_t arc;   // arc that entered this state
    WordId prev_word;  // last word of the predecessor state
  };
  const auto order = topological_order(lattice);
  std::vector<std::vector<std::size_t>> out(lattice.node_count);
  for (std::size_t i = 0; i < lattice.arcs.size(); ++i) out[lattice.arcs[i].from].push_back(i);
  std::vector<std::map<WordId, State>> states(lattice.node_count);
  states[lattice.start][kNoWord] = {0.0, kNoArc, kNoWord};

  auto words_of = [&](std::size_t node, WordId word) {
    std::vector<WordId> seq;
    while (word != kNoWord) {
      const State &s = states[node].at(word);
      seq.push_back(word);
      node = lattice.arcs[s.arc].from;
      word = s.prev_word;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  for (std::size_t u : order) {
    for (const auto &[last, st] : states[u]) {
      for (std::size_t ai : out[u]) {
        const Arc &a = lattice.arcs[ai];
        const double cost = lm_cost(lm, last, a.word);
        if (!std::isfinite(cost)) continue;
        const double cand = st.score + (a.acoustic + lm_weight * cost);
        auto [it, inserted] = states[a.to].try_emplace(a.word, State{cand, ai, last});
        if (inserted) continue;
        if (cand < it->second.score) {
          it->second = {cand, ai, last};
        } else if (cand == it->second.score) {
          auto incumbent = words_of(a.to, a.word);
          auto challenger = words_of(u, last);
          challenger.push_back(a.word);
          if (challenger < incumbent) it->second = {cand, ai, last};
        }
      }
    }
  }

  const auto &finals = states[lattice.end];
  if (finals.empty()) throw ZeroProbabilityError("no lattice path has positive LM probability");
  WordId best = kNoWord;
  std::vector<WordId> best_words;
  for (const auto &[w, st] : finals) {
    if (best == kNoWord || st.score < finals.at(best).score) {
      best = w;
      best_words.clear();
    } else if (st.score == finals.at(best).score) {
      if (best_words.empty()) best_words = words_of(lattice.end, best);
      auto cand = words_of(lattice.end, w);
      if (cand < best_words) {
        best = w;
        best_words = std::move(cand);
      }
    }
  }
  std::vector<std::size_t> arcs;
  for (std::size_t node = lattice.end; best != kNoWord;) {
    const State &s = states[node].at(best);
    arcs.push_back(s.arc);
    node = lattice.arcs[s.arc].from;
    best = s.prev_word;
  }
  std::reverse(arcs.begin(), arcs.end());
  return score_path(lattice, arcs, lm, lm_weight);
}

std::size_t edit_distance(std::span<const WordId> a, std::span<const WordId> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<bool> aligned_matches(std::span<const WordId> reference,
                                  std::span<const WordId> hypothesis) {
  const std::size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1)});
  std::vector<bool> match(n, false);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && reference[i - 1] == hypothesis[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      match[i - 1] = true;
      --i;
      --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      --i;
    } else {
      --j;
    }
  }
  return match;
}

double sign_test(std::size_t a, std::size_t b) {
  const std::size_t n = a + b;
  if (n == 0) return 1.0;
  const std::size_t k = std::min(a, b);
  const double log_half_n = static_cast<double>(n) * std::log(0.5);
  const double nn = static_cast<double>(n);
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double ii = static_cast<double>(i);
    tail += std::exp(std::lgamma(nn + 1) - std::lgamma(ii + 1) - std::lgamma(nn - ii + 1) +
                     log_half_n);
  }
  return std::min(1.0, 2.0 * tail);
}

DisagreementReport disagreement_report(std::span<const LatticeFile> lattices,
                                       const ConditionalModel &model_a,
                                       const ConditionalModel &model_b, double lm_weight,
                                       unsigned threads) {
  for (std::size_t i = 0; i < lattices.size(); ++i)
    if (!lattices[i].reference)
      throw ConfigError("lattice " + std::to_string(i) + " has no reference transcript");
  std::vector<std::pair<std::size_t, std::size_t>> wins(lattices.size(), {0, 0});
  auto score = [&](std::size_t i) {
    const auto &ref = *lattices[i].reference;
    auto ha = best_path(lattices[i].lattice, model_a, lm_weight);
    auto hb = best_path(lattices[i].lattice, model_b, lm_weight);
    auto ma = aligned_matches(ref, ha.words);
    auto mb = aligned_matches(ref, hb.words);
    for (std::size_t p = 0; p < ref.size(); ++p) {
      if (ma[p] && !mb[p]) ++wins[i].first;
      if (mb[p] && !ma[p]) ++wins[i].second;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lattices.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < lattices.size(); ++i) score(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < lattices.size(); i += threads) score(i);
      });
  }
  DisagreementReport r;
  for (const auto &[a, b] : wins) {
    r.model_a_correct += a;
    r.model_b_correct += b;
  }
  r.disagreements = r.model_a_correct + r.model_b_correct;
  r.sign_test_p = sign_test(r.model_a_correct, r.model_b_correct);
  return r;
}

}  // namespace simlm
