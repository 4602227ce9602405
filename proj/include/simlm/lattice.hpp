#ifndef SIMLM_LATTICE_HPP
#define SIMLM_LATTICE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simlm/backoff.hpp"

namespace simlm {

struct Arc {
  std::size_t from;
  std::size_t to;
  WordId word;
  double acoustic;  // negative log likelihood, >= 0
};

// Word lattice: a DAG from `start` to `end` whose every node lies on some
// start-to-end path.
struct Lattice {
  std::size_t node_count = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<Arc> arcs;
};

struct LatticeFile {
  Lattice lattice;
  std::optional<std::vector<WordId>> reference;
  std::vector<std::string> warnings;
};

// Text format, one lattice per file:
//   LATTICE <node_count> <start> <end>
//   A <from> <to> <word> <acoustic_score>
//   REF <word> <word> ...
// Words outside `vocab` map to <unk> and add a warning.
LatticeFile parse_lattice(std::istream &in, const Vocabulary &vocab);
LatticeFile read_lattice_file(const std::string &path, const Vocabulary &vocab);
void write_lattice(std::ostream &out, const Lattice &lattice, const Vocabulary &vocab,
                   const std::vector<WordId> *reference = nullptr);

// Throws NotDagError on a cycle, ValidationError on any other structural
// problem.
void validate_lattice(const Lattice &lattice);
std::vector<std::size_t> topological_order(const Lattice &lattice);

struct Hypothesis {
  std::vector<WordId> words;
  std::vector<std::size_t> arcs;
  double score = 0.0;     // acoustic + lm_weight * lm_cost
  double acoustic = 0.0;  // summed acoustic scores
  double lm_cost = 0.0;   // summed -ln P, unweighted
};

// Scores one path given as arc indices. The first arc is scored with the
// unigram probability of its word, later arcs with P(word | previous word).
Hypothesis score_path(const Lattice &lattice, std::span<const std::size_t> arcs,
                      const ConditionalModel &lm, double lm_weight = 1.0);

// Minimum-score start-to-end path by dynamic programming over
// (node, last word) states. Equal scores go to the lexicographically smaller
// word-id sequence among the candidates reaching a state.
Hypothesis best_path(const Lattice &lattice, const ConditionalModel &lm, double lm_weight = 1.0);

// Levenshtein distance with unit costs.
std::size_t edit_distance(std::span<const WordId> a, std::span<const WordId> b);

// For each reference position, whether a minimum-cost alignment pairs it with
// an identical hypothesis word.
std::vector<bool> aligned_matches(std::span<const WordId> reference,
                                  std::span<const WordId> hypothesis);

// Two-sided sign test for a wins against b losses.
double sign_test(std::size_t a, std::size_t b);

struct DisagreementReport {
  std::size_t disagreements = 0;
  std::size_t model_a_correct = 0;
  std::size_t model_b_correct = 0;
  double sign_test_p = 1.0;
};

// Decodes every lattice under both models and counts aligned reference
// positions where exactly one hypothesis is correct. Throws ConfigError if a
// lattice has no reference.
DisagreementReport disagreement_report(std::span<const LatticeFile> lattices,
                                       const ConditionalModel &model_a,
                                       const ConditionalModel &model_b, double lm_weight = 1.0,
                                       unsigned threads = 1);

}  // namespace simlm

#endif  // SIMLM_LATTICE_HPP
