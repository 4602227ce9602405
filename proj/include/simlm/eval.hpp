#ifndef SIMLM_EVAL_HPP
#define SIMLM_EVAL_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "simlm/backoff.hpp"
#include "simlm/similarity.hpp"

namespace simlm {

// Natural-log perplexities over a test set, split by how the training counts
// route each bigram (seen means c(w1,w2) >= min_bigram_count). An empty
// partition reports perplexity 1.
struct PerplexityReport {
  std::string model;
  std::size_t total_bigrams = 0;
  std::size_t seen_bigrams = 0;
  std::size_t unseen_bigrams = 0;
  double unseen_fraction = 0.0;
  double overall_perplexity = 1.0;
  double seen_perplexity = 1.0;
  double unseen_perplexity = 1.0;
  // Sums of -ln P per partition.
  double seen_log_loss = 0.0;
  double unseen_log_loss = 0.0;
};

// Scores every within-sentence bigram of `test`. Throws ConfigError if there
// is nothing to score and ZeroProbabilityError naming the first bigram the
// model gives probability 0.
PerplexityReport perplexity(const ConditionalModel &model, const BackoffModel &training,
                            std::span<const Sentence> test, std::string name = {});

// 100 * (1 - pp / baseline_pp).
double reduction_pct(double baseline_pp, double pp);

struct NamedModel {
  std::string name;
  const ConditionalModel *model;
};

struct Comparison {
  std::vector<PerplexityReport> reports;
  // [a][b] is the reduction going from model a to model b.
  std::vector<std::vector<double>> overall_reduction;
  std::vector<std::vector<double>> unseen_reduction;
};

// Needs at least two models, all over the training vocabulary.
Comparison compare(std::span<const NamedModel> models, const BackoffModel &training,
                   std::span<const Sentence> test);

struct ParamGrid {
  std::vector<int> k{10, 20, 30, 40, 50, 60};
  std::vector<double> t{1.5, 2.5};
  std::vector<double> beta{3.5, 4.0, 4.5};
  std::vector<double> gamma{0.1, 0.15, 0.2, 0.25, 0.3};
};

// Unseen-bigram perplexity reductions against the Katz baseline the index
// was built on.
struct GridRow {
  SimilarityParams params;
  double training_reduction = 0.0;
  double test_reduction = 0.0;
};

struct GridResult {
  // Best setting for each k by tuning reduction, sorted by tuning reduction,
  // highest first.
  std::vector<GridRow> rows;
  // Every evaluated setting, in grid order (k, t, beta, gamma).
  std::vector<GridRow> all;
};

// Exhaustive search. Grid points may be evaluated on several threads; the
// result is identical for any thread count.
GridResult grid_search(const ParamGrid &grid, const DistanceIndex &index,
                       std::span<const Sentence> tuning, std::span<const Sentence> test,
                       unsigned threads = 1);

enum class Format { kText, kCsv };
Format parse_format(const std::string &s);

void write_reports(std::ostream &out, std::span<const PerplexityReport> reports, Format format);
void write_comparison(std::ostream &out, const Comparison &cmp, Format format);
void write_grid(std::ostream &out, const GridResult &result, Format format);

}  // namespace simlm

#endif  // SIMLM_EVAL_HPP
