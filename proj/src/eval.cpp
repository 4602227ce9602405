#include "simlm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "simlm/errors.hpp"

namespace simlm {

PerplexityReport perplexity(const ConditionalModel &model, const BackoffModel &training,
                            std::span<const Sentence> test, std::string name) {
  PerplexityReport r;
  r.model = std::move(name);
  const Vocabulary &vocab = model.vocabulary();
  for (const auto &s : test) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double p = model.prob(s[i - 1], s[i]);
      if (!(p > 0.0))
        throw ZeroProbabilityError("zero probability for bigram '" + vocab.word(s[i - 1]) + " " +
                                   vocab.word(s[i]) + "'");
      const double loss = -std::log(p);
      if (training.is_seen(s[i - 1], s[i])) {
        r.seen_log_loss += loss;
        ++r.seen_bigrams;
      } else {
        r.unseen_log_loss += loss;
        ++r.unseen_bigrams;
      }
    }
  }
  r.total_bigrams = r.seen_bigrams + r.unseen_bigrams;
  if (r.total_bigrams == 0) throw ConfigError("test data contains no bigrams to score");
  r.unseen_fraction = static_cast<double>(r.unseen_bigrams) / static_cast<double>(r.total_bigrams);
  r.overall_perplexity =
      std::exp((r.seen_log_loss + r.unseen_log_loss) / static_cast<double>(r.total_bigrams));
  if (r.seen_bigrams > 0)
    r.seen_perplexity = std::exp(r.seen_log_loss / static_cast<double>(r.seen_bigrams));
  if (r.unseen_bigrams > 0)
    r.unseen_perplexity = std::exp(r.unseen_log_loss / static_cast<double>(r.unseen_bigrams));
  return r;
}

double reduction_pct(double baseline_pp, double pp) { return 100.0 * (1.0 - pp / baseline_pp); }

Comparison compare(std::span<const NamedModel> models, const BackoffModel &training,
                   std::span<const Sentence> test) {
  if (models.size() < 2) throw ConfigError("compare needs at least two models");
  for (const auto &m : models)
    if (!(m.model->vocabulary() == training.vocab()))
      throw ConfigError("model '" + m.name + "' uses a different vocabulary");
  Comparison cmp;
  for (const auto &m : models) cmp.reports.push_back(perplexity(*m.model, training, test, m.name));
  const std::size_t n = models.size();
  cmp.overall_reduction.assign(n, std::vector<double>(n, 0.0));
  cmp.unseen_reduction.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      cmp.overall_reduction[a][b] = reduction_pct(cmp.reports[a].overall_perplexity,
                                                  cmp.reports[b].overall_perplexity);
      cmp.unseen_reduction[a][b] = reduction_pct(cmp.reports[a].unseen_perplexity,
                                                 cmp.reports[b].unseen_perplexity);
    }
  return cmp;
}

GridResult grid_search(const ParamGrid &grid, const DistanceIndex &index,
                       std::span<const Sentence> tuning, std::span<const Sentence> test,
                       unsigned threads) {
  if (grid.k.empty() || grid.t.empty() || grid.beta.empty() || grid.gamma.empty())
    throw ConfigError("parameter grid has an empty axis");
  if (tuning.empty()) throw ConfigError("tuning set is empty");
  const BackoffLM &katz = index.base();
  const BackoffModel &model = katz.model();
  const double tune_base = perplexity(katz, model, tuning).unseen_perplexity;
  const double test_base = perplexity(katz, model, test).unseen_perplexity;

  GridResult result;
  for (int k : grid.k)
    for (double t : grid.t)
      for (double beta : grid.beta)
        for (double gamma : grid.gamma) {
          GridRow row;
          row.params = {k, t, beta, gamma};
          row.params.validate();
          result.all.push_back(row);
        }

  auto evaluate = [&](GridRow &row) {
    SimilarityScheme scheme(index, row.params);
    BackoffLM lm(model, scheme);
    row.training_reduction = reduction_pct(tune_base, perplexity(lm, model, tuning).unseen_perplexity);
    row.test_reduction = reduction_pct(test_base, perplexity(lm, model, test).unseen_perplexity);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(result.all.size())));
  if (threads == 1) {
    for (auto &row : result.all) evaluate(row);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < result.all.size(); i += threads) evaluate(result.all[i]);
      });
  }

  for (const auto &row : result.all) {
    auto it = std::find_if(result.rows.begin(), result.rows.end(),
                           [&](const GridRow &r) { return r.params.k == row.params.k; });
    if (it == result.rows.end())
      result.rows.push_back(row);
    else if (row.training_reduction > it->training_reduction)
      *it = row;
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const GridRow &a, const GridRow &b) {
    return a.training_reduction > b.training_reduction;
  });
  return result;
}

Format parse_format(const std::string &s) {
  if (s == "text") return Format::kText;
  if (s == "csv") return Format::kCsv;
  throw ConfigError("unknown format '" + s + "' (expected text or csv)");
}

void write_reports(std::ostream &out, std::span<const PerplexityReport> reports, Format format) {
  if (format == Format::kCsv) {
    out << "model,bigrams,seen,unseen,unseen_fraction,overall_pp,seen_pp,unseen_pp\n";
    for (const auto &r : reports)
      fmt::print(out, "{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.model, r.total_bigrams,
                 r.seen_bigrams, r.unseen_bigrams, r.unseen_fraction, r.overall_perplexity,
                 r.seen_perplexity, r.unseen_perplexity);
    return;
  }
  fmt::print(out, "{:<10} {:>9} {:>9} {:>9} {:>8} {:>12} {:>12} {:>12}\n", "model", "bigrams",
             "seen", "unseen", "unseen%", "overall_pp", "seen_pp", "unseen_pp");
  for (const auto &r : reports)
    fmt::print(out, "{:<10} {:>9} {:>9} {:>9} {:>8.2f} {:>12.4f} {:>12.4f} {:>12.4f}\n", r.model,
               r.total_bigrams, r.seen_bigrams, r.unseen_bigrams, 100.0 * r.unseen_fraction,
               r.overall_perplexity, r.seen_perplexity, r.unseen_perplexity);
}

void write_comparison(std::ostream &out, const Comparison &cmp, Format format) {
  write_reports(out, cmp.reports, format);
  const std::size_t n = cmp.reports.size();
  if (format == Format::kCsv) {
    out << "from,to,overall_reduction_pct,unseen_reduction_pct\n";
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b)
          fmt::print(out, "{},{},{:.4f},{:.4f}\n", cmp.reports[a].model, cmp.reports[b].model,
                     cmp.overall_reduction[a][b], cmp.unseen_reduction[a][b]);
    return;
  }
  out << '\n';
  fmt::print(out, "{:<10} {:<10} {:>14} {:>14}\n", "from", "to", "overall_red%", "unseen_red%");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b)
        fmt::print(out, "{:<10} {:<10} {:>14.4f} {:>14.4f}\n", cmp.reports[a].model,
                   cmp.reports[b].model, cmp.overall_reduction[a][b], cmp.unseen_reduction[a][b]);
}

void write_grid(std::ostream &out, const GridResult &result, Format format) {
  if (format == Format::kCsv) {
    out << "k,t,beta,gamma,training_reduction_pct,test_reduction_pct\n";
    for (const auto &r : result.rows)
      fmt::print(out, "{},{},{},{},{:.4f},{:.4f}\n", r.params.k, r.params.t, r.params.beta,
                 r.params.gamma, r.training_reduction, r.test_reduction);
    return;
  }
  fmt::print(out, "{:>5} {:>6} {:>6} {:>6} {:>14} {:>14}\n", "k", "t", "beta", "gamma",
             "train_red%", "test_red%");
  for (const auto &r : result.rows)
    fmt::print(out, "{:>5} {:>6} {:>6} {:>6} {:>14.4f} {:>14.4f}\n", r.params.k, r.params.t,
               r.params.beta, r.params.gamma, r.training_reduction, r.test_reduction);
}

}  // namespace simlm
