#ifndef SIMLM_SUITE_HPP
#define SIMLM_SUITE_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>

#include "simlm/backoff.hpp"
#include "simlm/cooc.hpp"
#include "simlm/similarity.hpp"

namespace simlm {

enum class Scheme { kKatz, kSim, kCooc };
Scheme parse_scheme(const std::string &s);
std::string scheme_name(Scheme s);

struct SuiteConfig {
  BackoffConfig backoff;
  SimilarityParams similarity;
  KlMode kl_mode = KlMode::kExact;
  // When set, the cooc entry is the fully interpolated model instead of
  // P_S inside back-off.
  std::optional<std::array<double, 3>> lambdas;
};

// The three estimators over one count set: Katz, the similarity model and
// cooccurrence smoothing. Members refer to each other, so a suite is pinned
// in memory.
class ModelSuite {
 public:
  ModelSuite(std::shared_ptr<const CorpusCounts> data, const SuiteConfig &config);
  ModelSuite(const ModelSuite &) = delete;
  ModelSuite &operator=(const ModelSuite &) = delete;

  const BackoffModel &model() const { return model_; }
  const BackoffLM &katz() const { return katz_; }
  const DistanceIndex &index() const { return index_; }
  const SimilarityScheme &sim_scheme() const { return sim_scheme_; }
  const BackoffLM &sim() const { return sim_; }
  const CoocModel &cooc_model() const { return cooc_; }
  const ConditionalModel &cooc() const;
  const ConditionalModel &get(Scheme s) const;

 private:
  BackoffModel model_;
  UnigramScheme unigram_;
  BackoffLM katz_;
  DistanceIndex index_;
  SimilarityScheme sim_scheme_;
  BackoffLM sim_;
  CoocModel cooc_;
  CoocScheme cooc_scheme_;
  BackoffLM cooc_backoff_;
  std::optional<CoocInterpolatedLM> cooc_interp_;
};

}  // namespace simlm

#endif  // SIMLM_SUITE_HPP
