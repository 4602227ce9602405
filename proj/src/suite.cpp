#include "simlm/suite.hpp"

#include "simlm/errors.hpp"

namespace simlm {

Scheme parse_scheme(const std::string &s) {
  if (s == "katz") return Scheme::kKatz;
  if (s == "sim") return Scheme::kSim;
  if (s == "cooc") return Scheme::kCooc;
  throw ConfigError("unknown scheme '" + s + "' (expected katz, sim or cooc)");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kKatz: return "katz";
    case Scheme::kSim: return "sim";
    case Scheme::kCooc: return "cooc";
  }
  return "?";
}

ModelSuite::ModelSuite(std::shared_ptr<const CorpusCounts> data, const SuiteConfig &config)
    : model_(data, config.backoff),
      unigram_(model_),
      katz_(model_, unigram_),
      index_(katz_, config.kl_mode),
      sim_scheme_(index_, config.similarity),
      sim_(model_, sim_scheme_),
      cooc_(data),
      cooc_scheme_(cooc_, model_),
      cooc_backoff_(model_, cooc_scheme_) {
  if (config.lambdas) cooc_interp_.emplace(cooc_, model_, *config.lambdas);
}

const ConditionalModel &ModelSuite::cooc() const {
  if (cooc_interp_) return *cooc_interp_;
  return cooc_backoff_;
}

const ConditionalModel &ModelSuite::get(Scheme s) const {
  switch (s) {
    case Scheme::kKatz: return katz_;
    case Scheme::kSim: return sim_;
    case Scheme::kCooc: return cooc();
  }
  throw ConfigError("unknown scheme");
}

}  // namespace simlm
