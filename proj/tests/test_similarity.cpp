#include <doctest.h>

#include <cmath>
#include <memory>
#include <thread>

#include "oracle.hpp"
#include "simlm/errors.hpp"
#include "simlm/similarity.hpp"

using namespace simlm;
using doctest::Approx;

namespace {

std::shared_ptr<const CorpusCounts> make(std::vector<std::string> lines) {
  return std::make_shared<const CorpusCounts>(build_counts(lines));
}

struct Fixture {
  std::shared_ptr<const CorpusCounts> data;
  BackoffModel model;
  UnigramScheme uni;
  BackoffLM katz;
  Fixture(std::shared_ptr<const CorpusCounts> d, BackoffConfig cfg = {})
      : data(std::move(d)), model(data, cfg), uni(model), katz(model, uni) {}
};

constexpr WordId kA = 1, kB = 2, kC = 3;

}  // namespace

TEST_CASE("toy distances") {
  Fixture f(make({"a b a b c b"}), {1, 5});
  CHECK(kl_distance(kA, kC, f.katz) == Approx(std::log10(1.5)).epsilon(1e-12));
  CHECK(kl_distance(kA, kC, f.katz) == Approx(0.176091259).epsilon(1e-9));
  CHECK(std::isinf(kl_distance(kC, kA, f.katz)));
  CHECK(kl_distance(kC, kA, f.katz, KlMode::kTruncated) == 0.0);
  CHECK(kl_distance(kB, kB, f.katz) == 0.0);
  CHECK_THROWS_AS(kl_distance(0, kA, f.katz), DomainError);
}

TEST_CASE("distances match the oracle") {
  Fixture f(make(oracle::random_corpus(30, 400, 10, 21)), {1, 5});
  oracle::Katz ref(oracle::dense(f.data->table), 1, 5);
  auto base = ref.matrix(ref.unigram_scheme());
  DistanceIndex index(f.katz);
  for (WordId a = 1; a < f.model.vocab_size(); ++a)
    for (WordId b = 1; b < f.model.vocab_size(); ++b) {
      double want = std::max(0.0, oracle::kl10(base[a], base[b]));
      double got = index.distance(a, b);
      if (std::isinf(want)) {
        CHECK(std::isinf(got));
      } else {
        CHECK(got == Approx(want).epsilon(1e-9));
        CHECK(got >= 0.0);
      }
    }
}

TEST_CASE("neighbor sets match the oracle") {
  Fixture f(make(oracle::random_corpus(40, 600, 12, 5)));
  oracle::Katz ref(oracle::dense(f.data->table), 2, 5);
  auto base = ref.matrix(ref.unigram_scheme());
  DistanceIndex index(f.katz);
  for (SimilarityParams p : {SimilarityParams{}, SimilarityParams{3, 0.5, 2.0, 0.3},
                             SimilarityParams{10, 1.0, 4.0, 0.1}}) {
    for (WordId a = 1; a < f.model.vocab_size(); ++a) {
      auto got = neighbor_set(a, p, index);
      auto want = oracle::neighbors(ref, base, a, p.k, p.t, p.beta);
      REQUIRE(got.neighbors.size() == want.size());
      double total = 0;
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.neighbors[i].word == want[i].word);
        CHECK(got.neighbors[i].distance == Approx(want[i].distance).epsilon(1e-9));
        CHECK(got.neighbors[i].weight == Approx(want[i].weight).epsilon(1e-9));
        CHECK(got.neighbors[i].word != a);
        CHECK(got.neighbors[i].distance < p.t);
        total += got.neighbors[i].weight;
      }
      if (!want.empty()) CHECK(total == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("similarity model matches the oracle") {
  Fixture f(make(oracle::random_corpus(30, 500, 12, 13)));
  oracle::Katz ref(oracle::dense(f.data->table), 2, 5);
  auto base = ref.matrix(ref.unigram_scheme());
  SimilarityParams p{5, 1.5, 3.0, 0.2};
  DistanceIndex index(f.katz);
  SimilarityScheme scheme(index, p);
  BackoffLM sim(f.model, scheme);
  const std::size_t v = f.model.vocab_size();
  std::vector<oracle::Row> pr(v);
  for (std::size_t a = 0; a < v; ++a) pr[a] = oracle::sim_row(ref, base, a, p.k, p.t, p.beta, p.gamma);
  oracle::ProbFn fn = [&](std::size_t a, std::size_t b) { return pr[a][b]; };
  for (WordId a = 0; a < v; ++a) {
    double s = 0;
    for (WordId b = 0; b < v; ++b) {
      CHECK(scheme.prob(a, b) == Approx(pr[a][b]).epsilon(1e-9));
      CHECK(sim.prob(a, b) == Approx(ref.prob(a, b, fn)).epsilon(1e-9));
      s += sim.prob(a, b);
    }
    CHECK(s == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gamma one collapses to katz") {
  Fixture f(make(oracle::random_corpus(30, 300, 10, 17)));
  DistanceIndex index(f.katz);
  SimilarityScheme scheme(index, {60, 2.5, 4.0, 1.0});
  BackoffLM sim(f.model, scheme);
  for (WordId a = 0; a < f.model.vocab_size(); ++a)
    for (WordId b = 0; b < f.model.vocab_size(); ++b) CHECK(sim.prob(a, b) == f.katz.prob(a, b));
}

TEST_CASE("empty neighbor sets") {
  Fixture f(make({"a b a b c b"}), {1, 5});
  DistanceIndex index(f.katz);
  SimilarityParams tight{60, 1e-9, 4.0, 0.15};
  auto set = neighbor_set(kA, tight, index);
  CHECK(set.empty());
  CHECK_THROWS_AS(p_sim(kB, set, f.katz), NoNeighborsError);
  SimilarityScheme scheme(index, tight);
  CHECK(scheme.prob(kA, kC) == f.katz.unigram(kC));
  CHECK(scheme.neighbors(0).empty());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((SimilarityParams{0, 1, 1, 0.5}.validate()), ConfigError);
  CHECK_THROWS_AS((SimilarityParams{1, 0, 1, 0.5}.validate()), ConfigError);
  CHECK_THROWS_AS((SimilarityParams{1, 1, -1, 0.5}.validate()), ConfigError);
  CHECK_THROWS_AS((SimilarityParams{1, 1, 1, 1.5}.validate()), ConfigError);
  CHECK_NOTHROW(SimilarityParams{}.validate());
}

TEST_CASE("truncated mode is bounded and non-negative") {
  Fixture f(make(oracle::random_corpus(30, 400, 10, 23)));
  DistanceIndex exact(f.katz);
  DistanceIndex trunc(f.katz, KlMode::kTruncated);
  for (WordId a = 1; a < f.model.vocab_size(); ++a)
    for (const auto &r : trunc.ranked(a)) CHECK(r.distance >= 0.0);
  for (WordId a = 1; a < f.model.vocab_size(); ++a)
    for (std::size_t i = 1; i < exact.ranked(a).size(); ++i)
      CHECK(exact.ranked(a)[i - 1].distance <= exact.ranked(a)[i].distance);
}

TEST_CASE("concurrent lookups agree with serial ones") {
  Fixture f(make(oracle::random_corpus(40, 400, 12, 31)));
  DistanceIndex index(f.katz);
  SimilarityScheme scheme(index, {});
  BackoffLM sim(f.model, scheme);
  const std::size_t v = f.model.vocab_size();
  std::vector<double> par(v * v);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < 4; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t a = t; a < v; a += 4)
          for (std::size_t b = 0; b < v; ++b)
            par[a * v + b] = sim.prob(static_cast<WordId>(a), static_cast<WordId>(b));
      });
  }
  DistanceIndex index2(f.katz);
  SimilarityScheme scheme2(index2, {});
  BackoffLM serial(f.model, scheme2);
  for (std::size_t a = 0; a < v; ++a)
    for (std::size_t b = 0; b < v; ++b)
      CHECK(par[a * v + b] == serial.prob(static_cast<WordId>(a), static_cast<WordId>(b)));
}
