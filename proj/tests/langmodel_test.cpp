// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "newsrank/errors.hpp"
#include "newsrank/events.hpp"
#include "newsrank/langmodel.hpp"
#include "support/oracles.hpp"

using namespace newsrank;

namespace {

LanguageModel make_lm(std::map<std::string, double> probs) {
  LanguageModel lm;
  lm.probs = std::move(probs);
  return lm;
}

// Random distribution over a random subset of a small alphabet.
LanguageModel random_lm(std::mt19937& gen) {
  static const char* alphabet[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  LanguageModel lm;
  double total = 0.0;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (const char* term : alphabet) {
    if (gen() % 2 == 0) continue;
    double w = unit(gen);
    lm.probs[term] = w;
    total += w;
  }
  if (lm.probs.empty()) {
    lm.probs["a"] = 1.0;
    total = 1.0;
  }
  for (auto& [term, p] : lm.probs) p /= total;
  return lm;
}

}  // namespace

TEST_CASE("mle gives relative frequencies") {
  auto doc = TokenizedDoc::from_tokens("d", {"a", "a", "b"});
  LanguageModel lm = mle(doc);
  CHECK(lm.prob("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lm.prob("b") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mle of single token is a point mass") {
  auto doc = TokenizedDoc::from_tokens("d", {"x"});
  CHECK(mle(doc).prob("x") == 1.0);
}

TEST_CASE("mle of empty doc throws") {
  auto doc = TokenizedDoc::from_tokens("d", {});
  CHECK_THROWS_AS(mle(doc), EmptyDocument);
}

TEST_CASE("mle output sums to one") {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> tokens;
    int len = 1 + static_cast<int>(gen() % 30);
    for (int i = 0; i < len; ++i) tokens.push_back(std::string(1, char('a' + gen() % 6)));
    LanguageModel lm = mle(TokenizedDoc::from_tokens("d", tokens));
    double total = 0.0;
    for (const auto& [term, p] : lm.probs) {
      CHECK(p > 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("mle_cluster pools member counts") {
  EventCluster c;
  c.event_id = 0;
  c.term_counts = {{"a", 2}, {"b", 1}};  // tweets [a] and [a,b]
  LanguageModel lm = mle_cluster(c);
  CHECK(lm.prob("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lm.prob("b") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("single-tweet cluster equals that tweet's mle") {
  auto doc = TokenizedDoc::from_tokens("t", {"x", "y", "x"});
  EventCluster c;
  c.term_counts = {{"x", 2}, {"y", 1}};
  CHECK(mle_cluster(c).probs == mle(doc).probs);
}

TEST_CASE("empty cluster throws") {
  EventCluster c;
  CHECK_THROWS_AS(mle_cluster(c), EmptyCluster);
}

TEST_CASE("jsd of identical models is zero") {
  auto p = make_lm({{"a", 0.4}, {"b", 0.6}});
  CHECK(js_divergence(p, p) < 1e-12);
}

TEST_CASE("jsd of disjoint supports is ln 2") {
  auto p = make_lm({{"a", 1.0}});
  auto q = make_lm({{"b", 0.5}, {"c", 0.5}});
  CHECK(js_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("jsd of point mass vs uniform pair matches the direct-summation oracle") {
  auto p = make_lm({{"a", 1.0}});
  auto q = make_lm({{"a", 0.5}, {"b", 0.5}});
  double expected = oracle::jsd(p.probs, q.probs);
  // Independently derived: 1/2 ln(4/3) + 1/4 ln(2/3) + 1/4 ln 2.
  CHECK(expected == doctest::Approx(0.215762).epsilon(1e-6));
  CHECK(js_divergence(p, q) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(js_similarity(p, q) == doctest::Approx(-expected).epsilon(1e-12));
}

TEST_CASE("js_similarity is the negation and tops out at zero") {
  auto p = make_lm({{"a", 1.0}});
  auto q = make_lm({{"b", 1.0}});
  CHECK(js_similarity(p, p) == 0.0);
  CHECK(js_similarity(p, q) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("jsd symmetry, range and identity over random pairs") {
  std::mt19937 gen(12345);
  for (int trial = 0; trial < 1000; ++trial) {
    LanguageModel p = random_lm(gen);
    LanguageModel q = random_lm(gen);
    double pq = js_divergence(p, q);
    double qp = js_divergence(q, p);
    CHECK(std::abs(pq - qp) < 1e-12);
    CHECK(pq >= 0.0);
    CHECK(pq <= std::log(2.0) + 1e-12);
    CHECK(js_divergence(p, p) < 1e-12);
    CHECK(std::abs(pq - oracle::jsd(p.probs, q.probs)) < 1e-12);
  }
}

TEST_CASE("zero jsd implies equal distributions on the union support") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    LanguageModel p = random_lm(gen);
    LanguageModel q = random_lm(gen);
    if (js_divergence(p, q) == 0.0) {
      for (const auto& [term, prob] : p.probs) CHECK(std::abs(prob - q.prob(term)) < 1e-9);
    }
  }
  // And constructively: a copy has zero divergence.
  LanguageModel p = random_lm(gen);
  CHECK(js_divergence(p, p) == 0.0);
}

TEST_CASE("paper-literal mode is finite on disjoint supports and zero on identity") {
  auto p = make_lm({{"a", 1.0}});
  auto q = make_lm({{"b", 1.0}});
  double d = js_divergence(p, q, DivergenceMode::paper_literal);
  CHECK(std::isfinite(d));
  CHECK(d > 0.0);
  CHECK(js_divergence(p, p, DivergenceMode::paper_literal) == doctest::Approx(0.0).epsilon(1e-12));
  // Smoothed symmetric KL exceeds the mixture JSD on the same pair.
  CHECK(d > js_divergence(p, q, DivergenceMode::jsd_mixture));
}

TEST_CASE("top_k_words orders by probability then lexicographically") {
  auto lm = make_lm({{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  CHECK(top_k_words(lm, 2) == std::vector<std::string>{"a", "b"});

  auto uniform = make_lm({{"b", 0.5}, {"a", 0.5}});
  CHECK(top_k_words(uniform, 2) == std::vector<std::string>{"a", "b"});

  CHECK(top_k_words(lm, 10) == std::vector<std::string>{"a", "b", "c"});
}
