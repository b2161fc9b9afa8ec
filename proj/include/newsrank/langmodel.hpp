// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "newsrank/preprocess.hpp"

namespace newsrank {

struct EventCluster;  // events.hpp

// Unigram distribution over terms; strictly positive on its support and
// normalized to 1.
struct LanguageModel {
  std::map<std::string, double> probs;

  double prob(const std::string& term) const {
    auto it = probs.find(term);
    return it == probs.end() ? 0.0 : it->second;
  }
};

enum class DivergenceMode {
  // JSD(p,q) = 1/2 KL(p||m) + 1/2 KL(q||m), m = (p+q)/2. Finite on any pair,
  // bounded by ln 2.
  jsd_mixture,
  // 1/2 [KL(p~||q~) + KL(q~||p~)] on Lidstone-smoothed copies (1e-4
  // pseudo-count per union-support term).
  paper_literal,
};

DivergenceMode divergence_mode_from_string(std::string_view s);
std::string_view to_string(DivergenceMode mode);

LanguageModel mle_from_counts(const std::map<std::string, std::int64_t>& counts);
LanguageModel mle(const TokenizedDoc& doc);          // throws EmptyDocument
LanguageModel mle_cluster(const EventCluster& c);    // throws EmptyCluster

// Natural-log divergence; >= 0, and <= ln 2 in jsd_mixture mode.
double js_divergence(const LanguageModel& p, const LanguageModel& q,
                     DivergenceMode mode = DivergenceMode::jsd_mixture);

// Negated divergence; 0 is the best attainable score.
double js_similarity(const LanguageModel& p, const LanguageModel& q,
                     DivergenceMode mode = DivergenceMode::jsd_mixture);

// Terms by descending probability, ties by lexicographic order.
std::vector<std::string> top_k_words(const LanguageModel& lm, std::size_t k);

}  // namespace newsrank
