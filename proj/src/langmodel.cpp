// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/langmodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "newsrank/errors.hpp"
#include "newsrank/events.hpp"

namespace newsrank {

DivergenceMode divergence_mode_from_string(std::string_view s) {
  if (s == "jsd-mixture") return DivergenceMode::jsd_mixture;
  if (s == "paper-literal") return DivergenceMode::paper_literal;
  throw ConfigError("unknown divergence mode: " + std::string(s));
}

std::string_view to_string(DivergenceMode mode) {
  return mode == DivergenceMode::jsd_mixture ? "jsd-mixture" : "paper-literal";
}

LanguageModel mle_from_counts(const std::map<std::string, std::int64_t>& counts) {
  std::int64_t total = 0;
  for (const auto& [term, count] : counts) total += count;
  LanguageModel lm;
  if (total == 0) return lm;
  for (const auto& [term, count] : counts) {
    if (count > 0) lm.probs[term] = static_cast<double>(count) / static_cast<double>(total);
  }
  return lm;
}

LanguageModel mle(const TokenizedDoc& doc) {
  if (doc.tokens.empty()) throw EmptyDocument(doc.source_id);
  return mle_from_counts(doc.term_counts);
}

LanguageModel mle_cluster(const EventCluster& c) {
  if (c.term_counts.empty()) throw EmptyCluster(c.event_id);
  return mle_from_counts(c.term_counts);
}

namespace {

constexpr double kLidstoneEpsilon = 1e-4;

std::set<std::string> union_support(const LanguageModel& p, const LanguageModel& q) {
  std::set<std::string> support;
  for (const auto& [term, prob] : p.probs) support.insert(term);
  for (const auto& [term, prob] : q.probs) support.insert(term);
  return support;
}

double mixture_jsd(const LanguageModel& p, const LanguageModel& q) {
  double jsd = 0.0;
  for (const std::string& term : union_support(p, q)) {
    double pw = p.prob(term);
    double qw = q.prob(term);
    double mw = 0.5 * (pw + qw);
    if (pw > 0.0) jsd += 0.5 * pw * std::log(pw / mw);
    if (qw > 0.0) jsd += 0.5 * qw * std::log(qw / mw);
  }
  return std::max(jsd, 0.0);
}

double smoothed_symmetric_kl(const LanguageModel& p, const LanguageModel& q) {
  std::set<std::string> support = union_support(p, q);
  double norm = 1.0 + kLidstoneEpsilon * static_cast<double>(support.size());
  double kl_pq = 0.0;
  double kl_qp = 0.0;
  for (const std::string& term : support) {
    double pw = (p.prob(term) + kLidstoneEpsilon) / norm;
    double qw = (q.prob(term) + kLidstoneEpsilon) / norm;
    kl_pq += pw * std::log(pw / qw);
    kl_qp += qw * std::log(qw / pw);
  }
  return std::max(0.5 * (kl_pq + kl_qp), 0.0);
}

}  // namespace

double js_divergence(const LanguageModel& p, const LanguageModel& q, DivergenceMode mode) {
  return mode == DivergenceMode::jsd_mixture ? mixture_jsd(p, q) : smoothed_symmetric_kl(p, q);
}

double js_similarity(const LanguageModel& p, const LanguageModel& q, DivergenceMode mode) {
  return -js_divergence(p, q, mode);
}

std::vector<std::string> top_k_words(const LanguageModel& lm, std::size_t k) {
  std::vector<std::pair<std::string, double>> entries(lm.probs.begin(), lm.probs.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  words.reserve(std::min(k, entries.size()));
  for (std::size_t i = 0; i < entries.size() && i < k; ++i) words.push_back(entries[i].first);
  return words;
}

}  // namespace newsrank
