// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/events.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "newsrank/errors.hpp"
#include "newsrank/rng.hpp"

namespace newsrank {

IndexedDoc index_doc(const TokenizedDoc& doc, const Vocabulary& vocab) {
  IndexedDoc out;
  out.source_id = doc.source_id;
  out.term_counts.reserve(doc.term_counts.size());
  for (const auto& [term, count] : doc.term_counts) {
    int index = vocab.index_of(term);
    if (index < 0) throw Error("term not in vocabulary: " + term);
    out.term_counts.emplace_back(index, count);
    out.total_tokens += count;
  }
  std::sort(out.term_counts.begin(), out.term_counts.end());
  return out;
}

std::vector<IndexedDoc> index_docs(std::span<const TokenizedDoc> docs, const Vocabulary& vocab) {
  std::vector<IndexedDoc> out;
  out.reserve(docs.size());
  for (const TokenizedDoc& doc : docs) out.push_back(index_doc(doc, vocab));
  return out;
}

GsdmmState::GsdmmState(int num_docs, int num_clusters, int vocab_size)
    : num_docs_(num_docs),
      num_clusters_(num_clusters),
      vocab_size_(vocab_size),
      assignments_(static_cast<std::size_t>(num_docs), -1),
      docs_per_cluster_(static_cast<std::size_t>(num_clusters), 0),
      tokens_per_cluster_(static_cast<std::size_t>(num_clusters), 0),
      term_counts_(static_cast<std::size_t>(num_clusters) * static_cast<std::size_t>(vocab_size),
                   0) {}

void GsdmmState::add_doc(const IndexedDoc& doc, int doc_index, int cluster) {
  assert(assignments_[static_cast<std::size_t>(doc_index)] == -1);
  assignments_[static_cast<std::size_t>(doc_index)] = cluster;
  ++docs_per_cluster_[static_cast<std::size_t>(cluster)];
  tokens_per_cluster_[static_cast<std::size_t>(cluster)] += doc.total_tokens;
  std::size_t row = static_cast<std::size_t>(cluster) * static_cast<std::size_t>(vocab_size_);
  for (const auto& [term, count] : doc.term_counts) {
    term_counts_[row + static_cast<std::size_t>(term)] += count;
  }
}

void GsdmmState::remove_doc(const IndexedDoc& doc, int doc_index) {
  int cluster = assignments_[static_cast<std::size_t>(doc_index)];
  assert(cluster >= 0);
  assignments_[static_cast<std::size_t>(doc_index)] = -1;
  --docs_per_cluster_[static_cast<std::size_t>(cluster)];
  tokens_per_cluster_[static_cast<std::size_t>(cluster)] -= doc.total_tokens;
  std::size_t row = static_cast<std::size_t>(cluster) * static_cast<std::size_t>(vocab_size_);
  for (const auto& [term, count] : doc.term_counts) {
    term_counts_[row + static_cast<std::size_t>(term)] -= count;
    assert(term_counts_[row + static_cast<std::size_t>(term)] >= 0);
  }
}

int GsdmmState::non_empty_clusters() const {
  int n = 0;
  for (int m : docs_per_cluster_) {
    if (m > 0) ++n;
  }
  return n;
}

bool GsdmmState::counts_consistent(std::span<const IndexedDoc> docs) const {
  std::vector<int> m(static_cast<std::size_t>(num_clusters_), 0);
  std::vector<std::int64_t> n(static_cast<std::size_t>(num_clusters_), 0);
  std::vector<std::int64_t> nw(term_counts_.size(), 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    int k = assignments_[d];
    if (k < 0) return false;
    ++m[static_cast<std::size_t>(k)];
    n[static_cast<std::size_t>(k)] += docs[d].total_tokens;
    std::size_t row = static_cast<std::size_t>(k) * static_cast<std::size_t>(vocab_size_);
    for (const auto& [term, count] : docs[d].term_counts) {
      nw[row + static_cast<std::size_t>(term)] += count;
    }
  }
  return m == docs_per_cluster_ && n == tokens_per_cluster_ && nw == term_counts_;
}

double conditional_log_prob(const GsdmmState& state, const IndexedDoc& doc, int cluster,
                            const GsdmmParams& params) {
  double log_p =
      std::log((static_cast<double>(state.docs_in_cluster(cluster)) + params.alpha) /
               (static_cast<double>(state.num_docs()) - 1.0 +
                static_cast<double>(params.num_clusters) * params.alpha));
  for (const auto& [term, count] : doc.term_counts) {
    double base = static_cast<double>(state.term_count(cluster, term)) + params.beta;
    for (std::int64_t j = 0; j < count; ++j) {
      log_p += std::log(base + static_cast<double>(j));
    }
  }
  double denom_base = static_cast<double>(state.tokens_in_cluster(cluster)) +
                      static_cast<double>(state.vocab_size()) * params.beta;
  for (std::int64_t i = 0; i < doc.total_tokens; ++i) {
    log_p -= std::log(denom_base + static_cast<double>(i));
  }
  return log_p;
}

GsdmmState init_assignments(std::span<const IndexedDoc> docs, const GsdmmParams& params) {
  if (docs.empty()) throw EmptyCorpus();
  int vocab_size = 0;
  for (const IndexedDoc& doc : docs) {
    for (const auto& [term, count] : doc.term_counts) vocab_size = std::max(vocab_size, term + 1);
  }
  GsdmmState state(static_cast<int>(docs.size()), params.num_clusters, vocab_size);
  std::mt19937_64 rng(params.seed);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    int cluster = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(params.num_clusters)));
    state.add_doc(docs[d], static_cast<int>(d), cluster);
  }
  return state;
}

namespace {

// Draws a cluster from the normalized conditionals via log-sum-exp.
int sample_cluster(const GsdmmState& state, const IndexedDoc& doc, const GsdmmParams& params,
                   std::mt19937_64& rng, std::vector<double>& scratch) {
  int num_clusters = params.num_clusters;
  scratch.resize(static_cast<std::size_t>(num_clusters));
  double max_log = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_clusters; ++k) {
    scratch[static_cast<std::size_t>(k)] = conditional_log_prob(state, doc, k, params);
    max_log = std::max(max_log, scratch[static_cast<std::size_t>(k)]);
  }
  double total = 0.0;
  for (int k = 0; k < num_clusters; ++k) {
    scratch[static_cast<std::size_t>(k)] = std::exp(scratch[static_cast<std::size_t>(k)] - max_log);
    total += scratch[static_cast<std::size_t>(k)];
  }
  double u = uniform_unit(rng) * total;
  double cumulative = 0.0;
  for (int k = 0; k < num_clusters; ++k) {
    cumulative += scratch[static_cast<std::size_t>(k)];
    if (u < cumulative) return k;
  }
  return num_clusters - 1;
}

}  // namespace

std::vector<EventCluster> run_gsdmm(std::span<const IndexedDoc> docs,
                                    std::span<const std::int64_t> timestamps,
                                    const Vocabulary& vocab, const GsdmmParams& params) {
  if (docs.size() != timestamps.size()) throw Error("docs/timestamps size mismatch");
  GsdmmState state = init_assignments(docs, params);
  // The init consumed the seed stream for initial placement; sweeps continue
  // from a derived stream so both stay reproducible in isolation.
  std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> scratch;
  for (int iter = 0; iter < params.iterations; ++iter) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      state.remove_doc(docs[d], static_cast<int>(d));
      int cluster = sample_cluster(state, docs[d], params, rng, scratch);
      state.add_doc(docs[d], static_cast<int>(d), cluster);
    }
    assert(state.counts_consistent(docs));
  }

  // Non-empty clusters above the size threshold become events, renumbered in
  // cluster-index order.
  std::vector<std::vector<int>> members(static_cast<std::size_t>(params.num_clusters));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    members[static_cast<std::size_t>(state.assignment(static_cast<int>(d)))].push_back(
        static_cast<int>(d));
  }
  std::vector<EventCluster> events;
  for (int k = 0; k < params.num_clusters; ++k) {
    const std::vector<int>& docs_in_k = members[static_cast<std::size_t>(k)];
    if (docs_in_k.empty() || static_cast<int>(docs_in_k.size()) < params.min_cluster_size) {
      continue;
    }
    EventCluster event;
    event.event_id = static_cast<int>(events.size());
    std::vector<std::int64_t> times;
    times.reserve(docs_in_k.size());
    for (int d : docs_in_k) {
      const IndexedDoc& doc = docs[static_cast<std::size_t>(d)];
      event.member_ids.push_back(doc.source_id);
      times.push_back(timestamps[static_cast<std::size_t>(d)]);
      for (const auto& [term, count] : doc.term_counts) {
        event.term_counts[vocab.term_at(term)] += count;
      }
    }
    event.onset = event_onset(times);
    events.push_back(std::move(event));
  }
  return events;
}

std::int64_t event_onset(std::span<const std::int64_t> member_times) {
  assert(!member_times.empty());
  return *std::min_element(member_times.begin(), member_times.end());
}

}  // namespace newsrank
