// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "newsrank/preprocess.hpp"

namespace newsrank {

struct GsdmmParams {
  double alpha = 0.1;
  double beta = 0.1;
  int num_clusters = 50;  // K
  int iterations = 10;
  std::uint64_t seed = 0;
  int min_cluster_size = 1;
};

// Document in dense vocabulary indices, ready for the sampler.
struct IndexedDoc {
  std::string source_id;
  std::vector<std::pair<int, std::int64_t>> term_counts;  // (term index, count), index-sorted
  std::int64_t total_tokens = 0;
};

IndexedDoc index_doc(const TokenizedDoc& doc, const Vocabulary& vocab);
std::vector<IndexedDoc> index_docs(std::span<const TokenizedDoc> docs, const Vocabulary& vocab);

// Collapsed Gibbs sampler state for the Dirichlet multinomial mixture:
// per-document cluster assignments plus the per-cluster sufficient counts.
class GsdmmState {
 public:
  GsdmmState(int num_docs, int num_clusters, int vocab_size);

  void add_doc(const IndexedDoc& doc, int doc_index, int cluster);
  void remove_doc(const IndexedDoc& doc, int doc_index);

  int assignment(int doc_index) const { return assignments_[static_cast<std::size_t>(doc_index)]; }
  int docs_in_cluster(int k) const { return docs_per_cluster_[static_cast<std::size_t>(k)]; }
  std::int64_t tokens_in_cluster(int k) const {
    return tokens_per_cluster_[static_cast<std::size_t>(k)];
  }
  std::int64_t term_count(int k, int term) const {
    return term_counts_[static_cast<std::size_t>(k) * static_cast<std::size_t>(vocab_size_) +
                        static_cast<std::size_t>(term)];
  }
  int num_docs() const { return num_docs_; }
  int num_clusters() const { return num_clusters_; }
  int vocab_size() const { return vocab_size_; }
  int non_empty_clusters() const;
  const std::vector<int>& assignments() const { return assignments_; }

  // Count bookkeeping invariants: sum of per-cluster doc counts equals the
  // number of assigned docs and token totals match per-term sums.
  bool counts_consistent(std::span<const IndexedDoc> docs) const;

 private:
  int num_docs_;
  int num_clusters_;
  int vocab_size_;
  std::vector<int> assignments_;                  // -1 while a doc is detached
  std::vector<int> docs_per_cluster_;             // m_k
  std::vector<std::int64_t> tokens_per_cluster_;  // n_k
  std::vector<std::int64_t> term_counts_;         // n_k^w, dense K x V
};

// Unnormalized log probability that `doc` belongs to cluster k, with the
// doc's own counts already removed from the state:
//
//   log[(m_k + alpha) / (D - 1 + K alpha)]
//   + sum_{w in d} sum_{j=1}^{c(w,d)} log(n_k^w + beta + j - 1)
//   - sum_{i=1}^{|d|}                 log(n_k + V beta + i - 1)
double conditional_log_prob(const GsdmmState& state, const IndexedDoc& doc, int cluster,
                            const GsdmmParams& params);

// Uniform seeded initial assignment. Throws EmptyCorpus on zero docs.
GsdmmState init_assignments(std::span<const IndexedDoc> docs, const GsdmmParams& params);

struct EventCluster {
  int event_id = 0;
  std::vector<std::string> member_ids;                 // tweet ids, corpus order
  std::map<std::string, std::int64_t> term_counts;     // pooled over members
  std::int64_t onset = 0;                              // min created_at over members

  bool operator==(const EventCluster&) const = default;
};

// Full sampler: `iterations` sweeps of remove / resample / re-add over every
// doc, then non-empty clusters of at least min_cluster_size members become
// events. Deterministic in (docs, params, seed).
std::vector<EventCluster> run_gsdmm(std::span<const IndexedDoc> docs,
                                    std::span<const std::int64_t> timestamps,
                                    const Vocabulary& vocab, const GsdmmParams& params);

std::int64_t event_onset(std::span<const std::int64_t> member_times);

}  // namespace newsrank
