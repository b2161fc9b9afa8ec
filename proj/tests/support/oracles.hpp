// Apache License, Version 2.0, refer to LICENSE.txt

// Independent direct-formula implementations used as test oracles. These are
// deliberately written from the definitions, separate from the library code
// paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Dist = std::map<std::string, double>;

// JSD(p,q) = 1/2 KL(p||m) + 1/2 KL(q||m) with m = (p+q)/2, summed term by
// term over the union support, 0 log 0 = 0.
inline double jsd(const Dist& p, const Dist& q) {
  std::set<std::string> support;
  for (const auto& [w, v] : p) support.insert(w);
  for (const auto& [w, v] : q) support.insert(w);
  double total = 0.0;
  for (const std::string& w : support) {
    double pw = p.count(w) ? p.at(w) : 0.0;
    double qw = q.count(w) ? q.at(w) : 0.0;
    double mw = (pw + qw) / 2.0;
    double term = 0.0;
    if (pw > 0.0) term += 0.5 * pw * std::log(pw / mw);
    if (qw > 0.0) term += 0.5 * qw * std::log(qw / mw);
    total += term;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Measures: direct evaluation of the three definitions on a flat instance.

struct AssignmentRow {
  std::string site;
  int event_id = 0;
  double divergence = 0.0;
  bool is_reporting = false;
  std::int64_t published_at = 0;
};

struct Instance {
  std::vector<std::string> sites;
  int k = 0;
  std::vector<AssignmentRow> rows;
};

inline double diversity(const Instance& inst, const std::string& site) {
  std::set<int> events;
  for (const AssignmentRow& row : inst.rows) {
    if (row.site == site && row.is_reporting) events.insert(row.event_id);
  }
  return double(events.size()) / double(inst.k);
}

inline std::optional<double> completeness(const Instance& inst, const std::string& site) {
  double sum = 0.0;
  int n = 0;
  for (const AssignmentRow& row : inst.rows) {
    if (row.site == site && row.is_reporting) {
      sum += -row.divergence;
      n += 1;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

inline std::optional<double> speed(const Instance& inst, const std::string& site, double delta0) {
  // Events this site reports.
  std::set<int> site_events;
  for (const AssignmentRow& row : inst.rows) {
    if (row.site == site && row.is_reporting) site_events.insert(row.event_id);
  }
  if (site_events.empty()) return std::nullopt;

  double sum = 0.0;
  for (int event : site_events) {
    // Earliest reporting time per site for this event.
    std::map<std::string, std::int64_t> earliest;
    for (const AssignmentRow& row : inst.rows) {
      if (row.event_id != event || !row.is_reporting) continue;
      auto it = earliest.find(row.site);
      if (it == earliest.end() || row.published_at < it->second) {
        earliest[row.site] = row.published_at;
      }
    }
    std::vector<std::int64_t> times;
    for (const auto& [s, t] : earliest) times.push_back(t);
    std::sort(times.begin(), times.end());
    double t_min = double(times.front());
    double t_max = double(times.back());
    double gap = (times.size() >= 2) ? double(times[1] - times[0]) : delta0;
    if (gap == 0.0) gap = delta0;
    double t_site = double(earliest.at(site));
    sum += (t_max - t_min + gap) / (t_site - t_min + gap);
  }
  return sum / double(site_events.size());
}

// ---------------------------------------------------------------------------
// GSDMM single-step conditional, evaluated in product form with long double.

struct ConditionalInputs {
  int docs_without_current = 0;  // D - 1
  int num_clusters = 0;
  int vocab_size = 0;
  double alpha = 0.1;
  double beta = 0.1;
};

// counts_in_cluster: n_k^w for the words of the document, aligned with
// doc_word_counts; cluster_docs = m_k, cluster_tokens = n_k.
inline long double conditional_weight(const ConditionalInputs& in, int cluster_docs,
                                      long long cluster_tokens,
                                      const std::vector<std::pair<long long, long long>>&
                                          word_counts /* (n_k^w, c(w,d)) */) {
  long double weight = (cluster_docs + in.alpha) /
                       (in.docs_without_current + in.num_clusters * in.alpha);
  long long doc_len = 0;
  for (const auto& [nkw, cwd] : word_counts) {
    for (long long j = 1; j <= cwd; ++j) weight *= nkw + in.beta + j - 1;
    doc_len += cwd;
  }
  for (long long i = 1; i <= doc_len; ++i) {
    weight /= cluster_tokens + in.vocab_size * in.beta + i - 1;
  }
  return weight;
}

// ---------------------------------------------------------------------------
// Clustering purity against generating labels.

inline double purity(const std::vector<int>& truth, const std::vector<int>& assignment) {
  std::map<int, std::map<int, int>> by_cluster;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    by_cluster[assignment[i]][truth[i]] += 1;
  }
  int majority_total = 0;
  for (const auto& [cluster, label_counts] : by_cluster) {
    int best = 0;
    for (const auto& [label, count] : label_counts) best = std::max(best, count);
    majority_total += best;
  }
  return double(majority_total) / double(truth.size());
}

// ---------------------------------------------------------------------------
// Hand-coded naive Bayes for the publisher fixture: Gaussian numerics,
// add-1 Bernoulli binaries/terms. Operates on plain vectors.

struct NbExample {
  std::vector<double> numeric;
  std::vector<bool> binary;
  std::set<std::string> terms;
  bool is_publisher = false;
};

struct NbOracle {
  double prior_pub = 0, prior_other = 0;
  std::vector<double> mean_pub, var_pub, mean_other, var_other;
  std::vector<double> bin_pub, bin_other;
  std::map<std::string, double> term_pub, term_other;

  static NbOracle fit(const std::vector<NbExample>& data) {
    NbOracle m;
    std::vector<const NbExample*> pub, other;
    for (const NbExample& e : data) (e.is_publisher ? pub : other).push_back(&e);
    m.prior_pub = double(pub.size()) / double(data.size());
    m.prior_other = double(other.size()) / double(data.size());

    std::size_t dim = data.front().numeric.size();
    auto fit_gauss = [dim](const std::vector<const NbExample*>& rows, std::vector<double>& means,
                           std::vector<double>& vars) {
      means.assign(dim, 0.0);
      vars.assign(dim, 0.0);
      for (std::size_t j = 0; j < dim; ++j) {
        for (const NbExample* e : rows) means[j] += e->numeric[j];
        means[j] /= double(rows.size());
        for (const NbExample* e : rows) {
          vars[j] += (e->numeric[j] - means[j]) * (e->numeric[j] - means[j]);
        }
        vars[j] /= double(rows.size());
        if (vars[j] < 1e-9) vars[j] = 1e-9;
      }
    };
    fit_gauss(pub, m.mean_pub, m.var_pub);
    fit_gauss(other, m.mean_other, m.var_other);

    std::size_t bins = data.front().binary.size();
    auto fit_bin = [bins](const std::vector<const NbExample*>& rows, std::vector<double>& ps) {
      ps.assign(bins, 0.0);
      for (std::size_t j = 0; j < bins; ++j) {
        int positives = 0;
        for (const NbExample* e : rows) positives += e->binary[j] ? 1 : 0;
        ps[j] = (positives + 1.0) / (double(rows.size()) + 2.0);
      }
    };
    fit_bin(pub, m.bin_pub);
    fit_bin(other, m.bin_other);

    std::set<std::string> vocab;
    for (const NbExample& e : data) vocab.insert(e.terms.begin(), e.terms.end());
    for (const std::string& term : vocab) {
      int in_pub = 0, in_other = 0;
      for (const NbExample* e : pub) in_pub += e->terms.count(term) ? 1 : 0;
      for (const NbExample* e : other) in_other += e->terms.count(term) ? 1 : 0;
      m.term_pub[term] = (in_pub + 1.0) / (double(pub.size()) + 2.0);
      m.term_other[term] = (in_other + 1.0) / (double(other.size()) + 2.0);
    }
    return m;
  }

  bool predict_publisher(const NbExample& e) const {
    auto gauss = [](double x, double mean, double var) {
      return -0.5 * std::log(2.0 * M_PI * var) - (x - mean) * (x - mean) / (2.0 * var);
    };
    double lp = std::log(prior_pub), lo = std::log(prior_other);
    for (std::size_t j = 0; j < e.numeric.size(); ++j) {
      lp += gauss(e.numeric[j], mean_pub[j], var_pub[j]);
      lo += gauss(e.numeric[j], mean_other[j], var_other[j]);
    }
    for (std::size_t j = 0; j < e.binary.size(); ++j) {
      lp += std::log(e.binary[j] ? bin_pub[j] : 1.0 - bin_pub[j]);
      lo += std::log(e.binary[j] ? bin_other[j] : 1.0 - bin_other[j]);
    }
    for (const auto& [term, p] : term_pub) {
      bool present = e.terms.count(term) > 0;
      lp += std::log(present ? p : 1.0 - p);
      lo += std::log(present ? term_other.at(term) : 1.0 - term_other.at(term));
    }
    return lp > lo;
  }
};

}  // namespace oracle
