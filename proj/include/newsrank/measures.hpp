// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/events.hpp"
#include "newsrank/langmodel.hpp"

namespace newsrank {

struct MeasureOptions {
  double tau = 0.6;      // reporting threshold on the divergence, nats
  double delta0 = 60.0;  // fallback gap when an event has one reporting site, seconds
  DivergenceMode divergence_mode = DivergenceMode::jsd_mixture;
};

struct ArticleAssignment {
  std::string article_id;
  std::string site;
  std::int64_t published_at = 0;
  int event_id = -1;        // argmax-similarity cluster; -1 for token-less articles
  double divergence = 0.0;  // +inf for token-less articles
  bool is_reporting = false;
};

// Pairs each article with its minimum-divergence event (ties to the lowest
// event id) and marks it reporting when the divergence is within tau.
// article_docs must align with articles. Throws EmptyEventSet.
std::vector<ArticleAssignment> assign_articles(const std::vector<NewsArticle>& articles,
                                               const std::vector<TokenizedDoc>& article_docs,
                                               const std::vector<EventCluster>& events,
                                               const std::vector<LanguageModel>& event_lms,
                                               const MeasureOptions& options);

// Fraction of the k events covered by at least one reporting article of the
// site. Throws EmptyEventSet when k = 0.
double diversity(const std::string& site, const std::vector<ArticleAssignment>& assignments,
                 int event_count);

// Mean JS similarity (<= 0) over the site's reporting articles, or nullopt
// when it has none.
std::optional<double> completeness(const std::string& site,
                                   const std::vector<ArticleAssignment>& assignments);

// Mean per-event timing ratio (>= 1) over the events the site reports, or
// nullopt when it reports none. For each event, per-site earliest reporting
// times give t_min/t_max and the earliest-to-second-earliest gap; the site's
// ratio is (t_max - t_min + gap) / (t_site - t_min + gap). The gap falls back
// to delta0 when a single site reports the event or when the two earliest
// sites tie, so the denominator stays positive.
std::optional<double> speed(const std::string& site,
                            const std::vector<ArticleAssignment>& assignments, double delta0);

struct SiteMeasures {
  double diversity = 0.0;
  std::optional<double> completeness;
  std::optional<double> speed;
};

struct MeasureReport {
  TimeWindow window;
  int event_count = 0;  // k
  std::map<std::string, SiteMeasures> sites;
  std::map<std::string, std::vector<std::string>> rankings;  // measure -> ordered site names
  std::string config_hash;
  std::string divergence_mode;
};

// Descending by value per measure; absent values last; ties by name.
std::map<std::string, std::vector<std::string>> rank_sites(
    const std::map<std::string, SiteMeasures>& sites);

MeasureReport compute_measures(const std::vector<std::string>& site_names,
                               const std::vector<ArticleAssignment>& assignments, int event_count,
                               TimeWindow window, const MeasureOptions& options,
                               const std::string& config_hash);

}  // namespace newsrank
