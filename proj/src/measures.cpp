// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "newsrank/errors.hpp"

namespace newsrank {

std::vector<ArticleAssignment> assign_articles(const std::vector<NewsArticle>& articles,
                                               const std::vector<TokenizedDoc>& article_docs,
                                               const std::vector<EventCluster>& events,
                                               const std::vector<LanguageModel>& event_lms,
                                               const MeasureOptions& options) {
  if (events.empty()) throw EmptyEventSet();
  if (articles.size() != article_docs.size()) throw Error("articles/docs size mismatch");
  if (events.size() != event_lms.size()) throw Error("events/models size mismatch");

  std::vector<ArticleAssignment> assignments;
  assignments.reserve(articles.size());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    ArticleAssignment a;
    a.article_id = articles[i].id;
    a.site = articles[i].site;
    a.published_at = articles[i].published_at;
    if (article_docs[i].empty()) {
      // No tokens survive preprocessing: not comparable to any event.
      a.event_id = -1;
      a.divergence = std::numeric_limits<double>::infinity();
      a.is_reporting = false;
      assignments.push_back(std::move(a));
      continue;
    }
    LanguageModel article_lm = mle(article_docs[i]);
    double best = std::numeric_limits<double>::infinity();
    int best_event = -1;
    for (std::size_t e = 0; e < events.size(); ++e) {
      double d = js_divergence(article_lm, event_lms[e], options.divergence_mode);
      if (d < best) {
        best = d;
        best_event = events[e].event_id;
      }
    }
    a.event_id = best_event;
    a.divergence = best;
    a.is_reporting = best <= options.tau;
    assignments.push_back(std::move(a));
  }
  return assignments;
}

double diversity(const std::string& site, const std::vector<ArticleAssignment>& assignments,
                 int event_count) {
  if (event_count <= 0) throw EmptyEventSet();
  std::set<int> covered;
  for (const ArticleAssignment& a : assignments) {
    if (a.site == site && a.is_reporting) covered.insert(a.event_id);
  }
  return static_cast<double>(covered.size()) / static_cast<double>(event_count);
}

std::optional<double> completeness(const std::string& site,
                                   const std::vector<ArticleAssignment>& assignments) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const ArticleAssignment& a : assignments) {
    if (a.site == site && a.is_reporting) {
      sum += -a.divergence;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

namespace {

// event -> (site -> earliest reporting-article publish time)
std::map<int, std::map<std::string, std::int64_t>> earliest_reporting_times(
    const std::vector<ArticleAssignment>& assignments) {
  std::map<int, std::map<std::string, std::int64_t>> earliest;
  for (const ArticleAssignment& a : assignments) {
    if (!a.is_reporting) continue;
    auto& per_site = earliest[a.event_id];
    auto it = per_site.find(a.site);
    if (it == per_site.end() || a.published_at < it->second) per_site[a.site] = a.published_at;
  }
  return earliest;
}

}  // namespace

std::optional<double> speed(const std::string& site,
                            const std::vector<ArticleAssignment>& assignments, double delta0) {
  auto earliest = earliest_reporting_times(assignments);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [event_id, per_site] : earliest) {
    auto it = per_site.find(site);
    if (it == per_site.end()) continue;
    std::int64_t t_min = std::numeric_limits<std::int64_t>::max();
    std::int64_t t_max = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> times;
    times.reserve(per_site.size());
    for (const auto& [other_site, t] : per_site) {
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
      times.push_back(t);
    }
    double gap;
    if (times.size() < 2) {
      gap = delta0;
    } else {
      std::sort(times.begin(), times.end());
      gap = static_cast<double>(times[1] - times[0]);
      if (gap == 0.0) gap = delta0;  // tied leaders would zero the denominator
    }
    sum += (static_cast<double>(t_max - t_min) + gap) /
           (static_cast<double>(it->second - t_min) + gap);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::map<std::string, std::vector<std::string>> rank_sites(
    const std::map<std::string, SiteMeasures>& sites) {
  auto ranked = [&sites](auto value_of) {
    std::vector<std::string> names;
    names.reserve(sites.size());
    for (const auto& [name, m] : sites) names.push_back(name);
    std::stable_sort(names.begin(), names.end(),
                     [&](const std::string& a, const std::string& b) {
                       std::optional<double> va = value_of(sites.at(a));
                       std::optional<double> vb = value_of(sites.at(b));
                       if (va.has_value() != vb.has_value()) return va.has_value();
                       if (va && vb && *va != *vb) return *va > *vb;
                       return a < b;
                     });
    return names;
  };
  std::map<std::string, std::vector<std::string>> rankings;
  rankings["diversity"] =
      ranked([](const SiteMeasures& m) { return std::optional<double>(m.diversity); });
  rankings["completeness"] = ranked([](const SiteMeasures& m) { return m.completeness; });
  rankings["speed"] = ranked([](const SiteMeasures& m) { return m.speed; });
  return rankings;
}

MeasureReport compute_measures(const std::vector<std::string>& site_names,
                               const std::vector<ArticleAssignment>& assignments, int event_count,
                               TimeWindow window, const MeasureOptions& options,
                               const std::string& config_hash) {
  MeasureReport report;
  report.window = window;
  report.event_count = event_count;
  report.config_hash = config_hash;
  report.divergence_mode = std::string(to_string(options.divergence_mode));
  for (const std::string& site_name : site_names) {
    SiteMeasures m;
    m.diversity = diversity(site_name, assignments, event_count);
    m.completeness = completeness(site_name, assignments);
    m.speed = speed(site_name, assignments, options.delta0);
    report.sites[site_name] = m;
  }
  report.rankings = rank_sites(report.sites);
  return report;
}

}  // namespace newsrank
