// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/serank.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "newsrank/errors.hpp"

namespace newsrank {

using ordered_json = nlohmann::ordered_json;

std::string Query::canonical() const {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += ' ';
    out += terms[i];
  }
  return out;
}

std::vector<Query> build_queries(const std::vector<EventCluster>& events,
                                 const std::vector<LanguageModel>& event_lms) {
  if (events.size() != event_lms.size()) throw Error("events/models size mismatch");
  std::vector<Query> queries;
  queries.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    queries.push_back({events[i].event_id, top_k_words(event_lms[i], 10)});
  }
  return queries;
}

FixtureSearchClient::FixtureSearchClient(std::map<std::string, std::vector<std::string>> fixtures,
                                         bool strict)
    : fixtures_(std::move(fixtures)), strict_(strict) {}

FixtureSearchClient FixtureSearchClient::load(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture file: " + path.string());
  ordered_json doc = ordered_json::parse(in);
  if (!doc.is_object()) throw Error("fixture file is not a JSON object: " + path.string());
  std::map<std::string, std::vector<std::string>> fixtures;
  for (const auto& [query, urls] : doc.items()) {
    fixtures[query] = urls.get<std::vector<std::string>>();
  }
  return FixtureSearchClient(std::move(fixtures), strict);
}

std::vector<std::string> FixtureSearchClient::top_urls(const std::string& canonical_query) {
  auto it = fixtures_.find(canonical_query);
  if (it == fixtures_.end()) {
    if (strict_) throw MissingFixture(canonical_query);
    return {};
  }
  std::vector<std::string> urls = it->second;
  if (urls.size() > 10) urls.resize(10);
  return urls;
}

std::vector<SearchResult> search(SearchClient& client, const Query& query) {
  std::vector<std::string> urls = client.top_urls(query.canonical());
  std::vector<SearchResult> results;
  results.reserve(urls.size());
  for (std::size_t i = 0; i < urls.size() && i < 10; ++i) {
    results.push_back({query.event_id, static_cast<int>(i) + 1, urls[i]});
  }
  return results;
}

namespace {

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return s;
}

// Hostname of an absolute http(s)-style url, lowercased; nullopt when the
// url has no scheme://host shape.
std::optional<std::string> parse_host(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) return std::nullopt;
  std::size_t authority_start = scheme_end + 3;
  std::size_t authority_end = url.find_first_of("/?#", authority_start);
  std::string authority = url.substr(authority_start, authority_end == std::string::npos
                                                          ? std::string::npos
                                                          : authority_end - authority_start);
  if (std::size_t at = authority.rfind('@'); at != std::string::npos) {
    authority = authority.substr(at + 1);
  }
  if (std::size_t colon = authority.find(':'); colon != std::string::npos) {
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  return ascii_lower(authority);
}

bool host_matches_domain(const std::string& host, const std::string& domain) {
  if (host == domain) return true;
  return host.size() > domain.size() + 1 && host.ends_with(domain) &&
         host[host.size() - domain.size() - 1] == '.';
}

std::optional<std::string> match_host_to_site(const std::string& host,
                                              const SiteRegistry& registry) {
  for (const SiteId& site : registry.sites()) {
    for (const std::string& domain : site.domains) {
      if (host_matches_domain(host, domain)) return site.name;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> host_match(const std::string& url, const SiteRegistry& registry) {
  std::optional<std::string> host = parse_host(url);
  if (!host) throw MalformedUrl(url);
  return match_host_to_site(*host, registry);
}

ScoreTable score(const std::vector<Query>& queries,
                 const std::vector<std::vector<SearchResult>>& results_per_query,
                 const SiteRegistry& registry) {
  if (queries.size() != results_per_query.size()) throw Error("queries/results size mismatch");
  ScoreTable table;
  for (const SiteId& site : registry.sites()) table.scores[site.name] = 0;
  for (const std::vector<SearchResult>& results : results_per_query) {
    for (const SearchResult& result : results) {
      std::optional<std::string> host = parse_host(result.url);
      if (!host) continue;
      std::optional<std::string> site = match_host_to_site(*host, registry);
      if (site) table.scores[*site] += 10 - result.rank;
    }
  }
  return table;
}

}  // namespace newsrank
