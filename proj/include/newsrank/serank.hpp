// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/events.hpp"
#include "newsrank/langmodel.hpp"

namespace newsrank {

struct Query {
  int event_id = 0;
  std::vector<std::string> terms;  // top-10 terms of the event language model

  // Fixture key: terms joined by single spaces.
  std::string canonical() const;
};

struct SearchResult {
  int event_id = 0;
  int rank = 0;  // 1-based position in its result list
  std::string url;
};

struct ScoreTable {
  std::map<std::string, std::int64_t> scores;  // site name -> RS
};

std::vector<Query> build_queries(const std::vector<EventCluster>& events,
                                 const std::vector<LanguageModel>& event_lms);

class SearchClient {
 public:
  virtual ~SearchClient() = default;
  // At most 10 urls in rank order for the canonical query string.
  virtual std::vector<std::string> top_urls(const std::string& canonical_query) = 0;
};

// Replays recorded result lists from a JSON map {canonical_query: [url, ...]}.
// In strict mode an unrecorded query raises MissingFixture; otherwise it
// yields an empty result list.
class FixtureSearchClient : public SearchClient {
 public:
  FixtureSearchClient(std::map<std::string, std::vector<std::string>> fixtures, bool strict);
  static FixtureSearchClient load(const std::filesystem::path& path, bool strict = true);

  std::vector<std::string> top_urls(const std::string& canonical_query) override;

 private:
  std::map<std::string, std::vector<std::string>> fixtures_;
  bool strict_;
};

// Optional live adapter: GETs `endpoint` with the query appended and expects
// a JSON array of urls back. One request at a time, at least one second
// apart, every response appended to a fixture cache. Acceptance runs never
// touch it.
class LiveSearchClient : public SearchClient {
 public:
  LiveSearchClient(std::string host, std::string path_template,
                   std::filesystem::path cache_path);

  std::vector<std::string> top_urls(const std::string& canonical_query) override;

 private:
  std::string host_;
  std::string path_template_;  // "{query}" is replaced with the escaped query
  std::filesystem::path cache_path_;
  std::int64_t last_request_ms_ = 0;
};

std::vector<SearchResult> search(SearchClient& client, const Query& query);

// Registered site whose domain matches the url host exactly or at a dot
// boundary; nullopt when none does. Throws MalformedUrl.
std::optional<std::string> host_match(const std::string& url, const SiteRegistry& registry);

// Algorithm: every result whose host matches a registered site adds
// (10 - rank) to that site's score; registry order decides overlapping
// domains. Unmatched and malformed urls contribute nothing.
ScoreTable score(const std::vector<Query>& queries,
                 const std::vector<std::vector<SearchResult>>& results_per_query,
                 const SiteRegistry& registry);

}  // namespace newsrank
