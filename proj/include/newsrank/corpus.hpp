// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsrank/errors.hpp"

namespace newsrank {

struct Tweet {
  std::string id;
  std::string user_id;
  std::string text;
  std::int64_t created_at = 0;  // epoch seconds UTC

  bool operator==(const Tweet&) const = default;
};

enum class UserLabel { publisher, other };

std::string_view to_string(UserLabel label);
UserLabel user_label_from_string(std::string_view s);

struct UserProfile {
  std::string user_id;
  std::string username;
  std::string description;
  std::int64_t followers = 0;
  std::int64_t following = 0;
  std::int64_t tweets_count = 0;
  std::int64_t favourites_count = 0;
  std::int64_t listed_count = 0;
  bool verified = false;
  bool has_url = false;
  std::optional<UserLabel> label;

  bool operator==(const UserProfile&) const = default;
};

struct NewsArticle {
  std::string id;
  std::string site;  // canonical site name from the registry
  std::string url;
  std::string title;
  std::string body;
  std::int64_t published_at = 0;  // epoch seconds UTC

  bool operator==(const NewsArticle&) const = default;
};

struct SiteId {
  std::string name;                   // canonical, e.g. "BBC"
  std::vector<std::string> domains;   // lowercase hostname suffixes, no scheme/path

  bool operator==(const SiteId&) const = default;
};

class SiteRegistry {
 public:
  SiteRegistry() = default;
  explicit SiteRegistry(std::vector<SiteId> sites);

  const std::vector<SiteId>& sites() const { return sites_; }
  const SiteId* find(std::string_view name) const;
  std::vector<std::string> names() const;
  bool empty() const { return sites_.empty(); }

 private:
  std::vector<SiteId> sites_;
};

struct TimeWindow {
  std::int64_t start = 0;  // inclusive
  std::int64_t end = 0;    // exclusive

  bool contains(std::int64_t t) const { return start <= t && t < end; }
  bool operator==(const TimeWindow&) const = default;
};

std::vector<Tweet> load_tweets(const std::filesystem::path& path);
std::vector<UserProfile> load_user_profiles(const std::filesystem::path& path);

// Articles are attributed against the registry. In strict mode an
// unregistered site name raises UnknownSite; in permissive mode the record is
// kept with site "OTHER".
std::vector<NewsArticle> load_articles(const std::filesystem::path& path,
                                       const SiteRegistry& registry, bool strict = true);

void save_tweets(const std::filesystem::path& path, const std::vector<Tweet>& tweets);
void save_user_profiles(const std::filesystem::path& path,
                        const std::vector<UserProfile>& users);
void save_articles(const std::filesystem::path& path,
                   const std::vector<NewsArticle>& articles);

// Keeps items with start <= timestamp < end, preserving order.
template <class T, class TimeOf>
std::vector<T> filter_window(const std::vector<T>& items, TimeWindow w, TimeOf time_of) {
  std::vector<T> kept;
  for (const T& item : items) {
    if (w.contains(time_of(item))) kept.push_back(item);
  }
  return kept;
}

std::vector<Tweet> filter_window(const std::vector<Tweet>& tweets, TimeWindow w);
std::vector<NewsArticle> filter_window(const std::vector<NewsArticle>& articles, TimeWindow w);

}  // namespace newsrank
