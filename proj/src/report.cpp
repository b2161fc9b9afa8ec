// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "newsrank/errors.hpp"
#include "newsrank/log.hpp"

namespace newsrank {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError(what + " does not exist: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
}

std::uint64_t fnv1a_bytes(std::string_view data, std::uint64_t h = 14695981039346656037ULL) {
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  require_file(path, "config file");
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const ordered_json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  std::filesystem::path base = path.parent_path();

  PipelineConfig cfg;
  try {
    const auto& inputs = doc.at("inputs");
    cfg.tweets_path = resolve(base, inputs.at("tweets").get<std::string>());
    cfg.users_path = resolve(base, inputs.at("users").get<std::string>());
    cfg.labeled_users_path = resolve(base, inputs.at("labeled_users").get<std::string>());
    cfg.articles_path = resolve(base, inputs.at("articles").get<std::string>());

    std::vector<SiteId> sites;
    for (const auto& site : doc.at("sites")) {
      sites.push_back(
          {site.at("name").get<std::string>(), site.at("domains").get<std::vector<std::string>>()});
    }
    cfg.sites = SiteRegistry(std::move(sites));

    if (doc.contains("corpus")) {
      cfg.strict_sites = doc["corpus"].value("strict_sites", true);
    }
    if (doc.contains("window")) {
      TimeWindow w{doc["window"].at("start").get<std::int64_t>(),
                   doc["window"].at("end").get<std::int64_t>()};
      if (w.start >= w.end) throw ConfigError("window start must precede end");
      cfg.window = w;
    }

    const auto& preprocess = doc.at("preprocess");
    cfg.stopwords_path = resolve(base, preprocess.at("stopwords").get<std::string>());
    cfg.preprocess.stemmer = stemmer_from_string(preprocess.value("stemmer", "none"));

    if (doc.contains("publisher")) {
      cfg.publisher.threshold = doc["publisher"].value("threshold", 0.5);
      cfg.publisher.log_counts = doc["publisher"].value("log_counts", false);
    }

    if (doc.contains("events")) {
      const auto& events = doc["events"];
      cfg.gsdmm.alpha = events.value("alpha", 0.1);
      cfg.gsdmm.beta = events.value("beta", 0.1);
      cfg.gsdmm.num_clusters = events.value("K", 50);
      cfg.gsdmm.iterations = events.value("iterations", 10);
      cfg.gsdmm.seed = events.value("seed", std::uint64_t{0});
      cfg.gsdmm.min_cluster_size = events.value("min_cluster_size", 1);
      if (cfg.gsdmm.alpha <= 0 || cfg.gsdmm.beta <= 0 || cfg.gsdmm.num_clusters < 1 ||
          cfg.gsdmm.iterations < 1) {
        throw ConfigError("events: alpha/beta must be positive, K/iterations at least 1");
      }
    }

    if (doc.contains("measures")) {
      const auto& measures = doc["measures"];
      cfg.measures.tau = measures.value("tau", 0.6);
      cfg.measures.delta0 = measures.value("delta0", 60.0);
      cfg.measures.divergence_mode =
          divergence_mode_from_string(measures.value("divergence_mode", "jsd-mixture"));
      if (cfg.measures.delta0 <= 0) throw ConfigError("measures.delta0 must be positive");
    }

    if (doc.contains("serank")) {
      const auto& serank = doc["serank"];
      if (serank.contains("fixtures")) {
        for (const auto& [engine, fixture] : serank["fixtures"].items()) {
          cfg.serank_fixtures[engine] = resolve(base, fixture.get<std::string>());
        }
      }
      cfg.serank_strict = serank.value("strict", true);
    }

    if (doc.contains("output")) {
      cfg.output_dir = resolve(base, doc["output"].value("dir", "out"));
    } else {
      cfg.output_dir = base / "out";
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }

  require_file(cfg.tweets_path, "tweets path");
  require_file(cfg.users_path, "users path");
  require_file(cfg.labeled_users_path, "labeled users path");
  require_file(cfg.articles_path, "articles path");
  require_file(cfg.stopwords_path, "stopword list");
  for (const auto& [engine, fixture] : cfg.serank_fixtures) {
    require_file(fixture, "search fixture for " + engine);
  }
  return cfg;
}

std::string config_hash(const PipelineConfig& cfg) {
  // Plain json sorts object keys, giving a canonical serialization.
  json doc;
  doc["inputs"] = {{"tweets", cfg.tweets_path.string()},
                   {"users", cfg.users_path.string()},
                   {"labeled_users", cfg.labeled_users_path.string()},
                   {"articles", cfg.articles_path.string()}};
  json sites = json::array();
  for (const SiteId& site : cfg.sites.sites()) {
    sites.push_back({{"name", site.name}, {"domains", site.domains}});
  }
  doc["sites"] = sites;
  doc["strict_sites"] = cfg.strict_sites;
  if (cfg.window) doc["window"] = {{"start", cfg.window->start}, {"end", cfg.window->end}};
  doc["preprocess"] = {{"stopwords_hash", StopwordSet::load(cfg.stopwords_path).content_hash()},
                       {"stemmer", std::string(to_string(cfg.preprocess.stemmer))}};
  doc["publisher"] = {{"threshold", cfg.publisher.threshold},
                      {"log_counts", cfg.publisher.log_counts}};
  doc["events"] = {{"alpha", cfg.gsdmm.alpha},
                   {"beta", cfg.gsdmm.beta},
                   {"K", cfg.gsdmm.num_clusters},
                   {"iterations", cfg.gsdmm.iterations},
                   {"seed", cfg.gsdmm.seed},
                   {"min_cluster_size", cfg.gsdmm.min_cluster_size}};
  doc["measures"] = {{"tau", cfg.measures.tau},
                     {"delta0", cfg.measures.delta0},
                     {"divergence_mode", std::string(to_string(cfg.measures.divergence_mode))}};
  json fixtures = json::object();
  for (const auto& [engine, fixture] : cfg.serank_fixtures) fixtures[engine] = fixture.string();
  doc["serank"] = {{"fixtures", fixtures}, {"strict", cfg.serank_strict}};

  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a_bytes(doc.dump())));
  return hex;
}

namespace {

TimeWindow resolve_window(const PipelineConfig& cfg, const std::vector<Tweet>& tweets,
                          const std::vector<NewsArticle>& articles) {
  if (cfg.window) return *cfg.window;
  if (tweets.empty() && articles.empty()) throw EmptyCorpus();
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const Tweet& t : tweets) {
    lo = std::min(lo, t.created_at);
    hi = std::max(hi, t.created_at);
  }
  for (const NewsArticle& a : articles) {
    lo = std::min(lo, a.published_at);
    hi = std::max(hi, a.published_at);
  }
  return {lo, hi + 1};
}

std::filesystem::path require_artifact(const PipelineConfig& cfg, const char* name,
                                       const char* producing_stage) {
  std::filesystem::path path = cfg.artifact(name);
  if (!std::filesystem::exists(path)) {
    throw ConfigError("missing stage artifact " + path.string() + " (run " +
                      std::string(producing_stage) + " first)");
  }
  return path;
}

struct EventRecord {
  int event_id = 0;
  std::vector<std::string> member_ids;
  std::int64_t onset = 0;
  std::vector<std::string> top_words;
};

void write_events_file(const std::filesystem::path& path, const std::vector<EventCluster>& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path.string());
  for (const EventCluster& event : events) {
    LanguageModel lm = mle_cluster(event);
    ordered_json record{{"event_id", event.event_id},
                        {"member_tweet_ids", event.member_ids},
                        {"onset", event.onset},
                        {"top_words", top_k_words(lm, 20)}};
    out << record.dump() << '\n';
  }
}

std::vector<EventRecord> read_events_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  std::vector<EventRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const ordered_json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    }
    EventRecord r;
    r.event_id = record.at("event_id").get<int>();
    r.member_ids = record.at("member_tweet_ids").get<std::vector<std::string>>();
    r.onset = record.at("onset").get<std::int64_t>();
    r.top_words = record.at("top_words").get<std::vector<std::string>>();
    records.push_back(std::move(r));
  }
  return records;
}

struct LoadedEvents {
  std::vector<EventCluster> events;
  std::vector<LanguageModel> lms;
};

// Rebuilds pooled cluster term counts from the member tweets named in
// events.jsonl, using the same preprocessing as detect-events.
LoadedEvents load_events_with_counts(const PipelineConfig& cfg) {
  std::filesystem::path events_path = require_artifact(cfg, kEventsFile, "detect-events");
  std::vector<EventRecord> records = read_events_file(events_path);

  std::map<std::string, std::string> text_by_id;
  for (const Tweet& t : load_tweets(cfg.tweets_path)) text_by_id[t.id] = t.text;
  StopwordSet stopwords = StopwordSet::load(cfg.stopwords_path);

  LoadedEvents loaded;
  for (const EventRecord& record : records) {
    EventCluster event;
    event.event_id = record.event_id;
    event.member_ids = record.member_ids;
    event.onset = record.onset;
    for (const std::string& tweet_id : record.member_ids) {
      auto it = text_by_id.find(tweet_id);
      if (it == text_by_id.end()) throw Error("events file references unknown tweet: " + tweet_id);
      TokenizedDoc doc =
          preprocess_doc(tweet_id, it->second, TextMode::tweet, stopwords, cfg.preprocess);
      for (const auto& [term, count] : doc.term_counts) event.term_counts[term] += count;
    }
    loaded.lms.push_back(mle_cluster(event));
    loaded.events.push_back(std::move(event));
  }
  return loaded;
}

ordered_json measures_to_json(const MeasureReport& report) {
  ordered_json sites = ordered_json::object();
  for (const auto& [name, m] : report.sites) {
    ordered_json entry;
    entry["diversity"] = m.diversity;
    entry["completeness"] = m.completeness ? ordered_json(*m.completeness) : ordered_json(nullptr);
    entry["speed"] = m.speed ? ordered_json(*m.speed) : ordered_json(nullptr);
    sites[name] = entry;
  }
  ordered_json rankings = ordered_json::object();
  for (const char* measure : {"diversity", "completeness", "speed"}) {
    rankings[measure] = report.rankings.at(measure);
  }
  return ordered_json{{"window", {{"start", report.window.start}, {"end", report.window.end}}},
                      {"k", report.event_count},
                      {"sites", sites},
                      {"rankings", rankings},
                      {"config_hash", report.config_hash},
                      {"divergence_mode", report.divergence_mode}};
}

MeasureReport measures_from_json(const ordered_json& doc) {
  MeasureReport report;
  report.window = {doc.at("window").at("start").get<std::int64_t>(),
                   doc.at("window").at("end").get<std::int64_t>()};
  report.event_count = doc.at("k").get<int>();
  for (const auto& [name, entry] : doc.at("sites").items()) {
    SiteMeasures m;
    m.diversity = entry.at("diversity").get<double>();
    if (!entry.at("completeness").is_null()) m.completeness = entry.at("completeness").get<double>();
    if (!entry.at("speed").is_null()) m.speed = entry.at("speed").get<double>();
    report.sites[name] = m;
  }
  for (const auto& [measure, names] : doc.at("rankings").items()) {
    report.rankings[measure] = names.get<std::vector<std::string>>();
  }
  report.config_hash = doc.at("config_hash").get<std::string>();
  report.divergence_mode = doc.at("divergence_mode").get<std::string>();
  return report;
}

}  // namespace

void stage_classify_publishers(const PipelineConfig& cfg) {
  std::vector<UserProfile> labeled = load_user_profiles(cfg.labeled_users_path);
  std::vector<std::pair<PublisherFeatures, UserLabel>> training;
  for (const UserProfile& user : labeled) {
    if (user.label) training.emplace_back(extract_features(user), *user.label);
  }
  log_info("training on " + std::to_string(training.size()) + " labeled profiles");
  PublisherModel model = train(training, cfg.publisher);
  save_model(cfg.artifact(kModelFile), model);

  std::vector<UserProfile> users = load_user_profiles(cfg.users_path);
  ordered_json predictions = ordered_json::array();
  std::size_t publishers = 0;
  for (const UserProfile& user : users) {
    Classification c = classify(model, extract_features(user), cfg.publisher.threshold);
    if (c.label == UserLabel::publisher) ++publishers;
    predictions.push_back(ordered_json{{"user_id", user.user_id},
                                       {"label", std::string(to_string(c.label))},
                                       {"posterior_publisher", c.posterior_publisher}});
  }
  log_info(std::to_string(publishers) + " of " + std::to_string(users.size()) +
           " users classified as publisher");
  write_file(cfg.artifact(kPublishersFile), predictions.dump(2) + "\n");
}

std::vector<EventCluster> stage_detect_events(const PipelineConfig& cfg) {
  std::filesystem::path publishers_path =
      require_artifact(cfg, kPublishersFile, "classify-publishers");
  ordered_json predictions = ordered_json::parse(read_file(publishers_path));
  std::set<std::string> publisher_ids;
  for (const auto& entry : predictions) {
    if (entry.at("label").get<std::string>() == "publisher") {
      publisher_ids.insert(entry.at("user_id").get<std::string>());
    }
  }

  std::vector<Tweet> tweets = load_tweets(cfg.tweets_path);
  std::vector<NewsArticle> articles =
      load_articles(cfg.articles_path, cfg.sites, cfg.strict_sites);
  TimeWindow window = resolve_window(cfg, tweets, articles);
  tweets = filter_window(tweets, window);
  std::erase_if(tweets, [&](const Tweet& t) { return publisher_ids.count(t.user_id) == 0; });
  log_info(std::to_string(tweets.size()) + " publisher tweets in window");

  StopwordSet stopwords = StopwordSet::load(cfg.stopwords_path);
  std::vector<TokenizedDoc> docs;
  std::vector<std::int64_t> timestamps;
  for (const Tweet& t : tweets) {
    TokenizedDoc doc = preprocess_doc(t.id, t.text, TextMode::tweet, stopwords, cfg.preprocess);
    if (doc.empty()) continue;  // nothing for the sampler to see
    docs.push_back(std::move(doc));
    timestamps.push_back(t.created_at);
  }
  if (docs.empty()) throw EmptyCorpus();

  Vocabulary vocab = Vocabulary::build(docs);
  std::vector<IndexedDoc> indexed = index_docs(docs, vocab);
  std::vector<EventCluster> events = run_gsdmm(indexed, timestamps, vocab, cfg.gsdmm);
  log_info(std::to_string(events.size()) + " events detected");
  write_events_file(cfg.artifact(kEventsFile), events);
  return events;
}

MeasureReport stage_rank(const PipelineConfig& cfg) {
  LoadedEvents loaded = load_events_with_counts(cfg);

  std::vector<Tweet> tweets = load_tweets(cfg.tweets_path);
  std::vector<NewsArticle> articles =
      load_articles(cfg.articles_path, cfg.sites, cfg.strict_sites);
  TimeWindow window = resolve_window(cfg, tweets, articles);
  articles = filter_window(articles, window);
  // Permissive loading buckets unregistered sites under OTHER; they are
  // excluded from ranking and must not act as speed competitors either.
  std::erase_if(articles, [&](const NewsArticle& a) { return cfg.sites.find(a.site) == nullptr; });

  StopwordSet stopwords = StopwordSet::load(cfg.stopwords_path);
  std::vector<TokenizedDoc> article_docs;
  article_docs.reserve(articles.size());
  for (const NewsArticle& a : articles) {
    article_docs.push_back(
        preprocess_doc(a.id, a.title + " " + a.body, TextMode::article, stopwords, cfg.preprocess));
  }

  std::vector<ArticleAssignment> assignments =
      assign_articles(articles, article_docs, loaded.events, loaded.lms, cfg.measures);

  std::ofstream out(cfg.artifact(kAssignmentsFile));
  if (!out) throw Error("cannot write file: " + cfg.artifact(kAssignmentsFile).string());
  for (const ArticleAssignment& a : assignments) {
    ordered_json record{{"article_id", a.article_id},
                        {"site", a.site},
                        {"published_at", a.published_at},
                        {"event_id", a.event_id},
                        {"divergence", std::isfinite(a.divergence) ? ordered_json(a.divergence)
                                                                   : ordered_json(nullptr)},
                        {"is_reporting", a.is_reporting}};
    out << record.dump() << '\n';
  }
  out.close();

  MeasureReport report =
      compute_measures(cfg.sites.names(), assignments, static_cast<int>(loaded.events.size()),
                       window, cfg.measures, config_hash(cfg));
  write_file(cfg.artifact(kMeasuresFile), measures_to_json(report).dump(2) + "\n");
  return report;
}

std::map<std::string, ScoreTable> stage_serank(const PipelineConfig& cfg) {
  LoadedEvents loaded = load_events_with_counts(cfg);
  std::vector<Query> queries = build_queries(loaded.events, loaded.lms);

  std::map<std::string, ScoreTable> engine_scores;
  for (const auto& [engine, fixture_path] : cfg.serank_fixtures) {
    FixtureSearchClient client = FixtureSearchClient::load(fixture_path, cfg.serank_strict);
    std::vector<std::vector<SearchResult>> results;
    results.reserve(queries.size());
    for (const Query& query : queries) results.push_back(search(client, query));
    engine_scores[engine] = score(queries, results, cfg.sites);
  }

  ordered_json doc = ordered_json::object();
  for (const auto& [engine, table] : engine_scores) {
    ordered_json scores = ordered_json::object();
    for (const auto& [site, rs] : table.scores) scores[site] = rs;
    doc[engine] = scores;
  }
  write_file(cfg.artifact(kSerankFile), doc.dump(2) + "\n");
  return engine_scores;
}

PipelineResult stage_report(const PipelineConfig& cfg) {
  std::filesystem::path measures_path = require_artifact(cfg, kMeasuresFile, "rank");
  MeasureReport measures = measures_from_json(ordered_json::parse(read_file(measures_path)));

  std::map<std::string, ScoreTable> engine_scores;
  std::filesystem::path serank_path = cfg.artifact(kSerankFile);
  if (std::filesystem::exists(serank_path)) {
    ordered_json doc = ordered_json::parse(read_file(serank_path));
    for (const auto& [engine, scores] : doc.items()) {
      ScoreTable table;
      for (const auto& [site, rs] : scores.items()) table.scores[site] = rs.get<std::int64_t>();
      engine_scores[engine] = table;
    }
  }

  ordered_json report = measures_to_json(measures);
  ordered_json serank = ordered_json::object();
  for (const auto& [engine, table] : engine_scores) {
    ordered_json scores = ordered_json::object();
    for (const auto& [site, rs] : table.scores) scores[site] = rs;
    serank[engine] = scores;
  }
  report["serank"] = serank;

  PipelineResult result;
  result.measures = std::move(measures);
  result.engine_scores = std::move(engine_scores);
  result.report_json = report.dump(2) + "\n";
  result.report_text = render_tables(result.measures, result.engine_scores);
  write_file(cfg.artifact(kReportJsonFile), result.report_json);
  write_file(cfg.artifact(kReportTextFile), result.report_text);
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  auto stage = [](const char* name, auto&& fn) {
    try {
      log_info(std::string("stage ") + name);
      return fn();
    } catch (const Error& e) {
      throw Error(std::string(name) + ": " + e.what());
    }
  };
  stage("classify-publishers", [&] { stage_classify_publishers(cfg); return 0; });
  stage("detect-events", [&] { return stage_detect_events(cfg); });
  stage("rank", [&] { return stage_rank(cfg); });
  stage("serank", [&] { return stage_serank(cfg); });
  return stage("report", [&] { return stage_report(cfg); });
}

namespace {

std::string format_score(const std::optional<double>& value) {
  if (!value) return "—";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", *value);
  return buffer;
}

void append_table(std::string& out, const std::string& title,
                  const std::vector<std::pair<std::string, std::string>>& rows,
                  const char* value_header) {
  out += "== " + title + " ==\n";
  std::size_t site_width = 4;
  for (const auto& [site, value] : rows) site_width = std::max(site_width, site.size());
  char line[160];
  std::snprintf(line, sizeof(line), "%-4s  %-*s  %s\n", "rank", static_cast<int>(site_width),
                "site", value_header);
  out += line;
  int rank = 1;
  for (const auto& [site, value] : rows) {
    std::snprintf(line, sizeof(line), "%-4d  %-*s  %s\n", rank++, static_cast<int>(site_width),
                  site.c_str(), value.c_str());
    out += line;
  }
  out += '\n';
}

}  // namespace

std::string render_tables(const MeasureReport& measures,
                          const std::map<std::string, ScoreTable>& engine_scores) {
  std::string out;
  for (const char* measure : {"diversity", "completeness", "speed"}) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const std::string& site : measures.rankings.at(measure)) {
      const SiteMeasures& m = measures.sites.at(site);
      std::optional<double> value;
      if (std::string_view(measure) == "diversity") {
        value = m.diversity;
      } else if (std::string_view(measure) == "completeness") {
        value = m.completeness;
      } else {
        value = m.speed;
      }
      rows.emplace_back(site, format_score(value));
    }
    append_table(out, measure, rows, "score");
  }

  for (const auto& [engine, table] : engine_scores) {
    std::vector<std::pair<std::string, std::int64_t>> ordered(table.scores.begin(),
                                                              table.scores.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [site, rs] : ordered) rows.emplace_back(site, std::to_string(rs));
    append_table(out, "search: " + engine, rows, "RS");
  }
  return out;
}

}  // namespace newsrank
