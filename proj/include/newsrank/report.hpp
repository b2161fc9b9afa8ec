// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/events.hpp"
#include "newsrank/measures.hpp"
#include "newsrank/preprocess.hpp"
#include "newsrank/publisher.hpp"
#include "newsrank/serank.hpp"

namespace newsrank {

struct PipelineConfig {
  // Inputs
  std::filesystem::path tweets_path;
  std::filesystem::path users_path;          // corpus users to classify
  std::filesystem::path labeled_users_path;  // training set
  std::filesystem::path articles_path;
  SiteRegistry sites;
  bool strict_sites = true;
  std::optional<TimeWindow> window;  // default: whole corpus span

  // Stage options
  std::filesystem::path stopwords_path;
  PreprocessOptions preprocess;
  PublisherOptions publisher;
  GsdmmParams gsdmm;
  MeasureOptions measures;
  std::map<std::string, std::filesystem::path> serank_fixtures;  // engine -> fixture
  bool serank_strict = true;

  std::filesystem::path output_dir = "out";

  std::filesystem::path artifact(const std::string& name) const { return output_dir / name; }
};

// Parses the JSON config, resolves relative paths against the config file's
// directory, and verifies every referenced input file exists.
PipelineConfig load_config(const std::filesystem::path& path);

// FNV-1a over the canonical config serialization plus the stop list content;
// the output directory is excluded so relocated outputs stay comparable.
std::string config_hash(const PipelineConfig& config);

// Stage artifact filenames inside output_dir.
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kPublishersFile = "publishers.json";
inline constexpr const char* kEventsFile = "events.jsonl";
inline constexpr const char* kAssignmentsFile = "assignments.jsonl";
inline constexpr const char* kMeasuresFile = "measures.json";
inline constexpr const char* kSerankFile = "serank_scores.json";
inline constexpr const char* kReportJsonFile = "report.json";
inline constexpr const char* kReportTextFile = "report.txt";

// Stages; each reads its predecessors' artifacts from output_dir and
// persists its own, so any stage can be rerun in isolation.
void stage_classify_publishers(const PipelineConfig& config);
std::vector<EventCluster> stage_detect_events(const PipelineConfig& config);
MeasureReport stage_rank(const PipelineConfig& config);
std::map<std::string, ScoreTable> stage_serank(const PipelineConfig& config);

struct PipelineResult {
  MeasureReport measures;
  std::map<std::string, ScoreTable> engine_scores;
  std::string report_json;   // exact bytes of report.json
  std::string report_text;   // rendered tables
};

PipelineResult stage_report(const PipelineConfig& config);

// load -> preprocess -> publisher filter -> GSDMM -> language models ->
// measures -> search ranking -> report, persisting every stage artifact.
PipelineResult run_pipeline(const PipelineConfig& config);

// Fixed-width tables, one per measure (scores to 3 decimals, absent values
// as "-") and one per search engine.
std::string render_tables(const MeasureReport& measures,
                          const std::map<std::string, ScoreTable>& engine_scores);

}  // namespace newsrank
