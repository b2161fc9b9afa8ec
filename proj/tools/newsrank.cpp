// Apache License, Version 2.0, refer to LICENSE.txt

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "newsrank/errors.hpp"
#include "newsrank/report.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "pipeline config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the clustering seed");
  cmd->add_option("--out", args.out_dir, "override the output directory");
}

newsrank::PipelineConfig load(const CommonArgs& args) {
  newsrank::PipelineConfig cfg = newsrank::load_config(args.config_path);
  if (args.seed) cfg.gsdmm.seed = static_cast<std::uint64_t>(*args.seed);
  if (args.out_dir) cfg.output_dir = *args.out_dir;
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank news websites by event coverage detected from tweets"};
  app.require_subcommand(1);

  CommonArgs classify_args, detect_args, rank_args, serank_args, report_args, run_args;

  CLI::App* classify = app.add_subcommand("classify-publishers",
                                          "train the publisher model and label corpus users");
  add_common(classify, classify_args);
  CLI::App* detect =
      app.add_subcommand("detect-events", "cluster publisher tweets into events");
  add_common(detect, detect_args);
  CLI::App* rank = app.add_subcommand("rank", "compute diversity/completeness/speed measures");
  add_common(rank, rank_args);
  CLI::App* serank =
      app.add_subcommand("serank", "score sites from recorded search results");
  add_common(serank, serank_args);
  CLI::App* report = app.add_subcommand("report", "assemble the final report and tables");
  add_common(report, report_args);
  CLI::App* run = app.add_subcommand("run", "full pipeline");
  add_common(run, run_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) {
      newsrank::stage_classify_publishers(load(classify_args));
    } else if (detect->parsed()) {
      newsrank::stage_detect_events(load(detect_args));
    } else if (rank->parsed()) {
      newsrank::stage_rank(load(rank_args));
    } else if (serank->parsed()) {
      auto cfg = load(serank_args);
      auto scores = newsrank::stage_serank(cfg);
      for (const auto& [engine, table] : scores) {
        std::printf("%s:\n", engine.c_str());
        for (const auto& [site, rs] : table.scores) {
          std::printf("  %-12s %lld\n", site.c_str(), static_cast<long long>(rs));
        }
      }
    } else if (report->parsed()) {
      auto result = newsrank::stage_report(load(report_args));
      std::fputs(result.report_text.c_str(), stdout);
    } else if (run->parsed()) {
      auto result = newsrank::run_pipeline(load(run_args));
      std::fputs(result.report_text.c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
