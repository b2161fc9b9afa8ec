// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "newsrank/corpus.hpp"

namespace newsrank {

// Eight metadata features (six numeric, two boolean) plus unigram presence
// over the username and description text.
struct PublisherFeatures {
  // followers, following, followers/(following+1), tweets, favourites, listed
  std::array<double, 6> numeric{};
  std::array<bool, 2> binary{};  // verified, has_url
  std::set<std::string> text_presence;
};

inline constexpr std::size_t kNumericFeatureCount = 6;
inline constexpr std::size_t kBinaryFeatureCount = 2;

struct GaussianParams {
  double mean = 0.0;
  double variance = 1.0;
};

// Hybrid naive Bayes: Gaussian class conditionals for the numeric features,
// add-1-smoothed Bernoulli for the booleans and for every text term seen in
// training.
struct PublisherModel {
  double prior_publisher = 0.5;
  double prior_other = 0.5;
  std::array<GaussianParams, kNumericFeatureCount> numeric_publisher{};
  std::array<GaussianParams, kNumericFeatureCount> numeric_other{};
  std::array<double, kBinaryFeatureCount> binary_publisher{};  // P(true | class)
  std::array<double, kBinaryFeatureCount> binary_other{};
  std::map<std::string, double> text_publisher;  // P(present | class), shared key set
  std::map<std::string, double> text_other;
  bool log_counts = false;

  static constexpr double kVarianceFloor = 1e-9;
};

struct PublisherOptions {
  double threshold = 0.5;  // posterior(publisher) must exceed this
  bool log_counts = false;
};

PublisherFeatures extract_features(const UserProfile& user);

PublisherModel train(const std::vector<std::pair<PublisherFeatures, UserLabel>>& labeled,
                     const PublisherOptions& options = {});

struct Classification {
  UserLabel label = UserLabel::other;
  double posterior_publisher = 0.0;
};

// Argmax of the two log posteriors; a tie (posterior exactly at the
// threshold) goes to 'other'. Profile terms unseen in training are ignored.
Classification classify(const PublisherModel& model, const PublisherFeatures& features,
                        double threshold = 0.5);

// |predicted-publisher AND true-publisher| / |predicted-publisher|.
double evaluate_precision(const std::vector<UserLabel>& predicted,
                          const std::vector<UserLabel>& truth);

void save_model(const std::filesystem::path& path, const PublisherModel& model);
PublisherModel load_model(const std::filesystem::path& path);

}  // namespace newsrank
