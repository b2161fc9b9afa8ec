// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/publisher.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "newsrank/errors.hpp"
#include "newsrank/preprocess.hpp"

namespace newsrank {

using ordered_json = nlohmann::ordered_json;

PublisherFeatures extract_features(const UserProfile& user) {
  PublisherFeatures f;
  double followers = static_cast<double>(user.followers);
  double following = static_cast<double>(user.following);
  f.numeric = {followers,
               following,
               followers / (following + 1.0),
               static_cast<double>(user.tweets_count),
               static_cast<double>(user.favourites_count),
               static_cast<double>(user.listed_count)};
  f.binary = {user.verified, user.has_url};
  std::vector<std::string> tokens =
      normalize_and_tokenize(user.username + " " + user.description, TextMode::tweet);
  f.text_presence.insert(tokens.begin(), tokens.end());
  return f;
}

namespace {

std::array<double, kNumericFeatureCount> transformed(const std::array<double, 6>& numeric,
                                                     bool log_counts) {
  if (!log_counts) return numeric;
  std::array<double, kNumericFeatureCount> out{};
  for (std::size_t i = 0; i < numeric.size(); ++i) out[i] = std::log1p(numeric[i]);
  return out;
}

std::array<GaussianParams, kNumericFeatureCount> fit_gaussians(
    const std::vector<std::array<double, kNumericFeatureCount>>& rows) {
  std::array<GaussianParams, kNumericFeatureCount> params{};
  double n = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < kNumericFeatureCount; ++j) {
    double mean = 0.0;
    for (const auto& row : rows) mean += row[j];
    mean /= n;
    double variance = 0.0;
    for (const auto& row : rows) variance += (row[j] - mean) * (row[j] - mean);
    variance /= n;
    params[j] = {mean, std::max(variance, PublisherModel::kVarianceFloor)};
  }
  return params;
}

double bernoulli_add1(std::size_t positives, std::size_t n) {
  return (static_cast<double>(positives) + 1.0) / (static_cast<double>(n) + 2.0);
}

double gaussian_log_pdf(double x, const GaussianParams& g) {
  double diff = x - g.mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * g.variance) - diff * diff / (2.0 * g.variance);
}

double bernoulli_log_pmf(bool present, double p) {
  return std::log(present ? p : 1.0 - p);
}

}  // namespace

PublisherModel train(const std::vector<std::pair<PublisherFeatures, UserLabel>>& labeled,
                     const PublisherOptions& options) {
  std::vector<std::array<double, kNumericFeatureCount>> numeric_pub, numeric_other;
  std::array<std::size_t, kBinaryFeatureCount> binary_pub{}, binary_other{};
  std::map<std::string, std::size_t> text_pub, text_other;
  std::set<std::string> text_terms;

  for (const auto& [features, label] : labeled) {
    for (const std::string& term : features.text_presence) text_terms.insert(term);
  }
  for (const auto& [features, label] : labeled) {
    bool is_pub = label == UserLabel::publisher;
    (is_pub ? numeric_pub : numeric_other).push_back(transformed(features.numeric, options.log_counts));
    for (std::size_t j = 0; j < kBinaryFeatureCount; ++j) {
      if (features.binary[j]) ++(is_pub ? binary_pub : binary_other)[j];
    }
    for (const std::string& term : features.text_presence) {
      ++(is_pub ? text_pub : text_other)[term];
    }
  }

  std::size_t n_pub = numeric_pub.size();
  std::size_t n_other = numeric_other.size();
  if (n_pub == 0 || n_other == 0) throw SingleClassTrainingSet();

  PublisherModel model;
  model.log_counts = options.log_counts;
  double n = static_cast<double>(n_pub + n_other);
  model.prior_publisher = static_cast<double>(n_pub) / n;
  model.prior_other = static_cast<double>(n_other) / n;

  model.numeric_publisher = fit_gaussians(numeric_pub);
  model.numeric_other = fit_gaussians(numeric_other);

  for (std::size_t j = 0; j < kBinaryFeatureCount; ++j) {
    model.binary_publisher[j] = bernoulli_add1(binary_pub[j], n_pub);
    model.binary_other[j] = bernoulli_add1(binary_other[j], n_other);
  }

  for (const std::string& term : text_terms) {
    model.text_publisher[term] = bernoulli_add1(text_pub.count(term) ? text_pub[term] : 0, n_pub);
    model.text_other[term] = bernoulli_add1(text_other.count(term) ? text_other[term] : 0, n_other);
  }
  return model;
}

Classification classify(const PublisherModel& model, const PublisherFeatures& features,
                        double threshold) {
  std::array<double, kNumericFeatureCount> numeric = transformed(features.numeric, model.log_counts);

  double log_pub = std::log(model.prior_publisher);
  double log_other = std::log(model.prior_other);
  for (std::size_t j = 0; j < kNumericFeatureCount; ++j) {
    log_pub += gaussian_log_pdf(numeric[j], model.numeric_publisher[j]);
    log_other += gaussian_log_pdf(numeric[j], model.numeric_other[j]);
  }
  for (std::size_t j = 0; j < kBinaryFeatureCount; ++j) {
    log_pub += bernoulli_log_pmf(features.binary[j], model.binary_publisher[j]);
    log_other += bernoulli_log_pmf(features.binary[j], model.binary_other[j]);
  }
  // Bernoulli over the trained term space; terms outside it are ignored.
  for (const auto& [term, p_pub] : model.text_publisher) {
    bool present = features.text_presence.count(term) > 0;
    log_pub += bernoulli_log_pmf(present, p_pub);
    log_other += bernoulli_log_pmf(present, model.text_other.at(term));
  }

  // Normalize the pair; computed from the difference so scale cancels.
  double posterior = 1.0 / (1.0 + std::exp(log_other - log_pub));
  Classification result;
  result.posterior_publisher = posterior;
  result.label = posterior > threshold ? UserLabel::publisher : UserLabel::other;
  return result;
}

double evaluate_precision(const std::vector<UserLabel>& predicted,
                          const std::vector<UserLabel>& truth) {
  if (predicted.size() != truth.size()) throw Error("prediction/truth size mismatch");
  std::size_t predicted_pub = 0;
  std::size_t correct_pub = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == UserLabel::publisher) {
      ++predicted_pub;
      if (truth[i] == UserLabel::publisher) ++correct_pub;
    }
  }
  if (predicted_pub == 0) throw NoPositivePredictions();
  return static_cast<double>(correct_pub) / static_cast<double>(predicted_pub);
}

namespace {

ordered_json gaussians_to_json(const std::array<GaussianParams, kNumericFeatureCount>& params) {
  ordered_json arr = ordered_json::array();
  for (const GaussianParams& g : params) {
    arr.push_back(ordered_json{{"mean", g.mean}, {"variance", g.variance}});
  }
  return arr;
}

std::array<GaussianParams, kNumericFeatureCount> gaussians_from_json(const ordered_json& arr) {
  if (!arr.is_array() || arr.size() != kNumericFeatureCount) {
    throw Error("model file: bad gaussian parameter block");
  }
  std::array<GaussianParams, kNumericFeatureCount> params{};
  for (std::size_t j = 0; j < kNumericFeatureCount; ++j) {
    params[j] = {arr[j].at("mean").get<double>(), arr[j].at("variance").get<double>()};
  }
  return params;
}

}  // namespace

void save_model(const std::filesystem::path& path, const PublisherModel& model) {
  ordered_json doc;
  doc["priors"] = ordered_json{{"publisher", model.prior_publisher}, {"other", model.prior_other}};
  doc["numeric"] = ordered_json{{"publisher", gaussians_to_json(model.numeric_publisher)},
                                {"other", gaussians_to_json(model.numeric_other)}};
  doc["binary"] = ordered_json{
      {"publisher", std::vector<double>(model.binary_publisher.begin(), model.binary_publisher.end())},
      {"other", std::vector<double>(model.binary_other.begin(), model.binary_other.end())}};
  ordered_json terms = ordered_json::array();
  ordered_json p_pub = ordered_json::array();
  ordered_json p_other = ordered_json::array();
  for (const auto& [term, p] : model.text_publisher) {
    terms.push_back(term);
    p_pub.push_back(p);
    p_other.push_back(model.text_other.at(term));
  }
  doc["text"] = ordered_json{{"terms", terms}, {"publisher", p_pub}, {"other", p_other}};
  doc["log_counts"] = model.log_counts;

  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path.string());
  out << doc.dump(2) << '\n';
}

PublisherModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path.string());
  ordered_json doc = ordered_json::parse(in);

  PublisherModel model;
  model.prior_publisher = doc.at("priors").at("publisher").get<double>();
  model.prior_other = doc.at("priors").at("other").get<double>();
  model.numeric_publisher = gaussians_from_json(doc.at("numeric").at("publisher"));
  model.numeric_other = gaussians_from_json(doc.at("numeric").at("other"));
  auto binary_pub = doc.at("binary").at("publisher").get<std::vector<double>>();
  auto binary_other = doc.at("binary").at("other").get<std::vector<double>>();
  if (binary_pub.size() != kBinaryFeatureCount || binary_other.size() != kBinaryFeatureCount) {
    throw Error("model file: bad binary parameter block");
  }
  std::copy(binary_pub.begin(), binary_pub.end(), model.binary_publisher.begin());
  std::copy(binary_other.begin(), binary_other.end(), model.binary_other.begin());
  const ordered_json& text = doc.at("text");
  auto terms = text.at("terms").get<std::vector<std::string>>();
  auto p_pub = text.at("publisher").get<std::vector<double>>();
  auto p_other = text.at("other").get<std::vector<double>>();
  if (terms.size() != p_pub.size() || terms.size() != p_other.size()) {
    throw Error("model file: text parameter arrays misaligned");
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    model.text_publisher[terms[i]] = p_pub[i];
    model.text_other[terms[i]] = p_other[i];
  }
  model.log_counts = doc.at("log_counts").get<bool>();
  return model;
}

}  // namespace newsrank
