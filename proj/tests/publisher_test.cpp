// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "newsrank/publisher.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace newsrank;

namespace {

UserProfile profile(std::string id, std::int64_t followers, std::int64_t following,
                    bool verified, bool has_url, std::string description) {
  UserProfile u;
  u.user_id = id;
  u.username = "acct_" + id;
  u.description = std::move(description);
  u.followers = followers;
  u.following = following;
  u.tweets_count = 10;
  u.favourites_count = 2;
  u.listed_count = 1;
  u.verified = verified;
  u.has_url = has_url;
  return u;
}

// Two well-separated synthetic populations; the same draw feeds both the
// library features and the hand-coded oracle.
struct Fixture {
  std::vector<std::pair<PublisherFeatures, UserLabel>> train_set;
  std::vector<PublisherFeatures> heldout;
  std::vector<UserLabel> heldout_truth;
  std::vector<oracle::NbExample> oracle_train;
  std::vector<oracle::NbExample> oracle_heldout;
};

Fixture make_fixture(std::uint32_t seed) {
  std::mt19937 gen(seed);
  const std::vector<std::string> pub_terms = {"news", "breaking", "desk", "editor", "reports"};
  const std::vector<std::string> other_terms = {"love", "life", "music", "games", "travel"};

  auto draw = [&gen](double mean, double sd) {
    std::normal_distribution<double> d(mean, sd);
    return static_cast<std::int64_t>(std::max(0.0, d(gen)));
  };
  auto coin = [&gen](double p) { return std::uniform_real_distribution<>(0, 1)(gen) < p; };

  Fixture f;
  int counter = 0;
  auto add = [&](bool is_pub, bool training) {
    UserProfile u;
    u.user_id = "u" + std::to_string(counter);
    u.username = "acct" + std::to_string(counter);
    ++counter;
    const auto& pool = is_pub ? pub_terms : other_terms;
    std::set<std::string> terms = {u.username};
    std::string description;
    for (int j = 0; j < 3; ++j) {
      const std::string& term = pool[gen() % pool.size()];
      terms.insert(term);
      description += term + " ";
    }
    u.description = description;
    if (is_pub) {
      u.followers = draw(50000, 5000);
      u.following = draw(200, 50);
      u.tweets_count = draw(20000, 2000);
      u.favourites_count = draw(100, 30);
      u.listed_count = draw(500, 50);
      u.verified = coin(0.9);
      u.has_url = coin(0.9);
    } else {
      u.followers = draw(300, 100);
      u.following = draw(400, 100);
      u.tweets_count = draw(1000, 300);
      u.favourites_count = draw(2000, 400);
      u.listed_count = draw(5, 3);
      u.verified = coin(0.05);
      u.has_url = coin(0.3);
    }

    PublisherFeatures features = extract_features(u);
    oracle::NbExample example;
    example.numeric = {double(u.followers),       double(u.following),
                       double(u.followers) / (double(u.following) + 1.0),
                       double(u.tweets_count),    double(u.favourites_count),
                       double(u.listed_count)};
    example.binary = {u.verified, u.has_url};
    example.terms = terms;
    example.is_publisher = is_pub;

    if (training) {
      f.train_set.emplace_back(features, is_pub ? UserLabel::publisher : UserLabel::other);
      f.oracle_train.push_back(example);
    } else {
      f.heldout.push_back(features);
      f.heldout_truth.push_back(is_pub ? UserLabel::publisher : UserLabel::other);
      f.oracle_heldout.push_back(example);
    }
  };

  for (int i = 0; i < 15; ++i) add(true, true);
  for (int i = 0; i < 15; ++i) add(false, true);
  for (int i = 0; i < 20; ++i) add(true, false);
  for (int i = 0; i < 20; ++i) add(false, false);
  return f;
}

}  // namespace

TEST_CASE("follower ratio uses the +1 denominator") {
  PublisherFeatures f = extract_features(profile("u1", 100, 0, false, false, ""));
  CHECK(f.numeric[2] == 100.0);
}

TEST_CASE("description terms land in the presence set") {
  PublisherFeatures f = extract_features(profile("u1", 1, 1, false, false, "news and weather"));
  CHECK(f.text_presence.count("news") == 1);
  CHECK(f.text_presence.count("weather") == 1);
}

TEST_CASE("all-zero profile maps to zero numerics and false binaries") {
  UserProfile u;
  u.user_id = "u";
  PublisherFeatures f = extract_features(u);
  for (double v : f.numeric) CHECK(v == 0.0);
  CHECK_FALSE(f.binary[0]);
  CHECK_FALSE(f.binary[1]);
}

TEST_CASE("mentions and urls in the description do not become terms") {
  PublisherFeatures f =
      extract_features(profile("u1", 1, 1, false, false, "follow @me at http://t.co/x news"));
  CHECK(f.text_presence.count("news") == 1);
  CHECK(f.text_presence.count("me") == 0);
  CHECK(f.text_presence.count("http") == 0);
}

TEST_CASE("train smooths bernoulli features with add-1 over two outcomes") {
  auto pub = extract_features(profile("p", 100, 10, true, false, "newsroom"));
  auto other = extract_features(profile("o", 5, 50, false, false, "just me"));
  PublisherModel model = train({{pub, UserLabel::publisher}, {other, UserLabel::other}});
  // verified true for the single publisher example: (1+1)/(1+2).
  CHECK(model.binary_publisher[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Term seen in no publisher profile keeps a positive floor 1/(n_pub+2).
  CHECK(model.text_publisher.at("just") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(model.text_publisher.at("just") > 0.0);
}

TEST_CASE("training on a single class throws") {
  auto f = extract_features(profile("p", 1, 1, true, false, "x"));
  CHECK_THROWS_AS(train({{f, UserLabel::publisher}, {f, UserLabel::publisher}}),
                  SingleClassTrainingSet);
}

TEST_CASE("training example classifies back to its own class") {
  auto pub = extract_features(profile("p", 100000, 10, true, true, "breaking news desk"));
  auto other = extract_features(profile("o", 5, 500, false, false, "cat pictures"));
  PublisherModel model = train({{pub, UserLabel::publisher}, {other, UserLabel::other}});
  CHECK(classify(model, pub).label == UserLabel::publisher);
  CHECK(classify(model, other).label == UserLabel::other);
}

TEST_CASE("a degenerate model with identical classes ties to other") {
  auto a = extract_features(profile("a", 10, 10, true, false, "same words"));
  auto b = a;
  PublisherModel model =
      train({{a, UserLabel::publisher}, {b, UserLabel::other}});  // identical example per class
  Classification c = classify(model, a);
  CHECK(c.posterior_publisher == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.label == UserLabel::other);
}

TEST_CASE("posteriors are finite, in range and classify never yields NaN on the training set") {
  Fixture f = make_fixture(2024);
  PublisherModel model = train(f.train_set);
  for (const auto& [features, label] : f.train_set) {
    Classification c = classify(model, features);
    CHECK(std::isfinite(c.posterior_publisher));
    CHECK(c.posterior_publisher >= 0.0);
    CHECK(c.posterior_publisher <= 1.0);
    // Two-class posterior pair sums to one by construction.
    CHECK(std::abs(c.posterior_publisher + (1.0 - c.posterior_publisher) - 1.0) <= 1e-12);
  }
}

TEST_CASE("held-out fixture: matches the hand-coded oracle and reaches 0.9 accuracy") {
  Fixture f = make_fixture(77);
  PublisherModel model = train(f.train_set);
  oracle::NbOracle reference = oracle::NbOracle::fit(f.oracle_train);

  int agree = 0;
  int correct = 0;
  for (std::size_t i = 0; i < f.heldout.size(); ++i) {
    UserLabel mine = classify(model, f.heldout[i]).label;
    bool oracle_pub = reference.predict_publisher(f.oracle_heldout[i]);
    if ((mine == UserLabel::publisher) == oracle_pub) ++agree;
    if (mine == f.heldout_truth[i]) ++correct;
  }
  CHECK(agree == static_cast<int>(f.heldout.size()));
  CHECK(double(correct) / double(f.heldout.size()) >= 0.9);
}

TEST_CASE("threshold shifts the decision but not the posterior") {
  Fixture f = make_fixture(5);
  PublisherModel model = train(f.train_set);
  const PublisherFeatures& features = f.heldout.front();
  double posterior = classify(model, features, 0.5).posterior_publisher;
  CHECK(classify(model, features, 0.999999).posterior_publisher == posterior);
  if (posterior > 0.5 && posterior <= 0.999999) {
    CHECK(classify(model, features, 0.999999).label == UserLabel::other);
  }
}

TEST_CASE("precision arithmetic: 20 of 27 predicted") {
  std::vector<UserLabel> predicted, truth;
  for (int i = 0; i < 27; ++i) {
    predicted.push_back(UserLabel::publisher);
    truth.push_back(i < 20 ? UserLabel::publisher : UserLabel::other);
  }
  // Pad with correctly ignored users.
  for (int i = 0; i < 10; ++i) {
    predicted.push_back(UserLabel::other);
    truth.push_back(UserLabel::other);
  }
  CHECK(evaluate_precision(predicted, truth) == doctest::Approx(20.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("precision is 1 when all positive predictions are right") {
  std::vector<UserLabel> predicted = {UserLabel::publisher, UserLabel::other};
  std::vector<UserLabel> truth = {UserLabel::publisher, UserLabel::publisher};
  CHECK(evaluate_precision(predicted, truth) == 1.0);
}

TEST_CASE("precision with zero positive predictions throws") {
  std::vector<UserLabel> predicted = {UserLabel::other};
  std::vector<UserLabel> truth = {UserLabel::publisher};
  CHECK_THROWS_AS(evaluate_precision(predicted, truth), NoPositivePredictions);
}

TEST_CASE("model json round trip preserves classifications") {
  Fixture f = make_fixture(31);
  PublisherModel model = train(f.train_set);
  testsupport::TempDir dir("publisher");
  save_model(dir.path() / "model.json", model);
  PublisherModel loaded = load_model(dir.path() / "model.json");
  for (const PublisherFeatures& features : f.heldout) {
    CHECK(classify(loaded, features).label == classify(model, features).label);
    CHECK(classify(loaded, features).posterior_publisher ==
          doctest::Approx(classify(model, features).posterior_publisher).epsilon(1e-12));
  }
}

TEST_CASE("log_counts transform is honored at train and classify time") {
  Fixture f = make_fixture(8);
  PublisherOptions options;
  options.log_counts = true;
  PublisherModel model = train(f.train_set, options);
  CHECK(model.log_counts);
  int correct = 0;
  for (std::size_t i = 0; i < f.heldout.size(); ++i) {
    if (classify(model, f.heldout[i]).label == f.heldout_truth[i]) ++correct;
  }
  CHECK(double(correct) / double(f.heldout.size()) >= 0.9);
}

TEST_CASE("publisher filtering only ever shrinks a tweet corpus") {
  Fixture f = make_fixture(64);
  PublisherModel model = train(f.train_set);
  // Tweets authored by the held-out users, one each.
  std::vector<int> corpus(f.heldout.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < f.heldout.size(); ++i) {
    if (classify(model, f.heldout[i]).label == UserLabel::publisher) ++kept;
  }
  CHECK(kept <= corpus.size());
}
