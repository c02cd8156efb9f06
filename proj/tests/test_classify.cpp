#include <doctest.h>

#include <cmath>
#include <set>

#include "smflow/classify.hpp"
#include "smflow/sim.hpp"

using namespace smflow;

namespace {

// Small corpus for structural tests: 3 gaits x 3 grounds x 4 episodes, 20 s.
Corpus small_corpus(int episodes_per_cell = 4, double duration = 20.0) {
  std::vector<Recording> eps;
  for (const char* g : {"babble", "turn-left", "bound-right"}) {
    for (const char* gr : {"foil", "styrofoam", "rubber"}) {
      for (int i = 0; i < episodes_per_cell; ++i) {
        SimConfig cfg;
        cfg.gait = make_gait(g);
        cfg.ground = make_ground(gr);
        cfg.duration_s = duration;
        cfg.seed = fnv1a64(std::string("unit/") + g + "/" + gr) + i;
        eps.push_back(run_episode(cfg));
      }
    }
  }
  return Corpus::build(std::move(eps), 100, 4, 777);
}

}  // namespace

TEST_CASE("feature vector shapes follow 16 x m x history") {
  Corpus corpus = small_corpus(2);
  std::vector<std::size_t> all;
  for (std::size_t e = 0; e < corpus.episodes().size(); ++e) all.push_back(e);
  auto fb = fit_feature_bins(corpus, all, 5);
  const auto& rec = corpus.episodes()[0];

  auto f1 = epoch_features(rec, fb, 100, 0, 1);
  CHECK(f1.size() == 80);
  auto f4 = epoch_features(rec, fb, 100, 0, 4);
  CHECK(f4.size() == 320);

  // histogram mass per channel slot sums to epoch_len (after undoing the L1
  // normalization)
  const double mass = 100.0 * 16;
  double total = 0.0;
  for (double v : f1) total += v * mass;
  CHECK(total == doctest::Approx(16 * 100));
  for (int ch = 0; ch < 16; ++ch) {
    double channel_mass = 0.0;
    for (int b = 0; b < 5; ++b) channel_mass += f1[ch * 5 + b] * mass;
    CHECK(channel_mass == doctest::Approx(100));
  }
}

TEST_CASE("a constant channel lands its whole histogram in one bin") {
  std::vector<std::vector<double>> channels(kNumChannels);
  Rng rng(5);
  for (int c = 0; c < kNumChannels; ++c) {
    for (int t = 0; t < 400; ++t) {
      channels[c].push_back(c == 2 ? 0.42 : std::fabs(rng.normal()));
    }
  }
  RecordingMeta meta;
  meta.gait = "g";
  meta.ground = "r";
  auto rec = build_recording(channels, 0.02, meta);
  Corpus corpus = Corpus::build({rec, rec}, 100, 2, 1);
  std::vector<std::size_t> all = {0, 1};
  auto fb = fit_feature_bins(corpus, all, 5);
  auto f = epoch_features(corpus.episodes()[0], fb, 100, 0, 1);
  int nonzero_bins = 0;
  for (int b = 0; b < 5; ++b) {
    if (f[2 * 5 + b] > 0.0) ++nonzero_bins;
  }
  CHECK(nonzero_bins == 1);
}

TEST_CASE("insufficient history raises") {
  Corpus corpus = small_corpus(2);
  std::vector<std::size_t> all;
  for (std::size_t e = 0; e < corpus.episodes().size(); ++e) all.push_back(e);
  auto fb = fit_feature_bins(corpus, all, 5);
  const auto& rec = corpus.episodes()[0];  // 20 s -> 10 epochs
  CHECK_NOTHROW(epoch_features(rec, fb, 100, 2, 8));
  try {
    epoch_features(rec, fb, 100, 3, 8);
    FAIL("expected InsufficientHistory");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientHistory);
  }
}

TEST_CASE("fold plan is stratified by episode") {
  Corpus corpus = small_corpus(4);
  // every ground (and gait) appears in every fold
  for (int fold = 0; fold < corpus.folds(); ++fold) {
    std::set<std::string> grounds, gaits;
    for (std::size_t e = 0; e < corpus.episodes().size(); ++e) {
      if (corpus.fold_of(e) == fold) {
        grounds.insert(corpus.episodes()[e].meta().ground);
        gaits.insert(corpus.episodes()[e].meta().gait);
      }
    }
    CHECK(grounds.size() == 3);
    CHECK(gaits.size() == 3);
  }
}

TEST_CASE("per-gait training builds one sub-model per gait") {
  Corpus corpus = small_corpus(2);
  Model model = train(corpus, ClassifyMode::PerGait);
  CHECK(model.per_gait.size() == 3);
  CHECK(!model.single_class);
  // routing by an unknown gait label fails loudly
  CHECK_THROWS_AS(model.sub_model("moonwalk"), Error);
}

TEST_CASE("single-class corpus always answers that class") {
  std::vector<Recording> eps;
  for (int i = 0; i < 4; ++i) {
    SimConfig cfg;
    cfg.gait = make_gait("bound-right");
    cfg.ground = make_ground("rubber");
    cfg.duration_s = 20.0;
    cfg.seed = 900 + i;
    eps.push_back(run_episode(cfg));
  }
  Corpus corpus = Corpus::build(std::move(eps), 100, 2, 3);
  Model model = train(corpus, ClassifyMode::Pooled);
  CHECK(model.single_class);
  std::size_t correct = 0, total = 0;
  for (const auto& rec : corpus.episodes()) {
    for (std::size_t i = 0; i < rec.rows() / 100; ++i) {
      correct += model.predict(rec, i) == "rubber" ? 1 : 0;
      ++total;
    }
  }
  CHECK(correct == total);
  // evaluation, however, needs at least two labels
  CHECK_THROWS_AS(evaluate(corpus, ClassifyMode::Pooled, {1}), Error);
}

TEST_CASE("evaluate report shape, determinism and the best >= mean rule") {
  Corpus corpus = small_corpus(4);
  auto report = evaluate(corpus, ClassifyMode::PerGait, {1, 2, 4});
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(row.mode == "per-gait");
    CHECK(row.best_acc >= row.mean_acc);
    CHECK(row.mean_acc >= 0.0);
    CHECK(row.best_acc <= 1.0);
    CHECK(row.per_gait_acc.size() == 3);
    CHECK(row.per_fold_acc.size() == 4);
    CHECK(row.n_test > 0);
    CHECK(row.per_gait_acc.count(row.best_gait) == 1);
  }
  CHECK(report.rows[0].history_n == 1);
  CHECK(report.rows[2].history_n == 4);
  CHECK(report.rows[2].n_test < report.rows[0].n_test);  // longer histories, fewer windows

  auto again = evaluate(corpus, ClassifyMode::PerGait, {1, 2, 4});
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].mean_acc == again.rows[i].mean_acc);
    CHECK(report.rows[i].best_acc == again.rows[i].best_acc);
  }
}

TEST_CASE("pooled evaluation still reports per-gait accuracies") {
  Corpus corpus = small_corpus(3);
  auto report = evaluate(corpus, ClassifyMode::Pooled, {1});
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].mode == "pooled");
  CHECK(report.rows[0].per_gait_acc.size() == 3);
}

TEST_CASE("label shuffling drives accuracy to chance") {
  Corpus corpus = small_corpus(4);
  auto shuffled = corpus.with_shuffled_labels(42);
  // labels moved but the label multiset is preserved
  std::multiset<std::string> before, after;
  for (const auto& rec : corpus.episodes()) before.insert(rec.meta().ground);
  for (const auto& rec : shuffled.episodes()) after.insert(rec.meta().ground);
  CHECK(before == after);
  auto report = evaluate(shuffled, ClassifyMode::PerGait, {1});
  CHECK(report.rows[0].mean_acc < 0.55);  // small corpus, loose bound around 1/3
}

TEST_CASE("accuracy report CSV layout") {
  Corpus corpus = small_corpus(2);
  auto report = evaluate(corpus, ClassifyMode::PerGait, {1});
  const std::string csv = accuracy_report_to_csv(report, "hash=1");
  CHECK(csv.find("# hash=1\n") == 0);
  CHECK(csv.find("mode,history_n,mean_acc,best_acc,best_gait,n_test\n") != std::string::npos);
  CHECK(csv.find("per-gait,1,") != std::string::npos);
}
