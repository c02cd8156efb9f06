#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include "smflow/recording.hpp"
#include "smflow/recording_io.hpp"
#include "smflow/rng.hpp"

using namespace smflow;

namespace {

std::vector<std::vector<double>> random_channels(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> data(kNumChannels);
  for (int c = 0; c < kNumChannels; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      double v = rng.uniform(-2.0, 2.0);
      if (channel_at(c).kind == ChannelKind::Pressure) v = std::fabs(v);
      data[c].push_back(v);
    }
  }
  return data;
}

RecordingMeta test_meta() {
  RecordingMeta meta;
  meta.gait = "bound-right";
  meta.ground = "foil";
  meta.seed = 42;
  return meta;
}

}  // namespace

TEST_CASE("build_recording computes duration from rows and dt") {
  auto rec = build_recording(random_channels(500, 1), 0.02, test_meta());
  CHECK(rec.rows() == 500);
  CHECK(rec.duration_s() == doctest::Approx(10.0));
  CHECK(rec.meta().gait == "bound-right");
}

TEST_CASE("build_recording rejects bad input") {
  auto data = random_channels(500, 2);
  data.pop_back();
  CHECK_THROWS_AS(build_recording(data, 0.02, test_meta()), Error);

  data = random_channels(500, 3);
  data[7].pop_back();
  try {
    build_recording(data, 0.02, test_meta());
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LengthMismatch);
  }

  try {
    build_recording(random_channels(500, 4), 0.0, test_meta());
    FAIL("expected NonPositiveDt");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveDt);
  }
}

TEST_CASE("slice_epochs tiles without overlap when stride equals length") {
  auto rec = build_recording(random_channels(500, 5), 0.02, test_meta());
  auto epochs = slice_epochs(rec, 100, 100);
  REQUIRE(epochs.size() == 5);
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    CHECK(epochs[i].start_index == i * 100);
    CHECK(epochs[i].length == 100);
    CHECK(epochs[i].label == "foil");
    CHECK(epochs[i].gait == "bound-right");
  }
}

TEST_CASE("slice_epochs with overlap and trailing partial window") {
  auto rec = build_recording(random_channels(500, 6), 0.02, test_meta());
  CHECK(slice_epochs(rec, 100, 50).size() == 9);

  auto rec_short = build_recording(random_channels(50, 7), 0.02, test_meta());
  try {
    slice_epochs(rec_short, 100, 100);
    FAIL("expected EpochTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EpochTooLong);
  }
}

TEST_CASE("slice_epochs partitions the prefix exactly") {
  auto rec = build_recording(random_channels(537, 8), 0.02, test_meta());
  const std::size_t len = 100;
  auto epochs = slice_epochs(rec, len, len);
  CHECK(epochs.size() == 537 / len);
  std::size_t covered = 0;
  for (const auto& e : epochs) {
    CHECK(e.start_index == covered);
    covered += e.length;
  }
  CHECK(covered == (537 / len) * len);
}

TEST_CASE("recording CSV and sidecar round trip is bit exact") {
  auto rec = build_recording(random_channels(64, 9), 0.02, test_meta());

  auto dir = std::filesystem::temp_directory_path() / "smflow_test_rec";
  std::filesystem::create_directories(dir);
  auto csv = dir / "roundtrip.csv";
  save_recording(rec, csv);
  CHECK(std::filesystem::exists(dir / "roundtrip.meta.json"));

  Recording loaded = load_recording(csv);
  REQUIRE(loaded.rows() == rec.rows());
  CHECK(loaded.meta() == rec.meta());
  for (int c = 0; c < kNumChannels; ++c) {
    for (std::size_t r = 0; r < rec.rows(); ++r) {
      CHECK(loaded.column(c)[r] == rec.column(c)[r]);  // exact, not approximate
    }
  }
  CHECK(to_csv(loaded) == to_csv(rec));
  std::filesystem::remove_all(dir);
}

TEST_CASE("load_recording on a missing file raises IoError") {
  try {
    load_recording("/nonexistent/never/here.csv");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
  }
}
