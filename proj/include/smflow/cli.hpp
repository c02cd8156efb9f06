#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smflow/classify.hpp"
#include "smflow/config.hpp"
#include "smflow/flow.hpp"
#include "smflow/flow_io.hpp"
#include "smflow/recording_io.hpp"
#include "smflow/sim.hpp"
#include "smflow/tracking.hpp"
#include "smflow/version.hpp"

namespace smflow::cli {

// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 numerical
// error. Outputs are written atomically (temp file + rename) and every
// output embeds the config hash and tool version, so a rerun with the same
// flags and seeds is byte-identical and interrupted runs leave no partial
// files behind.

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline Discretization parse_discretization(const std::string& name) {
  if (name == "equal-frequency") return Discretization::EqualFrequency;
  if (name == "equal-width") return Discretization::EqualWidth;
  raise(Errc::InvalidConfig, "unknown discretization '" + name + "'");
}

inline std::string stamp(const ExperimentConfig& cfg) {
  return std::string("config_hash=") + cfg.hash() + " tool=" + kToolName + "/" + kToolVersion;
}

inline SimConfig sim_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  SimConfig sim;
  sim.gait = make_gait(cfg.sim.gait);
  sim.ground = make_ground(cfg.sim.ground);
  sim.duration_s = cfg.sim.duration_s;
  sim.dt = cfg.sim.dt;
  sim.seed = seed;
  return sim;
}

inline TeConfig te_config(const ExperimentConfig& cfg) {
  TeConfig te;
  te.bins = cfg.te.bins;
  te.history_k = cfg.te.history_k;
  te.lag = cfg.te.lag;
  te.discretization = parse_discretization(cfg.te.discretization);
  return te;
}

// The standard corpus: every (gait, ground) cell simulated episodes_per_cell
// times, episode seeds drawn from named substreams of the root seed.
inline Corpus standard_corpus(const ExperimentConfig& cfg) {
  std::vector<Recording> episodes;
  for (const char* gait : {"babble", "turn-left", "bound-right"}) {
    for (const char* ground : {"foil", "styrofoam", "rubber"}) {
      for (int i = 0; i < cfg.classify.episodes_per_cell; ++i) {
        SimConfig sim;
        sim.gait = make_gait(gait);
        sim.ground = make_ground(ground);
        sim.duration_s = cfg.classify.episode_s;
        sim.dt = cfg.sim.dt;
        sim.seed = Rng::substream(cfg.seed, std::string("corpus/") + gait + "/" + ground + "/" +
                                                std::to_string(i))
                       .next_u64();
        episodes.push_back(run_episode(sim));
      }
    }
  }
  return Corpus::build(std::move(episodes), kDefaultEpochLen, cfg.classify.folds,
                       Rng::substream(cfg.seed, "corpus/folds").next_u64());
}

inline Corpus corpus_from_dir(const std::filesystem::path& dir, int folds,
                              std::uint64_t fold_seed) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) raise(Errc::IoError, "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) raise(Errc::IoError, "no recording CSVs in '" + dir.string() + "'");
  std::vector<Recording> episodes;
  for (const auto& file : files) episodes.push_back(load_recording(file));
  return Corpus::build(std::move(episodes), kDefaultEpochLen, folds, fold_seed);
}

inline AccuracyReport panel_report(const Corpus& corpus, const ExperimentConfig& cfg) {
  AccuracyReport report;
  auto pooled = evaluate(corpus, ClassifyMode::Pooled, {1}, cfg.classify.bins);
  auto per_gait = evaluate(corpus, ClassifyMode::PerGait, cfg.classify.histories,
                           cfg.classify.bins);
  report.rows = pooled.rows;
  report.rows.insert(report.rows.end(), per_gait.rows.begin(), per_gait.rows.end());
  return report;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args) {
  CLI::App app{"sensorimotor information-flow toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "TOML experiment configuration file")
      ->configurable(false);

  // flags override config-file values, which override built-in defaults
  std::string gait, ground, input, out, dot_path, corpus_dir, mode = "per-gait",
                                                              exclude = "panel-CD";
  std::string histories_csv;
  double duration = -1.0, gain = -1.0, sigma = -1.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int bins = -1, top = -1, n_seeds = -1, steps = -1, folds = -1, surrogates = -1;
  int episodes = -1;
  bool shuffle_labels = false;

  auto* c_sim = app.add_subcommand("simulate", "run one episode and write the recording CSV");
  c_sim->add_option("--gait", gait, "babble | turn-left | bound-right | stand");
  c_sim->add_option("--ground", ground, "foil | styrofoam | rubber");
  c_sim->add_option("--duration", duration, "episode length in seconds");
  c_sim->add_option("--seed", seed, "episode seed")->each([&](const std::string&) {
    seed_given = true;
  });
  c_sim->add_option("--out", out, "output CSV path")->required();

  auto* c_te = app.add_subcommand("te", "transfer-entropy matrix of a recording");
  c_te->add_option("--input", input, "recording CSV")->required();
  c_te->add_option("--bins", bins, "discretization bins");
  c_te->add_option("--out", out, "flow matrix CSV path")->required();

  auto* c_flows = app.add_subcommand("flows", "select top flows and export a DOT graph");
  c_flows->add_option("--input", input, "flow matrix CSV")->required();
  c_flows->add_option("--top", top, "number of flows to keep");
  c_flows->add_option("--exclude", exclude, "panel-CD | none");
  c_flows->add_option("--dot", dot_path, "output DOT path")->required();

  auto* c_classify = app.add_subcommand("classify", "terrain classification report");
  c_classify->add_option("--corpus", corpus_dir, "directory of recording CSVs")->required();
  c_classify->add_option("--mode", mode, "pooled | per-gait");
  c_classify->add_option("--history", histories_csv, "comma-separated history lengths");
  c_classify->add_option("--folds", folds, "cross-validation folds");
  c_classify->add_option("--seed", seed, "fold seed")->each([&](const std::string&) {
    seed_given = true;
  });
  c_classify->add_flag("--shuffle-labels", shuffle_labels, "permutation control");
  c_classify->add_option("--out", out, "accuracy report CSV path")->required();

  auto* c_track = app.add_subcommand("track-demo", "visual-entropy tracking comparison");
  c_track->add_option("--seeds", n_seeds, "number of paired runs");
  c_track->add_option("--steps", steps, "steps per run");
  c_track->add_option("--gain", gain, "closed-loop tracking gain");
  c_track->add_option("--sigma", sigma, "random-walk sigma");
  c_track->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    seed_given = true;
  });
  c_track->add_option("--out", out, "output CSV path")->required();

  auto* c_box1 = app.add_subcommand("reproduce-box1",
                                    "full standard-corpus pipeline: flow panels + accuracy report");
  c_box1->add_option("--out", out, "output directory")->required();
  c_box1->add_option("--seed", seed, "root seed")->each([&](const std::string&) {
    seed_given = true;
  });
  c_box1->add_option("--episodes", episodes, "episodes per (gait, ground) cell")
      ->check(CLI::PositiveNumber);
  c_box1->add_option("--surrogates", surrogates, "surrogates per pair (0 disables)");

  std::vector<std::string> argv_storage;
  argv_storage.push_back(kToolName);
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_experiment_config(config_path);
    if (seed_given) cfg.seed = seed;

    if (c_sim->parsed()) {
      if (!gait.empty()) cfg.sim.gait = gait;
      if (!ground.empty()) cfg.sim.ground = ground;
      if (duration > 0.0) cfg.sim.duration_s = duration;
      Recording rec = run_episode(detail::sim_config(cfg, cfg.seed));
      SidecarExtras extras{cfg.hash(), std::string(kToolName) + "/" + kToolVersion};
      save_recording(rec, out, &extras);
      return kExitOk;
    }

    if (c_te->parsed()) {
      if (bins > 0) cfg.te.bins = bins;
      Recording rec = load_recording(input);
      FlowMatrix fm = te_matrix(rec, detail::te_config(cfg));
      write_file_atomic(out, flow_matrix_to_csv(fm, detail::stamp(cfg)));
      return kExitOk;
    }

    if (c_flows->parsed()) {
      if (top > 0) cfg.te.top_flows = top;
      FlowMatrix fm = flow_matrix_from_csv(read_file(input));
      std::vector<ExcludePattern> patterns;
      if (exclude == "panel-CD") {
        patterns = panel_cd_exclusions();
      } else if (exclude != "none") {
        raise(Errc::InvalidConfig, "unknown exclusion preset '" + exclude + "'");
      }
      auto flows = select_flows(fm, static_cast<std::size_t>(cfg.te.top_flows), patterns);
      write_file_atomic(dot_path, export_dot(flows, {}, detail::stamp(cfg)));
      return kExitOk;
    }

    if (c_classify->parsed()) {
      if (folds > 0) cfg.classify.folds = folds;
      if (!histories_csv.empty()) {
        cfg.classify.histories.clear();
        for (auto field : split(histories_csv, ',')) {
          cfg.classify.histories.push_back(static_cast<int>(parse_double(trim(field))));
        }
      }
      Corpus corpus = detail::corpus_from_dir(corpus_dir, cfg.classify.folds,
                                              Rng::substream(cfg.seed, "corpus/folds").next_u64());
      if (shuffle_labels) {
        corpus = corpus.with_shuffled_labels(Rng::substream(cfg.seed, "corpus/shuffle").next_u64());
      }
      const ClassifyMode cmode = mode == "pooled" ? ClassifyMode::Pooled : ClassifyMode::PerGait;
      if (mode != "pooled" && mode != "per-gait") {
        raise(Errc::InvalidConfig, "unknown mode '" + mode + "'");
      }
      auto report = evaluate(corpus, cmode, cfg.classify.histories, cfg.classify.bins);
      write_file_atomic(out, accuracy_report_to_csv(report, detail::stamp(cfg)));
      return kExitOk;
    }

    if (c_track->parsed()) {
      if (n_seeds > 0) cfg.tracking.seeds = n_seeds;
      if (steps > 0) cfg.tracking.steps = steps;
      if (gain >= 0.0) cfg.tracking.gain = gain;
      if (sigma >= 0.0) cfg.tracking.walk_sigma = sigma;
      std::vector<std::pair<std::uint64_t, EntropyComparison>> rows;
      for (int i = 0; i < cfg.tracking.seeds; ++i) {
        TrackingConfig tc;
        tc.steps = static_cast<std::size_t>(cfg.tracking.steps);
        tc.motion = RandomWalkMotion{cfg.tracking.walk_sigma};
        tc.gain = cfg.tracking.gain;
        tc.visual_bins = cfg.tracking.visual_bins;
        tc.seed = Rng::substream(cfg.seed, "track/run/" + std::to_string(i)).next_u64();
        rows.emplace_back(tc.seed, entropy_comparison(tc));
      }
      write_file_atomic(out, tracking_csv(rows, detail::stamp(cfg)));
      return kExitOk;
    }

    if (c_box1->parsed()) {
      if (episodes > 0) cfg.classify.episodes_per_cell = episodes;
      if (surrogates >= 0) cfg.te.surrogates = surrogates;
      const std::filesystem::path dir = out;
      const TeConfig te = detail::te_config(cfg);

      // one flow panel per (gait, ground): the first corpus episode of the
      // cell, top flows with the panel-CD exclusion
      for (const char* g : {"babble", "turn-left", "bound-right"}) {
        for (const char* gr : {"foil", "styrofoam", "rubber"}) {
          SimConfig sim;
          sim.gait = make_gait(g);
          sim.ground = make_ground(gr);
          sim.duration_s = cfg.classify.episode_s;
          sim.dt = cfg.sim.dt;
          sim.seed = Rng::substream(cfg.seed, std::string("corpus/") + g + "/" + gr + "/0")
                         .next_u64();
          Recording rec = run_episode(sim);
          FlowMatrix fm = te_matrix(rec, te);
          std::unique_ptr<BaselineMatrix> baselines;
          if (cfg.te.surrogates >= 20) {
            baselines = std::make_unique<BaselineMatrix>(surrogate_baselines(
                rec, te, cfg.te.surrogates,
                Rng::substream(cfg.seed, std::string("surrogate/") + g + "/" + gr).next_u64()));
          }
          auto flows = select_flows(fm, static_cast<std::size_t>(cfg.te.top_flows),
                                    panel_cd_exclusions(), baselines.get());
          const std::string name = std::string("panel_") + g + "_" + gr;
          write_file_atomic(dir / (name + ".dot"),
                            export_dot(flows, {}, detail::stamp(cfg) + " " + name));
          write_file_atomic(dir / (name + ".csv"),
                            flow_matrix_to_csv(fm, detail::stamp(cfg) + " " + name));
        }
      }

      Corpus corpus = detail::standard_corpus(cfg);
      auto report = detail::panel_report(corpus, cfg);
      write_file_atomic(dir / "panelG.csv", accuracy_report_to_csv(report, detail::stamp(cfg)));
      return kExitOk;
    }

    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == Errc::NumericalBlowup ? kExitNumerical : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace smflow::cli
