// Copyright 2026 The echo2depth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: simulate, train, eval, ablate, export-figures.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "echo2depth/dataset_store.h"
#include "echo2depth/error.h"
#include "echo2depth/eval.h"
#include "echo2depth/keyvalue.h"
#include "echo2depth/scene.h"
#include "echo2depth/synthesis.h"
#include "echo2depth/training.h"

namespace fs = std::filesystem;
using namespace echo2depth;

namespace {

// Split counts in the 3950:750:504 proportion of the full dataset.
std::array<int, 3> proportional_counts(int scenes) {
  const double total = 3950.0 + 750.0 + 504.0;
  const int val = static_cast<int>(std::lround(scenes * 750.0 / total));
  const int test = static_cast<int>(std::lround(scenes * 504.0 / total));
  return {scenes - val - test, val, test};
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

int fail(const char* code, const std::string& message) {
  std::cerr << "error: code=" << code << " message=\"" << escape(message) << "\"\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echo2depth: depth from binaural chirp echoes"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "render a synthetic dataset");
  int scenes = 0;
  fs::path sim_out;
  std::uint64_t sim_seed = 0;
  int sim_resolution = 16;
  int max_order = 2;
  double snr_db = 30.0;
  std::optional<int> n_train, n_val, n_test;
  std::optional<fs::path> scene_file;
  std::string scene_split = "test";
  bool force = false;
  simulate->add_option("--scenes", scenes, "number of random scenes")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim_out, "dataset directory")->required();
  simulate->add_option("--seed", sim_seed, "first scene seed");
  simulate->add_option("--resolution", sim_resolution, "image side in pixels");
  simulate->add_option("--max-order", max_order, "image-source reflection order");
  simulate->add_option("--snr-db", snr_db, "recording SNR");
  simulate->add_option("--train", n_train, "explicit train count");
  simulate->add_option("--val", n_val, "explicit val count");
  simulate->add_option("--test", n_test, "explicit test count");
  simulate->add_option("--scene-file", scene_file, "render one scene file instead")
      ->check(CLI::ExistingFile);
  simulate->add_option("--scene-split", scene_split, "split for --scene-file");
  simulate->add_flag("--force", force, "replace an existing dataset");

  // train
  auto* train = app.add_subcommand("train", "train one configuration");
  fs::path train_config;
  std::optional<fs::path> train_out;
  std::optional<fs::path> train_data;
  train->add_option("--config", train_config, "key=value config file")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--data", train_data, "dataset directory (overrides 'data')");
  train->add_option("--out", train_out, "run directory (overrides 'out')");

  // eval
  auto* evaluate = app.add_subcommand("eval", "score a checkpoint");
  fs::path ckpt, eval_data;
  std::optional<fs::path> eval_out;
  std::string eval_split = "test";
  std::uint64_t noise_seed = 0;
  evaluate->add_option("--ckpt", ckpt, "checkpoint")->required();
  evaluate->add_option("--data", eval_data, "dataset directory")->required();
  evaluate->add_option("--split", eval_split, "train, val or test");
  evaluate->add_option("--out", eval_out, "metrics CSV (stdout when omitted)");
  evaluate->add_option("--noise-seed", noise_seed, "seed of the random baseline");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "train and score a grid");
  fs::path grid_file;
  ablate->add_option("--grid", grid_file, "grid config file")
      ->required()
      ->check(CLI::ExistingFile);

  // export-figures
  auto* figures = app.add_subcommand("export-figures", "write prediction panels");
  fs::path fig_depth, fig_data, fig_out;
  std::optional<fs::path> fig_gray;
  eval::FigureOptions fig_options;
  std::string fig_split = "test";
  figures->add_option("--ckpt", fig_depth, "depth checkpoint")->required();
  figures->add_option("--gray-ckpt", fig_gray, "grayscale checkpoint");
  figures->add_option("--data", fig_data, "dataset directory")->required();
  figures->add_option("--out", fig_out, "output directory")->required();
  figures->add_option("--count", fig_options.count, "samples per panel");
  figures->add_option("--gutter", fig_options.gutter, "gutter width in pixels");
  figures->add_option("--split", fig_split, "train, val or test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    return fail("usage", e.what());
  }

  try {
    spdlog::set_level(spdlog::level::from_str(log_level));

    if (*simulate) {
      data::WriteOptions write_options{force};
      if (scene_file) {
        sim::SynthesisOptions options{sim_resolution, max_order, snr_db};
        const sim::RoomScene scene = sim::load_scene(*scene_file);
        auto s = sim::synthesize_sample(scene, options);
        data::SampleRecord record;
        record.id = "scene";
        record.clip = std::move(s.clip);
        record.depth = std::move(s.depth);
        record.gray = std::move(s.gray);
        record.scene_seed = scene.rng_seed;
        record.scene_hash = sim::scene_hash(scene);
        record.split = data::parse_split(scene_split);
        data::write_dataset(std::span(&record, 1), sim_out, write_options);
        spdlog::info("wrote 1 sample to {}", sim_out.string());
        return 0;
      }
      data::GenerationConfig config;
      config.counts = proportional_counts(scenes);
      if (n_train) config.counts[0] = *n_train;
      if (n_val) config.counts[1] = *n_val;
      if (n_test) config.counts[2] = *n_test;
      config.base_seed = sim_seed;
      config.resolution = sim_resolution;
      config.max_order = max_order;
      config.snr_db = snr_db;
      const auto samples = data::generate_samples(config);
      data::write_dataset(samples, sim_out, write_options);
      spdlog::info("wrote {} samples ({} / {} / {}) to {}", samples.size(),
                   config.counts[0], config.counts[1], config.counts[2], sim_out.string());
      return 0;
    }

    if (*train) {
      const KeyValueFile kv = KeyValueFile::load(train_config);
      const training::TrainConfig config = training::read_train_config(kv);
      const fs::path data_root = train_data ? *train_data : fs::path(kv.get("data"));
      const fs::path out = train_out ? *train_out : fs::path(kv.get("out"));
      const auto train_split = data::read_dataset(data_root, data::Split::kTrain);
      const auto val_split = data::read_dataset(data_root, data::Split::kVal);
      const auto result = training::train(config, train_split, val_split, out);
      std::printf("best_epoch=%d best_l1=%.9g checkpoint=%s\n", result.best_epoch,
                  result.best_val_l1, result.checkpoint.string().c_str());
      return 0;
    }

    if (*evaluate) {
      const auto e = eval::evaluate(ckpt, eval_data, data::parse_split(eval_split), noise_seed);
      const auto rows = e.rows();
      if (eval_out) {
        eval::write_metrics_csv(rows, *eval_out);
      } else {
        std::cout << eval::kMetricsHeader << '\n';
        for (const auto& r : rows) std::cout << eval::to_csv(r) << '\n';
      }
      spdlog::info("random baseline expectation {:.6f}", e.random_expectation);
      return 0;
    }

    if (*ablate) {
      const eval::GridConfig grid = eval::read_grid_config(KeyValueFile::load(grid_file));
      const auto rows = eval::run_ablation_grid(grid);
      std::cout << eval::kMetricsHeader << '\n';
      for (const auto& r : rows) std::cout << eval::to_csv(r) << '\n';
      return 0;
    }

    if (*figures) {
      fig_options.split = data::parse_split(fig_split);
      const fs::path panel = eval::export_figures(fig_depth, fig_gray, fig_data, fig_out,
                                                  fig_options);
      std::cout << panel.string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    return fail(error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
