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

#ifndef ECHO2DEPTH_EVAL_H_
#define ECHO2DEPTH_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "echo2depth/dataset_store.h"
#include "echo2depth/training.h"

namespace echo2depth::eval {

// One line of a metrics CSV.
struct MetricsRow {
  std::string regime;          // gen_only | gan | baseline
  std::string representation;  // waveform | spectrogram | none
  std::string fusion;          // early | late | none
  std::string generator;       // unet | direct | mean | random
  int resolution = 0;
  std::string target;  // depth | gray
  std::string split;
  double l1 = 0.0;
  std::size_t n_samples = 0;
};

inline constexpr const char* kMetricsHeader =
    "regime,representation,fusion,generator,resolution,target,split,l1,n_samples";

std::string to_csv(const MetricsRow& row);
void write_metrics_csv(std::span<const MetricsRow> rows,
                       const std::filesystem::path& path);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

MetricsRow evaluate_model(training::Trainer& trainer,
                          std::span<const data::SampleRecord> records,
                          data::Split split);
MetricsRow evaluate_mean_baseline(std::span<const data::SampleRecord> train_split,
                                  std::span<const data::SampleRecord> records,
                                  training::Target target, int resolution,
                                  data::Split split);
// Each record is scored against a fresh U[0, 1) image.
MetricsRow evaluate_random_baseline(std::span<const data::SampleRecord> records,
                                    training::Target target, int resolution,
                                    data::Split split, std::uint64_t seed);

struct Evaluation {
  MetricsRow model;
  MetricsRow mean_baseline;
  MetricsRow random_baseline;
  double random_expectation = 0.0;  // closed form against the split's targets

  std::vector<MetricsRow> rows() const { return {model, mean_baseline, random_baseline}; }
};

// Loads the checkpoint, checks that the dataset can serve its resolution and
// scores the split in inference mode without jitter. Baselines use the train
// split of the same dataset.
Evaluation evaluate(const std::filesystem::path& checkpoint,
                    const std::filesystem::path& data_root,
                    data::Split split = data::Split::kTest,
                    std::uint64_t noise_seed = 0);

enum class GridMode { kArchitectures, kResolutions };

struct GridConfig {
  GridMode mode = GridMode::kArchitectures;
  std::filesystem::path data_root;
  std::filesystem::path out_dir;
  training::TrainConfig base;  // regime/model fields are overridden per cell
  std::vector<int> resolutions = {32, 64, 128};  // resolutions mode only
  std::uint64_t noise_seed = 0;
};

// Keys: mode (architectures | resolutions), data, out, resolutions, noise_seed and any
// training key (epochs, batch_size, max_steps, seed, ...).
GridConfig read_grid_config(const KeyValueFile& in);

// Training configurations of every grid cell, in table order.
std::vector<training::TrainConfig> grid_cells(const GridConfig& grid);

// Trains and evaluates every cell on the test split, appends the two
// baselines per (resolution, target), and writes out_dir/ablation.csv.
std::vector<MetricsRow> run_ablation_grid(const GridConfig& grid);

struct FigureOptions {
  int count = 4;
  int gutter = 2;
  data::Split split = data::Split::kTest;
};

// Writes a panel with one row per sample and the columns ground-truth depth,
// predicted depth, ground-truth gray, predicted gray (blank when no gray
// checkpoint is given). Gutters are white.
std::filesystem::path export_figures(const std::filesystem::path& depth_checkpoint,
                                     const std::optional<std::filesystem::path>&
                                         gray_checkpoint,
                                     const std::filesystem::path& data_root,
                                     const std::filesystem::path& out_dir,
                                     const FigureOptions& options = {});

// Same panel from in-memory images; every image must share one resolution.
struct PanelRow {
  signal::SquareImage gt_depth;
  signal::SquareImage pred_depth;
  signal::SquareImage gt_gray;
  signal::SquareImage pred_gray;
};
struct Panel {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;
};
Panel compose_panel(std::span<const PanelRow> rows, int gutter);

}  // namespace echo2depth::eval

#endif  // ECHO2DEPTH_EVAL_H_
