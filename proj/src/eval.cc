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

#include "echo2depth/eval.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace echo2depth::eval {
namespace fs = std::filesystem;
using training::Target;
using training::TrainConfig;
using nn::Tensor;

namespace {

std::string format_l1(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

MetricsRow describe(const TrainConfig& c, data::Split split) {
  MetricsRow row;
  row.regime = training::name(c.regime);
  row.representation = models::name(c.model.representation);
  row.fusion = c.model.representation == models::Representation::kWaveform
                   ? models::name(c.model.fusion)
                   : "early";
  row.generator = models::name(c.model.generator);
  if (c.model.representation == models::Representation::kSpectrogram)
    row.generator += "-f" + std::to_string(c.model.frequency_bins);
  row.resolution = c.model.resolution;
  row.target = training::name(c.target);
  row.split = data::split_name(split);
  return row;
}

MetricsRow baseline_row(const char* kind, Target target, int resolution,
                        data::Split split) {
  MetricsRow row;
  row.regime = "baseline";
  row.representation = "none";
  row.fusion = "none";
  row.generator = kind;
  row.resolution = resolution;
  row.target = training::name(target);
  row.split = data::split_name(split);
  return row;
}

TrainConfig config_from_checkpoint(const nn::Checkpoint& ckpt) {
  TrainConfig c = training::read_train_config(KeyValueFile::parse(ckpt.config));
  // The generator weights are already in the archive.
  c.warm_start.clear();
  return c;
}

int dataset_resolution(const data::Manifest& manifest) { return manifest.resolution; }

void check_servable(int dataset_res, int model_res) {
  require(dataset_res >= model_res && dataset_res % model_res == 0,
          ErrorCode::kInvalidArgument,
          "checkpoint resolution " + std::to_string(model_res) +
              " does not match dataset resolution " + std::to_string(dataset_res));
}

}  // namespace

std::string to_csv(const MetricsRow& r) {
  std::ostringstream out;
  out << r.regime << ',' << r.representation << ',' << r.fusion << ',' << r.generator
      << ',' << r.resolution << ',' << r.target << ',' << r.split << ','
      << format_l1(r.l1) << ',' << r.n_samples;
  return out.str();
}

void write_metrics_csv(std::span<const MetricsRow> rows, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << kMetricsHeader << '\n';
  for (const MetricsRow& r : rows) out << to_csv(r) << '\n';
  require(static_cast<bool>(out), ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<MetricsRow> read_metrics_csv(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kNotFound, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  require(line == kMetricsHeader, ErrorCode::kCorrupt,
          path.string() + ": unexpected metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    require(f.size() == 9, ErrorCode::kCorrupt, path.string() + ": malformed row");
    MetricsRow r{f[0], f[1], f[2], f[3], std::stoi(f[4]), f[5], f[6], std::stod(f[7]),
                 static_cast<std::size_t>(std::stoull(f[8]))};
    rows.push_back(std::move(r));
  }
  return rows;
}

MetricsRow evaluate_model(training::Trainer& trainer,
                          std::span<const data::SampleRecord> records,
                          data::Split split) {
  MetricsRow row = describe(trainer.config(), split);
  row.l1 = training::evaluate_l1(trainer, records);
  row.n_samples = records.size();
  return row;
}

MetricsRow evaluate_mean_baseline(std::span<const data::SampleRecord> train_split,
                                  std::span<const data::SampleRecord> records,
                                  Target target, int resolution, data::Split split) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "nothing to evaluate");
  const signal::SquareImage mean = training::baseline_mean(train_split, target, resolution);
  double sum = 0;
  for (const auto& r : records)
    sum += training::mean_abs_error(mean, training::target_image(r, target, resolution));
  MetricsRow row = baseline_row("mean", target, resolution, split);
  row.l1 = sum / static_cast<double>(records.size());
  row.n_samples = records.size();
  return row;
}

MetricsRow evaluate_random_baseline(std::span<const data::SampleRecord> records,
                                    Target target, int resolution, data::Split split,
                                    std::uint64_t seed) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "nothing to evaluate");
  std::mt19937_64 rng(seed);
  double sum = 0;
  for (const auto& r : records) {
    const signal::SquareImage noise = training::baseline_random(resolution, rng);
    sum += training::mean_abs_error(noise, training::target_image(r, target, resolution));
  }
  MetricsRow row = baseline_row("random", target, resolution, split);
  row.l1 = sum / static_cast<double>(records.size());
  row.n_samples = records.size();
  return row;
}

Evaluation evaluate(const fs::path& checkpoint, const fs::path& data_root,
                    data::Split split, std::uint64_t noise_seed) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(checkpoint);
  const TrainConfig config = config_from_checkpoint(ckpt);
  const data::Manifest manifest = data::read_manifest(data_root);
  require(!manifest.ids_for(split).empty(), ErrorCode::kNotFound,
          std::string("split ") + data::split_name(split) + " is empty in " +
              data_root.string());
  const int res = config.model.resolution;
  check_servable(dataset_resolution(manifest), res);

  training::Trainer trainer(config);
  trainer.load(ckpt);
  const auto records = data::read_dataset(data_root, split);
  const auto train_records = data::read_dataset(data_root, data::Split::kTrain);

  Evaluation e;
  e.model = evaluate_model(trainer, records, split);
  e.mean_baseline =
      evaluate_mean_baseline(train_records, records, config.target, res, split);
  e.random_baseline =
      evaluate_random_baseline(records, config.target, res, split, noise_seed);
  std::vector<signal::SquareImage> targets;
  for (const auto& r : records) targets.push_back(training::target_image(r, config.target, res));
  e.random_expectation = training::random_baseline_expectation(targets);
  return e;
}

// -------------------------------------------------------------------- grid

GridConfig read_grid_config(const KeyValueFile& in) {
  GridConfig g;
  const std::string mode = in.get_or("mode", "architectures");
  if (mode == "architectures") {
    g.mode = GridMode::kArchitectures;
  } else if (mode == "resolutions") {
    g.mode = GridMode::kResolutions;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown grid mode '" + mode + "'");
  }
  g.data_root = in.get("data");
  g.out_dir = in.get("out");
  g.base = training::read_train_config(in);
  if (in.has("resolutions")) {
    g.resolutions.clear();
    for (double r : parse_numbers(in.get("resolutions")))
      g.resolutions.push_back(static_cast<int>(r));
  }
  g.noise_seed = in.has("noise_seed") ? in.get_uint("noise_seed") : g.base.seed;
  return g;
}

std::vector<TrainConfig> grid_cells(const GridConfig& grid) {
  using models::Fusion;
  using models::GeneratorKind;
  using models::ModelConfig;
  using models::Representation;
  using training::Regime;

  auto make = [&](Regime regime, Target target, ModelConfig model) {
    TrainConfig c = TrainConfig::defaults(regime);
    c.target = target;
    c.model = model;
    c.model.log_spectrogram = grid.base.model.log_spectrogram;
    c.batch_size = grid.base.batch_size;
    c.epochs = grid.base.epochs;
    c.max_steps = grid.base.max_steps;
    c.seed = grid.base.seed;
    c.lambda = grid.base.lambda;
    c.jitter = grid.base.jitter;
    training::validate(c);
    return c;
  };

  std::vector<TrainConfig> cells;
  if (grid.mode == GridMode::kArchitectures) {
    for (Fusion f : {Fusion::kEarly, Fusion::kLate})
      for (GeneratorKind g : {GeneratorKind::kUnet, GeneratorKind::kDirect})
        cells.push_back(make(Regime::kGenOnly, Target::kDepth,
                             {Representation::kWaveform, f, g, 16, 1, false, false}));
    for (int bins : {1, 10})
      for (GeneratorKind g : {GeneratorKind::kUnet, GeneratorKind::kDirect})
        cells.push_back(make(Regime::kGenOnly, Target::kDepth,
                             {Representation::kSpectrogram, Fusion::kEarly, g, 16, bins,
                              false, false}));
    return cells;
  }
  const ModelConfig best[] = {
      {Representation::kWaveform, Fusion::kEarly, GeneratorKind::kDirect, 0, 1, false,
       false},
      {Representation::kSpectrogram, Fusion::kEarly, GeneratorKind::kUnet, 0, 10, false,
       false}};
  const std::pair<Regime, Target> rows[] = {{Regime::kGenOnly, Target::kDepth},
                                            {Regime::kGan, Target::kDepth},
                                            {Regime::kGan, Target::kGray}};
  for (const ModelConfig& m : best)
    for (int res : grid.resolutions)
      for (const auto& [regime, target] : rows) {
        ModelConfig model = m;
        model.resolution = res;
        cells.push_back(make(regime, target, model));
      }
  return cells;
}

std::vector<MetricsRow> run_ablation_grid(const GridConfig& grid) {
  const std::vector<TrainConfig> cells = grid_cells(grid);
  const data::Manifest manifest = data::read_manifest(grid.data_root);
  for (const auto& c : cells) check_servable(manifest.resolution, c.model.resolution);
  const auto train_split = data::read_dataset(grid.data_root, data::Split::kTrain);
  const auto val_split = data::read_dataset(grid.data_root, data::Split::kVal);
  const auto test_split = data::read_dataset(grid.data_root, data::Split::kTest);
  require(!test_split.empty(), ErrorCode::kNotFound, "grid needs a test split");

  std::vector<MetricsRow> rows;
  std::vector<std::pair<int, Target>> baselines;
  for (const TrainConfig& c : cells) {
    const std::string cell = c.model.label() + "-" + training::name(c.regime) + "-" +
                             training::name(c.target);
    spdlog::info("grid cell {}", cell);
    const auto result =
        training::train(c, train_split, val_split, grid.out_dir / "cells" / cell);
    training::Trainer trainer(c);
    trainer.load(nn::load_checkpoint(result.checkpoint));
    rows.push_back(evaluate_model(trainer, test_split, data::Split::kTest));
    const std::pair<int, Target> key{c.model.resolution, c.target};
    if (std::find(baselines.begin(), baselines.end(), key) == baselines.end())
      baselines.push_back(key);
  }
  for (const auto& [res, target] : baselines) {
    rows.push_back(evaluate_mean_baseline(train_split, test_split, target, res,
                                          data::Split::kTest));
    rows.push_back(evaluate_random_baseline(test_split, target, res, data::Split::kTest,
                                            grid.noise_seed));
  }
  write_metrics_csv(rows, grid.out_dir / "ablation.csv");
  return rows;
}

// ----------------------------------------------------------------- figures

Panel compose_panel(std::span<const PanelRow> rows, int gutter) {
  require(!rows.empty(), ErrorCode::kInvalidArgument, "no rows to draw");
  require(gutter >= 0, ErrorCode::kInvalidArgument, "negative gutter");
  const int res = rows.front().gt_depth.resolution;
  constexpr int kColumns = 4;
  Panel p;
  p.width = kColumns * res + (kColumns - 1) * gutter;
  p.height = static_cast<int>(rows.size()) * res +
             (static_cast<int>(rows.size()) - 1) * gutter;
  p.pixels.assign(static_cast<std::size_t>(p.width) * p.height, 1.0f);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const signal::SquareImage* cells[kColumns] = {&rows[r].gt_depth, &rows[r].pred_depth,
                                                  &rows[r].gt_gray, &rows[r].pred_gray};
    for (int c = 0; c < kColumns; ++c) {
      require(cells[c]->resolution == res, ErrorCode::kInvalidArgument,
              "panel images must share one resolution");
      const int y0 = static_cast<int>(r) * (res + gutter);
      const int x0 = c * (res + gutter);
      for (int y = 0; y < res; ++y)
        for (int x = 0; x < res; ++x)
          p.pixels[static_cast<std::size_t>(y0 + y) * p.width + x0 + x] =
              std::clamp(cells[c]->at(y, x), 0.0f, 1.0f);
    }
  }
  return p;
}

fs::path export_figures(const fs::path& depth_checkpoint,
                        const std::optional<fs::path>& gray_checkpoint,
                        const fs::path& data_root, const fs::path& out_dir,
                        const FigureOptions& options) {
  require(options.count >= 1, ErrorCode::kInvalidArgument, "count must be >= 1");
  const data::Manifest manifest = data::read_manifest(data_root);
  data::SplitReader reader(data_root, options.split);
  require(reader.size() > 0, ErrorCode::kNotFound, "split has no samples");
  const std::size_t n = std::min<std::size_t>(options.count, reader.size());
  std::vector<data::SampleRecord> records;
  for (std::size_t i = 0; i < n; ++i) records.push_back(reader.read(i));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  auto predict = [&](const fs::path& path, Target expected, int& res) {
    const nn::Checkpoint ckpt = nn::load_checkpoint(path);
    const TrainConfig config = config_from_checkpoint(ckpt);
    require(config.target == expected, ErrorCode::kInvalidArgument,
            path.string() + " predicts " + training::name(config.target) + ", expected " +
                training::name(expected));
    check_servable(manifest.resolution, config.model.resolution);
    res = config.model.resolution;
    training::Trainer trainer(config);
    trainer.load(ckpt);
    const training::Batch batch = training::make_batch(records, idx, config, nullptr);
    return trainer.predict(batch.input);
  };

  int res = 0;
  const Tensor<float> depth_pred = predict(depth_checkpoint, Target::kDepth, res);
  Tensor<float> gray_pred;
  if (gray_checkpoint) {
    int gray_res = 0;
    gray_pred = predict(*gray_checkpoint, Target::kGray, gray_res);
    require(gray_res == res, ErrorCode::kInvalidArgument,
            "depth and gray checkpoints differ in resolution");
  }

  const std::size_t per = static_cast<std::size_t>(res) * res;
  auto slice = [&](const Tensor<float>& t, std::size_t i) {
    signal::SquareImage im;
    im.resolution = res;
    if (t.empty()) {
      im.pixels.assign(per, 1.0f);
    } else {
      im.pixels.assign(t.data() + i * per, t.data() + (i + 1) * per);
    }
    return im;
  };
  std::vector<PanelRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({training::target_image(records[i], Target::kDepth, res),
                    slice(depth_pred, i),
                    training::target_image(records[i], Target::kGray, res),
                    slice(gray_pred, i)});
  }
  const Panel panel = compose_panel(rows, options.gutter);
  fs::create_directories(out_dir);
  const fs::path path = out_dir / ("panel_" + std::string(data::split_name(options.split)) +
                                   "_" + std::to_string(res) + ".pgm");
  data::write_pgm16(panel.pixels, panel.width, panel.height, path);
  return path;
}

}  // namespace echo2depth::eval
