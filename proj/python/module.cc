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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstdint>
#include <string>

#include "echo2depth/dataset_store.h"
#include "echo2depth/error.h"
#include "echo2depth/eval.h"
#include "echo2depth/scene.h"
#include "echo2depth/signal_pipeline.h"
#include "echo2depth/synthesis.h"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace echo2depth;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

FloatArray image_array(const signal::SquareImage& image) {
  FloatArray out({image.resolution, image.resolution});
  std::copy(image.pixels.begin(), image.pixels.end(), out.mutable_data());
  return out;
}

FloatArray clip_array(const signal::BinauralClip& clip) {
  const auto n = static_cast<py::ssize_t>(clip.left.size());
  FloatArray out({py::ssize_t{2}, n});
  std::copy(clip.left.begin(), clip.left.end(), out.mutable_data());
  std::copy(clip.right.begin(), clip.right.end(), out.mutable_data() + n);
  return out;
}

// Rows of a (2, n) array.
std::pair<std::vector<float>, std::vector<float>> split_channels(const FloatArray& a) {
  if (a.ndim() != 2 || a.shape(0) != 2)
    throw Error(ErrorCode::kInvalidArgument, "expected an array of shape (2, n)");
  const auto n = a.shape(1);
  const float* p = a.data();
  return {{p, p + n}, {p + n, p + 2 * n}};
}

py::dict record_dict(const data::SampleRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["audio"] = clip_array(r.clip);
  d["depth"] = image_array(r.depth);
  d["gray"] = image_array(r.gray);
  d["scene_seed"] = r.scene_seed;
  return d;
}

py::dict row_dict(const eval::MetricsRow& r) {
  py::dict d;
  d["regime"] = r.regime;
  d["representation"] = r.representation;
  d["fusion"] = r.fusion;
  d["generator"] = r.generator;
  d["resolution"] = r.resolution;
  d["target"] = r.target;
  d["split"] = r.split;
  d["l1"] = r.l1;
  d["n_samples"] = r.n_samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_echo2depth, m) {
  m.doc() = "Simulation, preprocessing and evaluation for echo2depth.";

  static py::exception<Error> echo_error(m, "EchoError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = echo_error;
      py::object instance = err(e.what());
      instance.attr("code") = error_code_name(e.code());
      PyErr_SetObject(err.ptr(), instance.ptr());
    }
  });

  m.attr("SAMPLE_RATE") = signal::kSampleRate;
  m.attr("CLIP_SAMPLES") = signal::kClipSamples;

  m.def("chirp", [] {
    const auto c = signal::synthesize_chirp();
    FloatArray out(static_cast<py::ssize_t>(c.samples.size()));
    std::copy(c.samples.begin(), c.samples.end(), out.mutable_data());
    return out;
  }, "The emitted 3 ms linear chirp.");

  m.def(
      "simulate",
      [](std::uint64_t seed, int resolution, int max_order, double snr_db) {
        const auto scene = sim::random_scene(seed);
        py::gil_scoped_release release;
        auto s = sim::synthesize_sample(scene, {resolution, max_order, snr_db});
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["audio"] = clip_array(s.clip);
        d["onset"] = s.clip.onset_index;
        d["depth"] = image_array(s.depth);
        d["gray"] = image_array(s.gray);
        d["scene"] = sim::serialize_scene(scene);
        return d;
      },
      py::arg("seed"), py::arg("resolution") = 16, py::arg("max_order") = 2,
      py::arg("snr_db") = 30.0,
      "Random room rendered to a (2, 3200) clip with depth and gray images.");

  m.def(
      "locate_onset",
      [](const FloatArray& recording) {
        auto [left, right] = split_channels(recording);
        return signal::locate_chirp_onset({std::move(left), std::move(right)},
                                          signal::synthesize_chirp());
      },
      py::arg("recording"), "Chirp onset in a (2, n) recording.");

  m.def(
      "spectrogram",
      [](const FloatArray& audio, bool log_magnitude) {
        auto [left, right] = split_channels(audio);
        signal::BinauralClip clip{std::move(left), std::move(right)};
        const auto s = signal::compute_spectrogram(clip, {log_magnitude});
        FloatArray out({s.channels, s.bins, s.frames});
        std::copy(s.magnitudes.begin(), s.magnitudes.end(), out.mutable_data());
        return out;
      },
      py::arg("audio"), py::arg("log_magnitude") = false,
      "Magnitude STFT of a (2, 3200) clip, shape (2, 257, 200).");

  m.def(
      "read_split",
      [](const fs::path& root, const std::string& split) {
        const auto records = data::read_dataset(root, data::parse_split(split));
        py::list out;
        for (const auto& r : records) out.append(record_dict(r));
        return out;
      },
      py::arg("root"), py::arg("split") = "test");

  m.def(
      "evaluate",
      [](const fs::path& checkpoint, const fs::path& data_root, const std::string& split,
         std::uint64_t noise_seed) {
        eval::Evaluation e;
        {
          py::gil_scoped_release release;
          e = eval::evaluate(checkpoint, data_root, data::parse_split(split), noise_seed);
        }
        py::list rows;
        for (const auto& r : e.rows()) rows.append(row_dict(r));
        return rows;
      },
      py::arg("checkpoint"), py::arg("data"), py::arg("split") = "test",
      py::arg("noise_seed") = 0,
      "Model, mean-image and random-image L1 rows for one split.");
}
