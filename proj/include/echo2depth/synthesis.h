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

#ifndef ECHO2DEPTH_SYNTHESIS_H_
#define ECHO2DEPTH_SYNTHESIS_H_

#include "echo2depth/acoustic_sim.h"
#include "echo2depth/scene.h"
#include "echo2depth/signal_pipeline.h"

namespace echo2depth::sim {

struct SynthesisOptions {
  int resolution = 16;
  int max_order = 2;
  double snr_db = 30.0;
};

struct SynthesizedSample {
  signal::BinauralClip clip;
  signal::DepthMap depth;
  signal::GrayImage gray;
};

// Renders one scene end to end the way a capture rig would be processed:
// the echo window is embedded in a longer recording with a seed-dependent
// lead-in, the chirp is re-located by matched filtering, and the 3200-sample
// clip is cut at the detected onset (clip.onset_index is that onset).
SynthesizedSample synthesize_sample(const RoomScene& scene,
                                    const SynthesisOptions& options = {});

}  // namespace echo2depth::sim

#endif  // ECHO2DEPTH_SYNTHESIS_H_
