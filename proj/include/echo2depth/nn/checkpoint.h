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

#ifndef ECHO2DEPTH_NN_CHECKPOINT_H_
#define ECHO2DEPTH_NN_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "echo2depth/nn/tensor.h"

namespace echo2depth::nn {

struct NamedTensor {
  std::string name;
  Tensor<float> value;
};

struct Checkpoint {
  std::string config;  // key=value text echoing the producing configuration
  std::vector<NamedTensor> tensors;
};

// Little-endian archive: "E2DCKPT\0", u32 version, u32 config length,
// config bytes, u32 tensor count, then per tensor u32 name length, name,
// 4 x u32 NCHW dims and float32 data; trailed by a u32 CRC-32 of all
// preceding bytes.
void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint capture(const ParameterList<float>& params, std::string config);
// Copies values by name; every parameter must be present with a matching
// shape.
void restore(const Checkpoint& checkpoint, const ParameterList<float>& params);

}  // namespace echo2depth::nn

#endif  // ECHO2DEPTH_NN_CHECKPOINT_H_
