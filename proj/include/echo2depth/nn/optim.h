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

#ifndef ECHO2DEPTH_NN_OPTIM_H_
#define ECHO2DEPTH_NN_OPTIM_H_

#include <vector>

#include "echo2depth/nn/tensor.h"

namespace echo2depth::nn {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over the trainable entries of a parameter list.
template <typename T>
class Adam {
 public:
  Adam(ParameterList<T> params, AdamOptions options);

  void step();
  void zero_grad();
  long steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }

 private:
  ParameterList<T> params_;
  AdamOptions options_;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
  long steps_ = 0;
};

template <typename T>
void zero_grad(const ParameterList<T>& params);

// Euclidean norm over all trainable gradients.
template <typename T>
double gradient_norm(const ParameterList<T>& params);

}  // namespace echo2depth::nn

#endif  // ECHO2DEPTH_NN_OPTIM_H_
