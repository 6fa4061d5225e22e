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

#include "echo2depth/nn/optim.h"

#include <cmath>

namespace echo2depth::nn {

template <typename T>
Adam<T>::Adam(ParameterList<T> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  require(options.learning_rate > 0, ErrorCode::kInvalidArgument,
          "learning rate must be positive");
  require(options.beta1 >= 0 && options.beta1 < 1 && options.beta2 >= 0 &&
              options.beta2 < 1,
          ErrorCode::kInvalidArgument, "Adam betas must lie in [0, 1)");
  m_.resize(params_.size());
  v_.resize(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!params_[i]->trainable) continue;
    m_[i].assign(params_[i]->value.size(), T(0));
    v_[i].assign(params_[i]->value.size(), T(0));
  }
}

template <typename T>
void Adam<T>::step() {
  ++steps_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const T step_size = static_cast<T>(options_.learning_rate / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T eps = static_cast<T>(options_.epsilon);
  const T tb1 = static_cast<T>(b1), tb2 = static_cast<T>(b2);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter<T>& p = *params_[i];
    if (!p.trainable) continue;
    T* w = p.value.data();
    const T* g = p.grad.data();
    T* m = m_[i].data();
    T* v = v_[i].data();
    for (std::size_t j = 0, n = p.value.size(); j < n; ++j) {
      m[j] = tb1 * m[j] + (T(1) - tb1) * g[j];
      v[j] = tb2 * v[j] + (T(1) - tb2) * g[j] * g[j];
      w[j] -= step_size * m[j] / (std::sqrt(v[j] * inv_c2) + eps);
    }
  }
}

template <typename T>
void Adam<T>::zero_grad() {
  nn::zero_grad(params_);
}

template <typename T>
void zero_grad(const ParameterList<T>& params) {
  for (Parameter<T>* p : params)
    if (p->trainable) p->grad.fill(T(0));
}

template <typename T>
double gradient_norm(const ParameterList<T>& params) {
  double sum = 0;
  for (const Parameter<T>* p : params) {
    if (!p->trainable) continue;
    for (T g : p->grad.storage()) sum += static_cast<double>(g) * g;
  }
  return std::sqrt(sum);
}

template class Adam<float>;
template class Adam<double>;
template void zero_grad(const ParameterList<float>&);
template void zero_grad(const ParameterList<double>&);
template double gradient_norm(const ParameterList<float>&);
template double gradient_norm(const ParameterList<double>&);

}  // namespace echo2depth::nn
