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

#ifndef ECHO2DEPTH_NN_TENSOR_H_
#define ECHO2DEPTH_NN_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "echo2depth/error.h"

namespace echo2depth::nn {

// NCHW extent. One-dimensional signals use h == 1.
struct Shape {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;

  std::size_t count() const {
    return static_cast<std::size_t>(n) * c * h * w;
  }
  std::size_t per_sample() const { return static_cast<std::size_t>(c) * h * w; }
  std::size_t spatial() const { return static_cast<std::size_t>(h) * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const {
    return "[" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + "]";
  }
};

template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0))
      : shape_(shape), data_(shape.count(), fill) {}
  Tensor(Shape shape, std::vector<T> values)
      : shape_(shape), data_(std::move(values)) {
    require(data_.size() == shape_.count(), ErrorCode::kInvalidArgument,
            "tensor data does not match shape " + shape_.str());
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(int n, int c, int h, int w) { return data_[offset(n, c, h, w)]; }
  const T& at(int n, int c, int h, int w) const {
    return data_[offset(n, c, h, w)];
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  // Same storage, new extent with an equal element count.
  void reshape(Shape shape) {
    require(shape.count() == data_.size(), ErrorCode::kInvalidArgument,
            "cannot reshape " + shape_.str() + " to " + shape.str());
    shape_ = shape;
  }
  Tensor reshaped(Shape shape) const {
    Tensor copy = *this;
    copy.reshape(shape);
    return copy;
  }

 private:
  std::size_t offset(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + h) *
               shape_.w +
           w;
  }

  Shape shape_;
  std::vector<T> data_;
};

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  // Buffers such as batch-norm running statistics are saved with the model
  // but never touched by the optimizer.
  bool trainable = true;
};

template <typename T>
using ParameterList = std::vector<Parameter<T>*>;

}  // namespace echo2depth::nn

#endif  // ECHO2DEPTH_NN_TENSOR_H_
