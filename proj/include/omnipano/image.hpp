// Copyright 2026 The omnipano Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace omnipano {

/// Interleaved row-major image with 1 or 3 channels.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;

  Image(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    validate_shape(width, height, channels);
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  Image(int width, int height, int channels, std::vector<T> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    validate_shape(width, height, channels);
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
      throw std::invalid_argument("image data length does not match width*height*channels");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<T> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
            static_cast<std::size_t>(width_) * channels_};
  }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
            static_cast<std::size_t>(width_) * channels_};
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static void validate_shape(int width, int height, int channels) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
    if (channels != 1 && channels != 3) throw std::invalid_argument("image must have 1 or 3 channels");
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

using Image8 = Image<std::uint8_t>;
using ImageF = Image<float>;

}  // namespace omnipano
