// Copyright (c) 2026 The Sparsefold Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsefold {

/// C x H x W feature map, channel-major then row-major.
///
/// A default-constructed tensor is empty (all extents zero); it is used only
/// to mark decomposition blocks that hold no cells. Every other tensor has
/// strictly positive extents.
template <typename T>
class Tensor3 {
 public:
  using value_type = T;

  Tensor3() = default;

  Tensor3(int channels, int height, int width, T fill = T{})
      : channels_(channels), height_(height), width_(width) {
    check_extents();
    values_.assign(size(), fill);
  }

  Tensor3(int channels, int height, int width, std::vector<T> values)
      : channels_(channels), height_(height), width_(width),
        values_(std::move(values)) {
    check_extents();
    if (values_.size() != size()) {
      throw std::invalid_argument("Tensor3: expected " +
                                  std::to_string(size()) + " values, got " +
                                  std::to_string(values_.size()));
    }
  }

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(channels_) * height_ * width_;
  }

  T& at(int c, int y, int x) { return values_[offset(c, y, x)]; }
  const T& at(int c, int y, int x) const { return values_[offset(c, y, x)]; }
  T& operator()(int c, int y, int x) { return at(c, y, x); }
  const T& operator()(int c, int y, int x) const { return at(c, y, x); }

  bool contains(int c, int y, int x) const noexcept {
    return c >= 0 && c < channels_ && y >= 0 && y < height_ && x >= 0 &&
           x < width_;
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  // Unchecked row pointer for inner loops.
  const T* row(int c, int y) const noexcept {
    return values_.data() +
           (static_cast<std::size_t>(c) * height_ + y) * width_;
  }
  T* row(int c, int y) noexcept {
    return values_.data() +
           (static_cast<std::size_t>(c) * height_ + y) * width_;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  void check_extents() const {
    if (channels_ < 1 || height_ < 1 || width_ < 1) {
      throw std::invalid_argument(
          "Tensor3: extents must be positive, got " +
          std::to_string(channels_) + "x" + std::to_string(height_) + "x" +
          std::to_string(width_));
    }
  }

  std::size_t offset(int c, int y, int x) const {
    if (!contains(c, y, x)) {
      throw std::out_of_range("Tensor3 index (" + std::to_string(c) + "," +
                              std::to_string(y) + "," + std::to_string(x) +
                              ") outside " + std::to_string(channels_) + "x" +
                              std::to_string(height_) + "x" +
                              std::to_string(width_));
    }
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<T> values_;
};

/// Co x Ci x Kh x Kw weights, indexed (co, ci, ky, kx).
template <typename T>
class KernelStack {
 public:
  using value_type = T;

  KernelStack() = default;

  KernelStack(int out_channels, int in_channels, int kernel_h, int kernel_w,
              T fill = T{})
      : out_channels_(out_channels), in_channels_(in_channels),
        kernel_h_(kernel_h), kernel_w_(kernel_w) {
    check_extents();
    values_.assign(size(), fill);
  }

  KernelStack(int out_channels, int in_channels, int kernel_h, int kernel_w,
              std::vector<T> values)
      : out_channels_(out_channels), in_channels_(in_channels),
        kernel_h_(kernel_h), kernel_w_(kernel_w), values_(std::move(values)) {
    check_extents();
    if (values_.size() != size()) {
      throw std::invalid_argument("KernelStack: expected " +
                                  std::to_string(size()) + " values, got " +
                                  std::to_string(values_.size()));
    }
  }

  int out_channels() const noexcept { return out_channels_; }
  int in_channels() const noexcept { return in_channels_; }
  int kernel_h() const noexcept { return kernel_h_; }
  int kernel_w() const noexcept { return kernel_w_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(out_channels_) * in_channels_ * kernel_h_ *
           kernel_w_;
  }

  T& at(int co, int ci, int ky, int kx) {
    return values_[offset(co, ci, ky, kx)];
  }
  const T& at(int co, int ci, int ky, int kx) const {
    return values_[offset(co, ci, ky, kx)];
  }
  T& operator()(int co, int ci, int ky, int kx) { return at(co, ci, ky, kx); }
  const T& operator()(int co, int ci, int ky, int kx) const {
    return at(co, ci, ky, kx);
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  friend bool operator==(const KernelStack&, const KernelStack&) = default;

 private:
  void check_extents() const {
    if (out_channels_ < 1 || in_channels_ < 1 || kernel_h_ < 1 ||
        kernel_w_ < 1) {
      throw std::invalid_argument("KernelStack: extents must be positive");
    }
  }

  std::size_t offset(int co, int ci, int ky, int kx) const {
    if (co < 0 || co >= out_channels_ || ci < 0 || ci >= in_channels_ ||
        ky < 0 || ky >= kernel_h_ || kx < 0 || kx >= kernel_w_) {
      throw std::out_of_range("KernelStack index (" + std::to_string(co) +
                              "," + std::to_string(ci) + "," +
                              std::to_string(ky) + "," + std::to_string(kx) +
                              ") out of range");
    }
    return ((static_cast<std::size_t>(co) * in_channels_ + ci) * kernel_h_ +
            ky) *
               kernel_w_ +
           kx;
  }

  int out_channels_ = 0;
  int in_channels_ = 0;
  int kernel_h_ = 0;
  int kernel_w_ = 0;
  std::vector<T> values_;
};

/// Stride and symmetric zero padding of a dense convolution.
struct ConvGeometry {
  int stride = 1;
  int pad = 0;
};

/// floor((in + 2*pad - kernel) / stride) + 1, or a non-positive value when the
/// kernel does not fit.
constexpr int conv_output_extent(int in, int kernel, int stride, int pad) {
  const int span = in + 2 * pad - kernel;
  if (span < 0) return 0;
  return span / stride + 1;
}

using Tensor3i = Tensor3<std::int64_t>;
using Tensor3d = Tensor3<double>;
using KernelStacki = KernelStack<std::int64_t>;
using KernelStackd = KernelStack<double>;

}  // namespace sparsefold
