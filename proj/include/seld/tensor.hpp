#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace seld {

// Dense rank-3 tensor, row-major over (channel, time, bin).
template <typename T>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t channels, std::size_t frames, std::size_t bins, T fill = T{})
      : channels_(channels), frames_(frames), bins_(bins),
        data_(channels * frames * bins, fill) {}

  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t c, std::size_t t, std::size_t f) {
    assert(c < channels_ && t < frames_ && f < bins_);
    return data_[(c * frames_ + t) * bins_ + f];
  }
  const T& operator()(std::size_t c, std::size_t t, std::size_t f) const {
    assert(c < channels_ && t < frames_ && f < bins_);
    return data_[(c * frames_ + t) * bins_ + f];
  }

  std::span<T> row(std::size_t c, std::size_t t) {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::span<const T> row(std::size_t c, std::size_t t) const {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::span<T> channel(std::size_t c) {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }
  std::span<const T> channel(std::size_t c) const {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> data_;
};

using Tensor3f = Tensor3<float>;
using Tensor3d = Tensor3<double>;

}  // namespace seld
