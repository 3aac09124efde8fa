#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "seld/tensor.hpp"

namespace seld {

// Flat little-endian float32 tensor file. 16-byte header:
//   bytes 0-3   magic "SLDT"
//   bytes 4-7   uint32 channels
//   bytes 8-11  uint32 frames
//   bytes 12-15 uint32 bins
// followed by channels * frames * bins float32 values in (c, t, f) order.
inline constexpr std::array<char, 4> kTensorMagic = {'S', 'L', 'D', 'T'};

void write_tensor(std::ostream& out, const Tensor3f& tensor);
void write_tensor(const std::filesystem::path& path, const Tensor3f& tensor);
Tensor3f read_tensor(std::istream& in, const std::string& source_name = "<stream>");
Tensor3f read_tensor(const std::filesystem::path& path);

}  // namespace seld
