#include "seld/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "seld/error.hpp"

namespace seld {

static_assert(std::endian::native == std::endian::little, "tensor files are little-endian");

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor3f& tensor) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (tensor.channels() > kMax || tensor.frames() > kMax || tensor.bins() > kMax) {
    throw Error("tensor dimensions exceed the file format");
  }
  out.write(kTensorMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(tensor.channels()));
  put_u32(out, static_cast<std::uint32_t>(tensor.frames()));
  put_u32(out, static_cast<std::uint32_t>(tensor.bins()));
  out.write(reinterpret_cast<const char*>(tensor.data().data()),
            static_cast<std::streamsize>(tensor.size() * sizeof(float)));
}

void write_tensor(const std::filesystem::path& path, const Tensor3f& tensor) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_tensor(out, tensor);
  if (!out) throw Error("write failed: " + path.string());
}

Tensor3f read_tensor(std::istream& in, const std::string& source_name) {
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (in.gcount() != 16 || std::memcmp(header, kTensorMagic.data(), 4) != 0) {
    throw Error(source_name + ": not a tensor file (bad magic)");
  }
  Tensor3f tensor(get_u32(header + 4), get_u32(header + 8), get_u32(header + 12));
  in.read(reinterpret_cast<char*>(tensor.data().data()),
          static_cast<std::streamsize>(tensor.size() * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != tensor.size() * sizeof(float)) {
    throw Error(source_name + ": truncated tensor payload");
  }
  return tensor;
}

Tensor3f read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_tensor(in, path.string());
}

}  // namespace seld
