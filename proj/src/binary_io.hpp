#pragma once

// Little-endian stream helpers shared by the FFDS, SVMM and LOGR formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "pyroclass/error.hpp"

namespace pyroclass::detail {

class BinaryWriter {
public:
  explicit BinaryWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_)
      throw DataError(path.string() + ": cannot open for writing");
  }

  void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }

  template <typename T>
  void uint(T v) {
    std::array<char, sizeof(T)> bytes;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      bytes[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    out_.write(bytes.data(), bytes.size());
  }

  void i8(std::int8_t v) { out_.put(static_cast<char>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  void f64s(const std::vector<double>& values) {
    for (double v : values)
      f64(v);
  }

  void finish() {
    out_.flush();
    if (!out_)
      throw DataError(path_.string() + ": write failed");
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
public:
  explicit BinaryReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_)
      throw DataError(path.string() + ": cannot open for reading");
  }

  /// Returns false instead of throwing so callers can report their own bad-magic error.
  bool magic(std::string_view expected) {
    std::string got(expected.size(), '\0');
    in_.read(got.data(), static_cast<std::streamsize>(got.size()));
    return in_ && got == expected;
  }

  template <typename T>
  T uint() {
    std::array<unsigned char, sizeof(T)> bytes;
    read_raw(bytes.data(), bytes.size());
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return static_cast<T>(v);
  }

  std::int8_t i8() {
    char c;
    read_raw(&c, 1);
    return static_cast<std::int8_t>(c);
  }

  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

  /// Bulk read of count doubles; count is checked against the remaining bytes first.
  std::vector<double> f64s(std::uint64_t count) {
    require_remaining(count, sizeof(double));
    std::vector<double> values(count);
    for (auto& v : values)
      v = f64();
    return values;
  }

  void require_remaining(std::uint64_t count, std::uint64_t elem_size) {
    const auto pos = in_.tellg();
    in_.seekg(0, std::ios::end);
    const auto end = in_.tellg();
    in_.seekg(pos);
    const auto left = static_cast<std::uint64_t>(end - pos);
    if (elem_size != 0 && count > left / elem_size)
      throw DataError(path_.string() + ": truncated payload");
  }

  bool at_end() { return in_.peek() == std::ifstream::traits_type::eof(); }

  const std::filesystem::path& path() const { return path_; }

private:
  void read_raw(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (!in_)
      throw DataError(path_.string() + ": truncated payload");
  }

  std::filesystem::path path_;
  std::ifstream in_;
};

} // namespace pyroclass::detail
