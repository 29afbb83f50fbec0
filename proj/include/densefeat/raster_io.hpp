#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "densefeat/image.hpp"

namespace densefeat {

/// Malformed binary or text input. offset() is the byte (or line, for
/// text formats) at which parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Little-endian writer for the project's binary formats.
class BinaryWriter {
 public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  const std::vector<char>& bytes() const { return bytes_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<char> bytes_;
};

/// Little-endian reader; every failure throws ParseError with the offset.
class BinaryReader {
 public:
  explicit BinaryReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}
  static BinaryReader open(const std::filesystem::path& path);

  void expect_magic(std::string_view m);
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  std::uint64_t offset() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }
  void expect_end() const;

 private:
  void need(std::size_t n) const;

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

/// RMAP: "RMAP", u32 width, u32 height, row-major f32 values.
void write_rmap(const std::filesystem::path& path, const Raster& r);
Raster read_rmap(const std::filesystem::path& path);

}  // namespace densefeat
