#include "densefeat/raster_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace densefeat {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void BinaryWriter::u32(std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  bytes_.insert(bytes_.end(), b, b + 4);
}

void BinaryWriter::u64(std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  bytes_.insert(bytes_.end(), b, b + 8);
}

void BinaryWriter::f32(float v) {
  char b[4];
  std::memcpy(b, &v, 4);
  bytes_.insert(bytes_.end(), b, b + 4);
}

void BinaryWriter::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

BinaryReader BinaryReader::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return BinaryReader(std::move(bytes));
}

void BinaryReader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw ParseError("unexpected end of file", pos_);
}

void BinaryReader::expect_magic(std::string_view m) {
  need(m.size());
  if (std::memcmp(bytes_.data() + pos_, m.data(), m.size()) != 0) {
    throw ParseError("bad magic, expected " + std::string(m), pos_);
  }
  pos_ += m.size();
}

std::uint32_t BinaryReader::u32() {
  need(4);
  std::uint32_t v;
  std::memcpy(&v, bytes_.data() + pos_, 4);
  pos_ += 4;
  return v;
}

std::uint64_t BinaryReader::u64() {
  need(8);
  std::uint64_t v;
  std::memcpy(&v, bytes_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

float BinaryReader::f32() {
  need(4);
  float v;
  std::memcpy(&v, bytes_.data() + pos_, 4);
  pos_ += 4;
  return v;
}

void BinaryReader::expect_end() const {
  if (!at_end()) throw ParseError("trailing bytes", pos_);
}

void write_rmap(const std::filesystem::path& path, const Raster& r) {
  BinaryWriter w;
  w.magic("RMAP");
  w.u32(static_cast<std::uint32_t>(r.width()));
  w.u32(static_cast<std::uint32_t>(r.height()));
  for (double v : r.values()) w.f32(static_cast<float>(v));
  w.save(path);
}

Raster read_rmap(const std::filesystem::path& path) {
  auto in = BinaryReader::open(path);
  in.expect_magic("RMAP");
  const auto w = in.u32();
  const auto h = in.u32();
  Raster r(static_cast<int>(w), static_cast<int>(h));
  for (double& v : r.values()) {
    const auto off = in.offset();
    v = in.f32();
    if (!std::isfinite(v)) throw ParseError("non-finite value", off);
  }
  in.expect_end();
  return r;
}

}  // namespace densefeat
