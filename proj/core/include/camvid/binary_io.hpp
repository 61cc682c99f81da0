#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace camvid {

// Thrown when an artifact is missing, malformed, or cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian byte sink for the artifact formats.
class ByteWriter {
 public:
  void magic(std::string_view tag);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void f32(float v);
  void f64(double v);
  void bytes(std::span<const std::uint8_t> data);
  void text(std::string_view s);

  const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(std::vector<std::uint8_t> data, std::string source)
      : buf_(std::move(data)), source_(std::move(source)) {}

  // Throws IoError naming the source when the tag does not match.
  void expect_magic(std::string_view tag);
  std::uint16_t u16();
  std::uint32_t u32();
  float f32();
  double f64();
  std::span<const std::uint8_t> bytes(std::size_t n);
  std::string text(std::size_t n);

  bool at_end() const { return pos_ == buf_.size(); }
  std::size_t remaining() const { return buf_.size() - pos_; }
  const std::string& source() const { return source_; }

 private:
  void need(std::size_t n);

  std::vector<std::uint8_t> buf_;
  std::string source_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it into place, so readers
// never observe a half-written artifact.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> data);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace camvid
