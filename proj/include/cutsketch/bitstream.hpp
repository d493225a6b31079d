#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutsketch {

/// Malformed or truncated encoded input. `offset` is the byte position at
/// which decoding failed.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Bits needed to store ids in [0, n): ceil(log2 n), at least 1.
inline unsigned id_bits(std::uint64_t n) {
  return n <= 2 ? 1U : static_cast<unsigned>(std::bit_width(n - 1));
}

/// LSB-first bit packer; multi-byte fields come out little-endian.
class BitWriter {
 public:
  void write_bits(std::uint64_t value, unsigned nbits) {
    for (unsigned i = 0; i < nbits; ++i) {
      if (bit_pos_ % 8 == 0) bytes_.push_back(0);
      if ((value >> i) & 1U) bytes_.back() |= static_cast<std::uint8_t>(1U << (bit_pos_ % 8));
      ++bit_pos_;
    }
  }
  void write_u8(std::uint8_t v) { write_bits(v, 8); }
  void write_u32(std::uint32_t v) { write_bits(v, 32); }
  void write_u64(std::uint64_t v) { write_bits(v, 64); }
  void write_f64(double v) { write_u64(std::bit_cast<std::uint64_t>(v)); }
  void write_bytes(std::span<const std::uint8_t> data) {
    align();
    bytes_.insert(bytes_.end(), data.begin(), data.end());
    bit_pos_ += 8 * data.size();
  }
  void align() { bit_pos_ = 8 * bytes_.size(); }

  /// Overwrite a previously written, byte-aligned u64 (length back-patching).
  void patch_u64(std::size_t byte_offset, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_[byte_offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }

  [[nodiscard]] std::size_t bit_position() const { return bit_pos_; }
  [[nodiscard]] std::size_t byte_size() const { return bytes_.size(); }
  [[nodiscard]] const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data, std::size_t base_offset = 0)
      : data_(data), base_(base_offset) {}

  std::uint64_t read_bits(unsigned nbits) {
    if (bit_pos_ + nbits > 8 * data_.size()) throw DecodeError("truncated input", offset());
    std::uint64_t v = 0;
    for (unsigned i = 0; i < nbits; ++i) {
      const std::size_t p = bit_pos_++;
      if ((data_[p / 8] >> (p % 8)) & 1U) v |= std::uint64_t{1} << i;
    }
    return v;
  }
  std::uint8_t read_u8() { return static_cast<std::uint8_t>(read_bits(8)); }
  std::uint32_t read_u32() { return static_cast<std::uint32_t>(read_bits(32)); }
  std::uint64_t read_u64() { return read_bits(64); }
  double read_f64() { return std::bit_cast<double>(read_u64()); }
  std::span<const std::uint8_t> read_bytes(std::size_t count) {
    align();
    const std::size_t start = bit_pos_ / 8;
    if (start + count > data_.size()) throw DecodeError("truncated input", offset());
    bit_pos_ += 8 * count;
    return data_.subspan(start, count);
  }
  void align() { bit_pos_ = (bit_pos_ + 7) / 8 * 8; }

  [[nodiscard]] std::size_t offset() const { return base_ + bit_pos_ / 8; }
  [[nodiscard]] std::size_t remaining_bits() const { return 8 * data_.size() - bit_pos_; }
  [[nodiscard]] bool at_end() const { return (bit_pos_ + 7) / 8 >= data_.size(); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t bit_pos_ = 0;
};

}  // namespace cutsketch
