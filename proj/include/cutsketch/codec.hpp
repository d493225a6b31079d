#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cutsketch/bitstream.hpp"
#include "cutsketch/foreach_sketch.hpp"
#include "cutsketch/general_sketch.hpp"
#include "cutsketch/graph.hpp"
#include "cutsketch/sparsify.hpp"

namespace cutsketch {

// CUTSK1 container: the 6-byte magic "CUTSK1", a kind byte, a flags byte,
// then sections of (tag u8, payload length u64, payload). Payloads are
// LSB-first bit streams padded to a byte. Edges take 2 ceil(log2 n) bits of
// endpoints plus a weight; weights are raw IEEE doubles unless the quantized
// flag is set.

enum class PayloadKind : std::uint8_t {
  graph = 1,
  sparsifier = 2,
  cut_sketch = 3,
  basic_sketch = 4,
  server_message = 5,
};

inline constexpr std::uint8_t kFlagQuantized = 1;

struct Section {
  std::uint8_t tag = 0;
  std::span<const std::uint8_t> payload;
  std::size_t offset = 0;  // byte offset of the payload in the container
};

struct Container {
  PayloadKind kind = PayloadKind::graph;
  std::uint8_t flags = 0;
  std::vector<Section> sections;
};

std::vector<std::uint8_t> make_container(PayloadKind kind, std::uint8_t flags,
                                         const std::vector<std::pair<std::uint8_t, std::vector<std::uint8_t>>>& sections);
/// Checks magic, kind and section framing; payloads alias `bytes`.
Container parse_container(std::span<const std::uint8_t> bytes);
/// Returns the section with `tag` or throws DecodeError.
const Section& require_section(const Container& c, std::uint8_t tag);

struct CodecOptions {
  /// Store weights as exponent + mantissa with relative error <= eps/2
  /// instead of 64-bit doubles. Decoding then yields the rounded weights.
  bool quantized = false;
};

/// Bit accounting of one encoding.
struct SizeReport {
  std::uint64_t bits_total = 0;
  std::map<std::string, std::uint64_t> bits_by_component;
  std::uint64_t stored_edge_count = 0;
  std::size_t n = 0;
  double eps = 0;
  bool quantized = false;
};

nlohmann::json to_json(const SizeReport& r);

std::vector<std::uint8_t> serialize(const Graph& g);
Graph deserialize_graph(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const Sparsifier& h);
Sparsifier deserialize_sparsifier(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const BasicSketch& sk, const CodecOptions& options = {});
BasicSketch deserialize_basic(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const CutSketch& sk, const CodecOptions& options = {});
CutSketch deserialize_sketch(std::span<const std::uint8_t> bytes);

SizeReport size_report(const CutSketch& sk, const CodecOptions& options = {});
SizeReport size_report(const BasicSketch& sk, const CodecOptions& options = {});
SizeReport size_report(const Sparsifier& h);

}  // namespace cutsketch
