#include "cutsketch/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>

namespace cutsketch {

namespace {

constexpr std::array<std::uint8_t, 6> kMagic{'C', 'U', 'T', 'S', 'K', '1'};
constexpr std::size_t kPreamble = kMagic.size() + 2;
constexpr std::size_t kSectionFrame = 9;  // tag + u64 length

enum SectionTag : std::uint8_t { kTagHeader = 1, kTagSparsifier = 2, kTagTree = 3, kTagScales = 4, kTagGraph = 5 };

enum Label : std::size_t { kHeader, kSparsifier, kTree, kLayout, kCross, kPartition, kDegrees, kSamples, kLabelCount };
constexpr std::array<const char*, kLabelCount> kLabelNames{"header",      "sparsifier", "tree",    "layout",
                                                           "cross_edges", "partition",  "degrees", "samples"};

struct Quant {
  bool on = false;
  unsigned mantissa = 0;
  int e_min = 0;
  unsigned exp_bits = 0;
};

struct Tally {
  std::array<std::uint64_t, kLabelCount> bits{};
  std::uint64_t edges = 0;
  // Exponent range seen by a dry run.
  bool any = false;
  int e_lo = 0;
  int e_hi = 0;
};

unsigned mantissa_bits(double eps) {
  return std::max(1U, static_cast<unsigned>(std::ceil(std::log2(1.0 / eps) - 1e-12)));
}

// v > 0 -> (e, q) with v ~ (1 + q / 2^M) 2^(e-1), relative error <= 2^-(M+1).
std::pair<int, std::uint64_t> quantize(double v, unsigned m) {
  int e = 0;
  const double frac = std::frexp(v, &e);
  const double scale = std::ldexp(1.0, static_cast<int>(m));
  auto q = static_cast<std::uint64_t>(std::llround((2 * frac - 1) * scale));
  if (q == (std::uint64_t{1} << m)) {
    q = 0;
    ++e;
  }
  return {e, q};
}

class Encoder {
 public:
  Encoder(const Quant& q, Tally& tally, bool dry) : q_(q), tally_(tally), dry_(dry) {}

  void label(Label l) {
    flush();
    current_ = l;
  }
  void bits(std::uint64_t v, unsigned n) { w_.write_bits(v, n); }
  void u8(std::uint8_t v) { w_.write_u8(v); }
  void u32(std::uint32_t v) { w_.write_u32(v); }
  void u64(std::uint64_t v) { w_.write_u64(v); }
  void i32(int v) { w_.write_u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { w_.write_f64(v); }

  void weight(double v) {
    if (!q_.on) {
      w_.write_f64(v);
      return;
    }
    if (v == 0) {
      w_.write_bits(0, q_.exp_bits);
      return;
    }
    const auto [e, q] = quantize(v, q_.mantissa);
    if (dry_) {
      tally_.e_lo = tally_.any ? std::min(tally_.e_lo, e) : e;
      tally_.e_hi = tally_.any ? std::max(tally_.e_hi, e) : e;
      tally_.any = true;
      return;
    }
    w_.write_bits(static_cast<std::uint64_t>(e - q_.e_min + 1), q_.exp_bits);
    w_.write_bits(q, q_.mantissa);
  }

  void edge(const Edge& e, unsigned idb) {
    w_.write_bits(e.u, idb);
    w_.write_bits(e.v, idb);
    weight(e.w);
    ++tally_.edges;
  }

  std::vector<std::uint8_t> finish() {
    w_.align();
    flush();
    return w_.take();
  }

 private:
  void flush() {
    tally_.bits[current_] += w_.bit_position() - mark_;
    mark_ = w_.bit_position();
  }

  Quant q_;
  Tally& tally_;
  bool dry_;
  BitWriter w_;
  Label current_ = kLayout;
  std::size_t mark_ = 0;
};

class Decoder {
 public:
  Decoder(const Section& s, const Quant& q) : r_(s.payload, s.offset), q_(q) {}

  std::uint64_t bits(unsigned n) { return r_.read_bits(n); }
  std::uint8_t u8() { return r_.read_u8(); }
  std::uint32_t u32() { return r_.read_u32(); }
  std::uint64_t u64() { return r_.read_u64(); }
  int i32() { return static_cast<int>(r_.read_u32()); }
  double f64() { return r_.read_f64(); }

  double finite(const char* what) {
    const std::size_t at = r_.offset();
    const double v = r_.read_f64();
    if (!std::isfinite(v)) throw DecodeError(std::string("non-finite ") + what, at);
    return v;
  }

  double weight() {
    const std::size_t at = r_.offset();
    if (!q_.on) {
      const double v = r_.read_f64();
      if (!std::isfinite(v) || v < 0) throw DecodeError("invalid weight", at);
      return v;
    }
    const std::uint64_t code = r_.read_bits(q_.exp_bits);
    if (code == 0) return 0;
    const std::uint64_t q = r_.read_bits(q_.mantissa);
    const int e = static_cast<int>(code) - 1 + q_.e_min;
    const double v = std::ldexp(1.0 + std::ldexp(static_cast<double>(q), -static_cast<int>(q_.mantissa)), e - 1);
    if (!std::isfinite(v)) throw DecodeError("invalid weight", at);
    return v;
  }

  [[nodiscard]] unsigned weight_min_bits() const { return q_.on ? q_.exp_bits : 64; }

  Edge edge(unsigned idb, std::size_t n) {
    const std::size_t at = r_.offset();
    const auto u = static_cast<Vertex>(r_.read_bits(idb));
    const auto v = static_cast<Vertex>(r_.read_bits(idb));
    if (u >= n || v >= n || u == v) throw DecodeError("invalid edge endpoints", at);
    return {u, v, weight()};
  }

  /// Reads a u32 (or u64) count and rejects counts whose items cannot fit.
  std::uint64_t count(std::uint64_t min_bits_each, bool wide = false) {
    const std::size_t at = r_.offset();
    const std::uint64_t c = wide ? r_.read_u64() : r_.read_u32();
    if (min_bits_each > 0 && c > r_.remaining_bits() / min_bits_each) {
      throw DecodeError("count exceeds remaining input", at);
    }
    return c;
  }

  void require(std::uint64_t items, std::uint64_t min_bits_each) {
    if (min_bits_each > 0 && items > r_.remaining_bits() / min_bits_each) {
      throw DecodeError("count exceeds remaining input", r_.offset());
    }
  }

  [[nodiscard]] std::size_t offset() const { return r_.offset(); }

  void done() {
    r_.align();
    if (!r_.at_end()) throw DecodeError("trailing bytes in section", r_.offset());
  }

 private:
  BitReader r_;
  Quant q_;
};

// ---- shared payload pieces ----

void write_sparsifier(Encoder& enc, const Sparsifier& h, unsigned idb) {
  enc.label(kSparsifier);
  enc.f64(h.quality);
  enc.u64(h.seed);
  enc.u32(static_cast<std::uint32_t>(h.graph.num_edges()));
  for (const Edge& e : h.graph.edges()) enc.edge(e, idb);
}

Sparsifier read_sparsifier(Decoder& dec, std::size_t n) {
  const unsigned idb = id_bits(n);
  Sparsifier h;
  h.quality = dec.finite("sparsifier quality");
  h.seed = dec.u64();
  const std::uint64_t m = dec.count(2 * idb + dec.weight_min_bits());
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) edges.push_back(dec.edge(idb, n));
  h.graph = Graph(n, std::move(edges));
  return h;
}

void write_class(Encoder& enc, const ClassSketch& cs, unsigned idb) {
  enc.label(kLayout);
  enc.i32(cs.index);
  enc.u32(cs.samples_per_vertex);
  enc.u32(cs.num_parts);
  enc.u32(static_cast<std::uint32_t>(cs.cross_edges.size()));
  enc.label(kCross);
  for (const Edge& e : cs.cross_edges) enc.edge(e, idb);

  std::uint32_t max_intra = 0;
  for (const VertexRecord& r : cs.vertices) max_intra = std::max(max_intra, r.intra_degree);
  const unsigned part_bits = id_bits(cs.num_parts);
  const unsigned intra_bits = id_bits(std::uint64_t{max_intra} + 1);
  enc.label(kLayout);
  enc.u32(static_cast<std::uint32_t>(cs.vertices.size()));
  enc.u8(static_cast<std::uint8_t>(intra_bits));
  for (const VertexRecord& r : cs.vertices) {
    enc.label(kPartition);
    enc.bits(r.vertex, idb);
    enc.bits(r.part, part_bits);
    enc.label(kDegrees);
    enc.weight(r.weighted_degree);
    enc.bits(r.intra_degree, intra_bits);
  }
  enc.label(kSamples);
  for (const Edge& e : cs.samples) enc.edge(e, idb);
}

ClassSketch read_class(Decoder& dec, std::size_t n) {
  const unsigned idb = id_bits(n);
  const std::size_t at = dec.offset();
  ClassSketch cs;
  cs.index = dec.i32();
  cs.samples_per_vertex = dec.u32();
  cs.num_parts = dec.u32();
  if (cs.num_parts > n) throw DecodeError("part count exceeds vertex count", at);
  const std::uint64_t cross = dec.count(2 * idb + dec.weight_min_bits());
  cs.cross_edges.reserve(cross);
  for (std::uint64_t i = 0; i < cross; ++i) cs.cross_edges.push_back(dec.edge(idb, n));

  const unsigned part_bits = id_bits(cs.num_parts);
  const std::uint64_t records = dec.count(idb + part_bits + dec.weight_min_bits());
  const std::size_t intra_at = dec.offset();
  const unsigned intra_bits = dec.u8();
  if (intra_bits == 0 || intra_bits > 32) throw DecodeError("invalid degree width", intra_at);
  if (records > n) throw DecodeError("record count exceeds vertex count", intra_at);
  std::uint64_t sampled = 0;
  for (std::uint64_t i = 0; i < records; ++i) {
    const std::size_t rec_at = dec.offset();
    VertexRecord r;
    r.vertex = static_cast<Vertex>(dec.bits(idb));
    r.part = static_cast<std::uint32_t>(dec.bits(part_bits));
    if (r.vertex >= n || r.part >= cs.num_parts || (!cs.vertices.empty() && r.vertex <= cs.vertices.back().vertex)) {
      throw DecodeError("invalid vertex record", rec_at);
    }
    r.weighted_degree = dec.weight();
    r.intra_degree = static_cast<std::uint32_t>(dec.bits(intra_bits));
    if (r.intra_degree > 0) ++sampled;
    cs.vertices.push_back(r);
  }
  const std::uint64_t total = sampled * cs.samples_per_vertex;
  dec.require(total, 2 * idb + dec.weight_min_bits());
  cs.samples.reserve(std::min<std::uint64_t>(total, 1U << 20));
  std::size_t r = 0;
  for (std::uint64_t t = 0; t < total; ++t) {
    while (cs.vertices[r].intra_degree == 0) ++r;
    const std::size_t sample_at = dec.offset();
    const Edge e = dec.edge(idb, n);
    if (e.u != cs.vertices[r].vertex) throw DecodeError("sample not anchored at its record", sample_at);
    cs.samples.push_back(e);
    if ((t + 1) % cs.samples_per_vertex == 0) ++r;
  }
  cs.finalize();
  return cs;
}

void write_scale(Encoder& enc, const ScaleStructure& ds, unsigned idb) {
  enc.label(kLayout);
  enc.i32(ds.exponent);
  enc.f64(ds.c);
  enc.u32(static_cast<std::uint32_t>(ds.classes.size()));
  for (const ClassSketch& cs : ds.classes) write_class(enc, cs, idb);
}

ScaleStructure read_scale(Decoder& dec, std::size_t n) {
  ScaleStructure ds;
  ds.exponent = dec.i32();
  ds.c = dec.finite("scale");
  const std::uint64_t classes = dec.count(4 * 32);
  ds.classes.reserve(classes);
  for (std::uint64_t i = 0; i < classes; ++i) ds.classes.push_back(read_class(dec, n));
  return ds;
}

// Sparsifier plus scale structures; n and eps come from the enclosing header.
void write_basic_body(Encoder& enc, const BasicSketch& sk) {
  const unsigned idb = id_bits(sk.n);
  write_sparsifier(enc, sk.sparsifier, idb);
  enc.label(kLayout);
  enc.i32(sk.lo);
  enc.i32(sk.hi);
  enc.u32(static_cast<std::uint32_t>(sk.repetitions.size()));
  for (const auto& rep : sk.repetitions) {
    for (const ScaleStructure& ds : rep) write_scale(enc, ds, idb);
  }
}

BasicSketch read_basic_body(Decoder& dec, std::size_t n, double eps) {
  BasicSketch sk;
  sk.n = n;
  sk.eps = eps;
  sk.sparsifier = read_sparsifier(dec, n);
  const std::size_t at = dec.offset();
  sk.lo = dec.i32();
  sk.hi = dec.i32();
  const std::int64_t span = static_cast<std::int64_t>(sk.hi) - sk.lo + 1;
  if (span > 4096) throw DecodeError("scale range too wide", at);
  const std::uint64_t per_rep = span > 0 ? static_cast<std::uint64_t>(span) : 0;
  const std::uint64_t reps = dec.count(per_rep * (32 + 64 + 32));
  sk.repetitions.assign(reps, {});
  for (auto& rep : sk.repetitions) {
    rep.reserve(per_rep);
    for (std::uint64_t i = 0; i < per_rep; ++i) rep.push_back(read_scale(dec, n));
  }
  return sk;
}

void write_quant(Encoder& enc, const Quant& q) {
  enc.u8(static_cast<std::uint8_t>(q.mantissa));
  enc.i32(q.e_min);
  enc.u8(static_cast<std::uint8_t>(q.exp_bits));
}

Quant read_quant(Decoder& dec, bool on) {
  Quant q;
  if (!on) return q;
  const std::size_t at = dec.offset();
  q.on = true;
  q.mantissa = dec.u8();
  q.e_min = dec.i32();
  q.exp_bits = dec.u8();
  if (q.mantissa == 0 || q.mantissa > 52 || q.exp_bits == 0 || q.exp_bits > 16) {
    throw DecodeError("invalid quantization parameters", at);
  }
  return q;
}

Quant finish_quant(const Tally& dry, unsigned mantissa) {
  Quant q;
  q.on = true;
  q.mantissa = mantissa;
  q.e_min = dry.any ? dry.e_lo : 0;
  const int range = dry.any ? dry.e_hi - dry.e_lo : 0;
  q.exp_bits = id_bits(static_cast<std::uint64_t>(range) + 2);
  return q;
}

using SectionList = std::vector<std::pair<std::uint8_t, std::vector<std::uint8_t>>>;

struct Encoded {
  std::vector<std::uint8_t> bytes;
  Tally tally;
};

Encoded finish_container(PayloadKind kind, std::uint8_t flags, const SectionList& sections, Tally tally) {
  tally.bits[kHeader] += 8 * (kPreamble + kSectionFrame * sections.size());
  return {make_container(kind, flags, sections), tally};
}

// Encodes sections produced by body(enc) for the given quantization; the
// header section is written separately by header(enc).
template <class Header, class Body>
Encoded encode(PayloadKind kind, bool quantized, unsigned mantissa, Header header, Body body) {
  Quant q;
  if (quantized) {
    Tally dry;
    body(Quant{true, mantissa, 0, 1}, dry, true);
    q = finish_quant(dry, mantissa);
  }
  Tally tally;
  SectionList sections;
  {
    Encoder enc(q, tally, false);
    enc.label(kHeader);
    header(enc);
    if (q.on) write_quant(enc, q);
    sections.emplace_back(kTagHeader, enc.finish());
  }
  for (auto& s : body(q, tally, false)) sections.push_back(std::move(s));
  return finish_container(kind, q.on ? kFlagQuantized : 0, sections, tally);
}

Container expect(std::span<const std::uint8_t> bytes, PayloadKind kind) {
  Container c = parse_container(bytes);
  if (c.kind != kind) throw DecodeError("unexpected payload kind", kMagic.size());
  return c;
}

SizeReport make_report(const Encoded& enc, std::size_t n, double eps, bool quantized) {
  SizeReport r;
  r.bits_total = 8 * enc.bytes.size();
  for (std::size_t i = 0; i < kLabelCount; ++i) r.bits_by_component[kLabelNames[i]] = enc.tally.bits[i];
  r.stored_edge_count = enc.tally.edges;
  r.n = n;
  r.eps = eps;
  r.quantized = quantized;
  return r;
}

Encoded encode_basic(const BasicSketch& sk, const CodecOptions& options) {
  return encode(
      PayloadKind::basic_sketch, options.quantized, mantissa_bits(sk.eps),
      [&](Encoder& enc) {
        enc.u64(sk.n);
        enc.f64(sk.eps);
      },
      [&](const Quant& q, Tally& tally, bool dry) {
        Encoder enc(q, tally, dry);
        write_basic_body(enc, sk);
        return SectionList{{kTagScales, enc.finish()}};
      });
}

Encoded encode_sketch(const CutSketch& sk, const CodecOptions& options) {
  const unsigned idb = id_bits(sk.n);
  return encode(
      PayloadKind::cut_sketch, options.quantized, mantissa_bits(sk.eps),
      [&](Encoder& enc) {
        enc.u64(sk.n);
        enc.f64(sk.eps);
        enc.u64(sk.seed);
        enc.u32(sk.repetitions);
      },
      [&](const Quant& q, Tally& tally, bool dry) {
        SectionList out;
        {
          Encoder enc(q, tally, dry);
          write_sparsifier(enc, sk.sparsifier, idb);
          out.emplace_back(kTagSparsifier, enc.finish());
        }
        {
          Encoder enc(q, tally, dry);
          enc.label(kTree);
          enc.u32(static_cast<std::uint32_t>(sk.tree_edges.size()));
          for (const Edge& e : sk.tree_edges) enc.edge(e, idb);
          out.emplace_back(kTagTree, enc.finish());
        }
        {
          Encoder enc(q, tally, dry);
          enc.label(kLayout);
          enc.u32(static_cast<std::uint32_t>(sk.scales.size()));
          for (const StoredScale& st : sk.scales) {
            enc.label(kLayout);
            enc.u32(st.position);
            enc.f64(st.unit);
            enc.u32(static_cast<std::uint32_t>(st.components.size()));
            for (const ComponentSketch& comp : st.components) {
              enc.label(kLayout);
              enc.u32(static_cast<std::uint32_t>(comp.vertices.size()));
              for (Vertex v : comp.vertices) enc.bits(v, idb);
              write_basic_body(enc, comp.sketch);
            }
          }
          out.emplace_back(kTagScales, enc.finish());
        }
        return out;
      });
}

Encoded encode_sparsifier(const Sparsifier& h) {
  return encode(
      PayloadKind::sparsifier, false, 0, [&](Encoder& enc) { enc.u64(h.graph.num_vertices()); },
      [&](const Quant& q, Tally& tally, bool dry) {
        Encoder enc(q, tally, dry);
        write_sparsifier(enc, h, id_bits(h.graph.num_vertices()));
        return SectionList{{kTagSparsifier, enc.finish()}};
      });
}

std::size_t read_vertex_count(Decoder& dec) {
  const std::size_t at = dec.offset();
  const std::uint64_t n = dec.u64();
  if (n > std::numeric_limits<Vertex>::max()) throw DecodeError("vertex count out of range", at);
  return static_cast<std::size_t>(n);
}

double read_eps(Decoder& dec) {
  const std::size_t at = dec.offset();
  const double eps = dec.f64();
  if (!(eps > 0) || eps > 0.5) throw DecodeError("eps out of range", at);
  return eps;
}

}  // namespace

std::vector<std::uint8_t> make_container(PayloadKind kind, std::uint8_t flags, const SectionList& sections) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(flags);
  for (const auto& [tag, payload] : sections) {
    out.push_back(tag);
    const std::uint64_t len = payload.size();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

Container parse_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreamble) throw DecodeError("truncated header", bytes.size());
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (bytes[i] != kMagic[i]) throw DecodeError("bad magic", i);
  }
  Container c;
  const std::uint8_t kind = bytes[kMagic.size()];
  if (kind < 1 || kind > 5) throw DecodeError("unknown payload kind", kMagic.size());
  c.kind = static_cast<PayloadKind>(kind);
  c.flags = bytes[kMagic.size() + 1];
  if ((c.flags & ~kFlagQuantized) != 0) throw DecodeError("unknown flags", kMagic.size() + 1);
  std::size_t pos = kPreamble;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kSectionFrame) throw DecodeError("truncated section header", pos);
    Section s;
    s.tag = bytes[pos];
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len |= std::uint64_t{bytes[pos + 1 + i]} << (8 * i);
    pos += kSectionFrame;
    if (len > bytes.size() - pos) throw DecodeError("section length exceeds input", pos - 8);
    s.offset = pos;
    s.payload = bytes.subspan(pos, static_cast<std::size_t>(len));
    pos += static_cast<std::size_t>(len);
    c.sections.push_back(s);
  }
  return c;
}

const Section& require_section(const Container& c, std::uint8_t tag) {
  for (const Section& s : c.sections) {
    if (s.tag == tag) return s;
  }
  throw DecodeError("missing section " + std::to_string(tag), c.sections.empty() ? kPreamble : c.sections.back().offset);
}

nlohmann::json to_json(const SizeReport& r) {
  nlohmann::json j;
  j["bits_total"] = r.bits_total;
  j["bits_by_component"] = r.bits_by_component;
  j["stored_edge_count"] = r.stored_edge_count;
  j["n"] = r.n;
  j["eps"] = r.eps;
  j["quantized"] = r.quantized;
  return j;
}

std::vector<std::uint8_t> serialize(const Graph& g) {
  std::vector<std::uint8_t> head;
  {
    BitWriter w;
    w.write_u64(g.num_vertices());
    head = w.take();
  }
  BitWriter w;
  const unsigned idb = id_bits(g.num_vertices());
  w.write_u64(g.num_edges());
  for (const Edge& e : g.edges()) {
    w.write_bits(e.u, idb);
    w.write_bits(e.v, idb);
    w.write_f64(e.w);
  }
  w.align();
  return make_container(PayloadKind::graph, 0, {{kTagHeader, std::move(head)}, {kTagGraph, w.take()}});
}

Graph deserialize_graph(std::span<const std::uint8_t> bytes) {
  const Container c = expect(bytes, PayloadKind::graph);
  Decoder head(require_section(c, kTagHeader), {});
  const std::size_t n = read_vertex_count(head);
  head.done();
  Decoder body(require_section(c, kTagGraph), {});
  const unsigned idb = id_bits(n);
  const std::uint64_t m = body.count(2 * idb + 64, true);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) edges.push_back(body.edge(idb, n));
  body.done();
  return Graph(n, std::move(edges));
}

std::vector<std::uint8_t> serialize(const Sparsifier& h) { return encode_sparsifier(h).bytes; }

Sparsifier deserialize_sparsifier(std::span<const std::uint8_t> bytes) {
  const Container c = expect(bytes, PayloadKind::sparsifier);
  Decoder head(require_section(c, kTagHeader), {});
  const std::size_t n = read_vertex_count(head);
  head.done();
  Decoder body(require_section(c, kTagSparsifier), {});
  Sparsifier h = read_sparsifier(body, n);
  body.done();
  return h;
}

std::vector<std::uint8_t> serialize(const BasicSketch& sk, const CodecOptions& options) {
  return encode_basic(sk, options).bytes;
}

BasicSketch deserialize_basic(std::span<const std::uint8_t> bytes) {
  const Container c = expect(bytes, PayloadKind::basic_sketch);
  Decoder head(require_section(c, kTagHeader), {});
  const std::size_t n = read_vertex_count(head);
  const double eps = read_eps(head);
  const Quant q = read_quant(head, (c.flags & kFlagQuantized) != 0);
  head.done();
  Decoder body(require_section(c, kTagScales), q);
  BasicSketch sk = read_basic_body(body, n, eps);
  body.done();
  return sk;
}

std::vector<std::uint8_t> serialize(const CutSketch& sk, const CodecOptions& options) {
  return encode_sketch(sk, options).bytes;
}

CutSketch deserialize_sketch(std::span<const std::uint8_t> bytes) {
  const Container c = expect(bytes, PayloadKind::cut_sketch);
  CutSketch sk;
  Decoder head(require_section(c, kTagHeader), {});
  sk.n = read_vertex_count(head);
  sk.eps = read_eps(head);
  sk.seed = head.u64();
  sk.repetitions = head.u32();
  const Quant q = read_quant(head, (c.flags & kFlagQuantized) != 0);
  head.done();
  const unsigned idb = id_bits(sk.n);

  Decoder sp(require_section(c, kTagSparsifier), q);
  sk.sparsifier = read_sparsifier(sp, sk.n);
  sp.done();

  Decoder tree(require_section(c, kTagTree), q);
  const std::size_t tree_at = tree.offset();
  const std::uint64_t tree_count = tree.count(2 * idb + tree.weight_min_bits());
  if (sk.n > 0 && tree_count >= sk.n) throw DecodeError("tree has too many edges", tree_at);
  for (std::uint64_t i = 0; i < tree_count; ++i) sk.tree_edges.push_back(tree.edge(idb, sk.n));
  tree.done();

  Decoder sc(require_section(c, kTagScales), q);
  const std::uint64_t stored = sc.count(32 + 64 + 32);
  for (std::uint64_t i = 0; i < stored; ++i) {
    StoredScale st;
    const std::size_t at = sc.offset();
    st.position = sc.u32();
    if (st.position >= tree_count || (!sk.scales.empty() && st.position <= sk.scales.back().position)) {
      throw DecodeError("invalid stored position", at);
    }
    st.unit = sc.finite("unit");
    const std::uint64_t comps = sc.count(32);
    for (std::uint64_t k = 0; k < comps; ++k) {
      ComponentSketch comp;
      const std::size_t comp_at = sc.offset();
      const std::uint64_t size = sc.count(idb);
      if (size < 2 || size > sk.n) throw DecodeError("invalid component size", comp_at);
      for (std::uint64_t t = 0; t < size; ++t) {
        const auto v = static_cast<Vertex>(sc.bits(idb));
        if (v >= sk.n || (!comp.vertices.empty() && v <= comp.vertices.back())) {
          throw DecodeError("invalid component vertex", comp_at);
        }
        comp.vertices.push_back(v);
      }
      comp.sketch = read_basic_body(sc, comp.vertices.size(), sk.eps);
      st.components.push_back(std::move(comp));
    }
    sk.scales.push_back(std::move(st));
  }
  sc.done();
  return sk;
}

SizeReport size_report(const CutSketch& sk, const CodecOptions& options) {
  return make_report(encode_sketch(sk, options), sk.n, sk.eps, options.quantized);
}

SizeReport size_report(const BasicSketch& sk, const CodecOptions& options) {
  return make_report(encode_basic(sk, options), sk.n, sk.eps, options.quantized);
}

SizeReport size_report(const Sparsifier& h) {
  return make_report(encode_sparsifier(h), h.graph.num_vertices(), h.quality - 1, false);
}

}  // namespace cutsketch
