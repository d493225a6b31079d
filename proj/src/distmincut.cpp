#include "cutsketch/distmincut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "cutsketch/codec.hpp"
#include "cutsketch/oracles.hpp"
#include "cutsketch/parallel.hpp"
#include "cutsketch/rng.hpp"

namespace cutsketch {

std::vector<Graph> shard_edges(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw InputError("need at least one shard");
  std::vector<Graph> shards(k, Graph(g.num_vertices()));
  Rng rng = Rng(seed).derive("shard");
  for (const Edge& e : g.edges()) shards[rng.below(k)].add_edge(e.u, e.v, e.w);
  return shards;
}

ServerMessage build_message(const Graph& shard, std::uint32_t shard_id, double eps, std::uint64_t seed,
                            const ServerOptions& options) {
  const Rng lineage = Rng(seed).derive("server", shard_id);
  ServerMessage msg;
  msg.shard = shard_id;
  msg.sparsifier = sparsify(shard, kServerSparsifierQuality, lineage.derive("sparsifier").key(), options.kappa);
  msg.sketch = build_sketch(shard, eps, lineage.derive("sketch").key(), {options.kappa, options.repetitions, {}});
  return msg;
}

namespace {

enum MessageTag : std::uint8_t { kMsgHeader = 1, kMsgSparsifier = 2, kMsgSketch = 4 };

}  // namespace

std::vector<std::uint8_t> serialize(const ServerMessage& msg) {
  BitWriter head;
  head.write_u32(msg.shard);
  return make_container(PayloadKind::server_message, 0,
                        {{kMsgHeader, head.take()},
                         {kMsgSparsifier, serialize(msg.sparsifier)},
                         {kMsgSketch, serialize(msg.sketch)}});
}

ServerMessage deserialize_message(std::span<const std::uint8_t> bytes) {
  const Container c = parse_container(bytes);
  if (c.kind != PayloadKind::server_message) throw DecodeError("unexpected payload kind", 6);
  const Section& head = require_section(c, kMsgHeader);
  BitReader r(head.payload, head.offset);
  ServerMessage msg;
  msg.shard = r.read_u32();
  if (!r.at_end()) throw DecodeError("trailing bytes in section", r.offset());

  // Nested containers report offsets relative to themselves; shift them.
  auto nested = [](const Section& s, auto&& decode) {
    try {
      return decode(s.payload);
    } catch (const DecodeError& e) {
      throw DecodeError("in nested payload", s.offset + e.offset());
    }
  };
  msg.sparsifier = nested(require_section(c, kMsgSparsifier), [](auto b) { return deserialize_sparsifier(b); });
  msg.sketch = nested(require_section(c, kMsgSketch), [](auto b) { return deserialize_sketch(b); });
  if (msg.sparsifier.graph.num_vertices() != msg.sketch.n) {
    throw DecodeError("sparsifier and sketch disagree on vertex count", 0);
  }
  return msg;
}

namespace {

std::string set_key(const VertexSet& s) {
  std::string key(s.universe(), '0');
  for (std::size_t v = 0; v < s.universe(); ++v) {
    if (s.contains(static_cast<Vertex>(v))) key[v] = '1';
  }
  return key;
}

// One run: contract along edges in order of exponential keys until `target`
// groups remain, then report every split of the groups.
void contraction_run(const Graph& h, std::size_t target, Rng& rng, const std::function<void(const VertexSet&)>& emit) {
  const std::size_t n = h.num_vertices();
  std::vector<std::pair<double, std::uint32_t>> order;
  order.reserve(h.num_edges());
  for (std::uint32_t i = 0; i < h.num_edges(); ++i) {
    const double w = h.edge(i).w;
    if (w > 0) order.emplace_back(-std::log1p(-rng.uniform()) / w, i);
  }
  std::sort(order.begin(), order.end());
  UnionFind uf(n);
  for (const auto& [key, i] : order) {
    if (uf.components() <= target) break;
    uf.unite(h.edge(i).u, h.edge(i).v);
  }
  std::vector<std::uint32_t> group(n);
  std::vector<std::int64_t> id_of_root(n, -1);
  std::uint32_t groups = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& id = id_of_root[uf.find(static_cast<Vertex>(v))];
    if (id < 0) id = groups++;
    group[v] = static_cast<std::uint32_t>(id);
  }
  // Group 0 holds vertex 0 and stays on the S side.
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (groups - 1)); ++mask) {
    const std::uint64_t side = ~(mask << 1);
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v) {
      if ((side >> group[v]) & 1U) s.insert(static_cast<Vertex>(v));
    }
    emit(s);
  }
}

}  // namespace

std::vector<VertexSet> candidate_cuts(const Sparsifier& h, const CandidateOptions& options) {
  const Graph& g = h.graph;
  const std::size_t n = g.num_vertices();
  if (n < 2) return {};
  if (components(n, g.edges()).num_parts > 1) throw InputError("candidate cuts need a connected graph");
  const double lambda = min_cut_exact(g).value;
  const double threshold = options.factor * lambda * (1 - 1e-12);

  std::vector<VertexSet> out;
  if (n <= options.exact_cap) {
    for_each_cut(
        g,
        [&](const VertexSet& s, Weight w) {
          if (w < threshold) out.push_back(s);
        },
        options.exact_cap);
    return out;
  }

  const double nd = static_cast<double>(n);
  const auto runs = static_cast<std::size_t>(std::ceil(options.runs_constant * nd * nd * std::log(nd)));
  const std::size_t target = std::clamp<std::size_t>(options.contract_to, 2, std::min<std::size_t>(n, 16));
  std::unordered_set<std::string> seen;
  Rng rng = Rng(options.seed).derive("contraction");
  for (std::size_t run = 0; run < runs; ++run) {
    contraction_run(g, target, rng, [&](const VertexSet& s) {
      if (cut_weight(g, s) >= threshold) return;
      if (seen.insert(set_key(s)).second) out.push_back(s);
    });
  }
  return out;
}

CoordinatorResult coordinator_min_cut(const std::vector<std::vector<std::uint8_t>>& messages, double eps,
                                      const CandidateOptions& options) {
  check_eps(eps);
  if (messages.empty()) throw InputError("coordinator needs at least one message");
  CoordinatorResult result;
  std::vector<ServerMessage> decoded;
  decoded.reserve(messages.size());
  for (const auto& bytes : messages) {
    result.bytes_sent_per_server.push_back(bytes.size());
    decoded.push_back(deserialize_message(bytes));
  }
  Sparsifier merged = decoded.front().sparsifier;
  for (std::size_t i = 1; i < decoded.size(); ++i) {
    if (decoded[i].sketch.n != decoded.front().sketch.n) throw InputError("messages disagree on vertex count");
    merged = merge(merged, decoded[i].sparsifier);
  }

  const std::vector<VertexSet> candidates = candidate_cuts(merged, options);
  result.candidates_evaluated = candidates.size();
  std::vector<double> estimate(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t c) {
    double total = 0;
    for (const ServerMessage& msg : decoded) total += query(msg.sketch, candidates[c]).value;
    estimate[c] = total;
  });
  result.mincut_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (estimate[c] < result.mincut_estimate) {
      result.mincut_estimate = estimate[c];
      result.witness = candidates[c];
    }
  }
  if (candidates.empty()) result.mincut_estimate = 0;
  return result;
}

CoordinatorResult distributed_min_cut(const Graph& g, std::size_t k, double eps, std::uint64_t seed,
                                      const ServerOptions& server, CandidateOptions candidates) {
  const std::vector<Graph> shards = shard_edges(g, k, seed);
  std::vector<std::vector<std::uint8_t>> messages(k);
  parallel_for(k, [&](std::size_t i) {
    messages[i] = serialize(build_message(shards[i], static_cast<std::uint32_t>(i), eps, seed, server));
  });
  candidates.seed = Rng(seed).derive("candidates").key();
  return coordinator_min_cut(messages, eps, candidates);
}

}  // namespace cutsketch
