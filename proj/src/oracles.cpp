#include "cutsketch/oracles.hpp"

#include <limits>
#include <string>

namespace cutsketch {

MinCut min_cut_exact(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw InputError("minimum cut needs at least two vertices");

  const Partition comps = components(n, g.edges());
  if (comps.num_parts > 1) {
    VertexSet side(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (comps.part_of[v] == 0) side.insert(static_cast<Vertex>(v));
    }
    return {0, side};
  }

  // Dense Stoer-Wagner; merged[v] lists the original vertices folded into v.
  std::vector<std::vector<Weight>> adj(n, std::vector<Weight>(n, 0));
  for (const Edge& e : g.edges()) {
    adj[e.u][e.v] += e.w;
    adj[e.v][e.u] += e.w;
  }
  std::vector<std::vector<Vertex>> merged(n);
  for (std::size_t v = 0; v < n; ++v) merged[v] = {static_cast<Vertex>(v)};
  std::vector<std::size_t> alive(n);
  for (std::size_t v = 0; v < n; ++v) alive[v] = v;

  MinCut best;
  best.value = std::numeric_limits<Weight>::infinity();
  std::vector<Weight> attach(n);
  std::vector<char> added(n);

  while (alive.size() > 1) {
    std::fill(attach.begin(), attach.end(), 0);
    std::fill(added.begin(), added.end(), 0);
    std::size_t prev = alive[0];
    std::size_t last = alive[0];
    for (std::size_t step = 0; step < alive.size(); ++step) {
      std::size_t pick = n;
      for (std::size_t v : alive) {
        if (!added[v] && (pick == n || attach[v] > attach[pick])) pick = v;
      }
      added[pick] = 1;
      prev = last;
      last = pick;
      for (std::size_t v : alive) {
        if (!added[v]) attach[v] += adj[pick][v];
      }
    }
    if (attach[last] < best.value) {
      best.value = attach[last];
      best.side = VertexSet::from_list(n, merged[last]);
    }
    // Fold `last` into `prev`.
    for (std::size_t v : alive) {
      adj[prev][v] += adj[last][v];
      adj[v][prev] = adj[prev][v];
    }
    adj[prev][prev] = 0;
    merged[prev].insert(merged[prev].end(), merged[last].begin(), merged[last].end());
    std::erase(alive, last);
  }
  best.side = best.side.canonical();
  return best;
}

void for_each_cut(const Graph& g, const std::function<void(const VertexSet&, Weight)>& visit,
                  std::size_t max_n) {
  const std::size_t n = g.num_vertices();
  if (n > max_n) {
    throw InputError("cut enumeration refused: n = " + std::to_string(n) + " exceeds cap " +
                     std::to_string(max_n));
  }
  if (n < 2) return;
  if (n > 63) throw InputError("cut enumeration limited to 63 vertices");

  std::vector<std::vector<std::pair<Vertex, Weight>>> incident(n);
  for (const Edge& e : g.edges()) {
    incident[e.u].push_back({e.v, e.w});
    incident[e.v].push_back({e.u, e.w});
  }

  // Vertex 0 stays in S; the Gray code moves vertices 1..n-1 into the
  // complement. Starting from S = V the first visited set is proper.
  VertexSet s(n);
  for (std::size_t v = 0; v < n; ++v) s.insert(static_cast<Vertex>(v));
  long double cut = 0;
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto v = static_cast<Vertex>(__builtin_ctzll(i) + 1);
    const bool was_in = s.contains(v);
    for (const auto& [u, w] : incident[v]) {
      const bool same_before = s.contains(u) == was_in;
      cut += same_before ? w : -static_cast<long double>(w);
    }
    if (was_in) {
      s.erase(v);
    } else {
      s.insert(v);
    }
    visit(s, static_cast<Weight>(cut));
  }
}

std::vector<std::pair<VertexSet, Weight>> enumerate_cuts(const Graph& g, std::size_t max_n) {
  std::vector<std::pair<VertexSet, Weight>> out;
  for_each_cut(g, [&](const VertexSet& s, Weight w) { out.emplace_back(s, w); }, max_n);
  return out;
}

}  // namespace cutsketch
