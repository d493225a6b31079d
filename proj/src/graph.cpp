#include "cutsketch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cutsketch {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  for (const Edge& e : edges_) check(e);
}

void Graph::check(const Edge& e) const {
  if (e.u >= n_ || e.v >= n_) {
    throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                     ") out of range for n = " + std::to_string(n_));
  }
  if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
  if (!std::isfinite(e.w) || e.w < 0) {
    throw InputError("edge weight must be finite and non-negative");
  }
}

void Graph::add_edge(Vertex u, Vertex v, Weight w) {
  Edge e{u, v, w};
  check(e);
  edges_.push_back(e);
}

Weight Graph::total_weight() const {
  Weight total = 0;
  for (const Edge& e : edges_) total += e.w;
  return total;
}

VertexSet VertexSet::from_list(std::size_t n, std::span<const Vertex> ids) {
  VertexSet s(n);
  for (Vertex v : ids) {
    if (v >= n) throw InputError("vertex " + std::to_string(v) + " out of range");
    s.insert(v);
  }
  return s;
}

VertexSet VertexSet::from_mask(std::size_t n, std::uint64_t mask) {
  VertexSet s(n);
  for (std::size_t v = 0; v < n && v < 64; ++v) {
    if ((mask >> v) & 1U) s.insert(static_cast<Vertex>(v));
  }
  return s;
}

std::size_t VertexSet::size() const {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1));
}

bool VertexSet::trivial() const {
  const std::size_t k = size();
  return k == 0 || k == member_.size();
}

VertexSet VertexSet::complement() const {
  VertexSet c(member_.size());
  for (std::size_t v = 0; v < member_.size(); ++v) c.member_[v] = member_[v] ? 0 : 1;
  return c;
}

VertexSet VertexSet::canonical() const {
  if (member_.empty() || member_[0]) return *this;
  return complement();
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < member_.size(); ++v) {
    if (member_[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::vector<std::vector<Vertex>> Partition::parts() const {
  std::vector<std::vector<Vertex>> out(num_parts);
  for (std::size_t v = 0; v < part_of.size(); ++v) out[part_of[v]].push_back(static_cast<Vertex>(v));
  return out;
}

Weight cut_weight(std::span<const Edge> edges, const VertexSet& s) {
  Weight total = 0;
  for (const Edge& e : edges) {
    if (e.u >= s.universe() || e.v >= s.universe()) throw InputError("edge outside query universe");
    if (s.contains(e.u) != s.contains(e.v)) total += e.w;
  }
  return total;
}

Weight cut_weight(const Graph& g, const VertexSet& s) {
  if (s.universe() != g.num_vertices()) {
    throw InputError("query set over " + std::to_string(s.universe()) + " vertices, graph has " +
                     std::to_string(g.num_vertices()));
  }
  return cut_weight(g.edges(), s);
}

Partition components(std::size_t n, std::span<const Edge> edges) {
  UnionFind uf(n);
  for (const Edge& e : edges) uf.unite(e.u, e.v);
  Partition p;
  p.part_of.assign(n, 0);
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> id_of_root(n, kUnset);
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex r = uf.find(static_cast<Vertex>(v));
    if (id_of_root[r] == kUnset) id_of_root[r] = p.num_parts++;
    p.part_of[v] = id_of_root[r];
  }
  return p;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  constexpr auto kAbsent = static_cast<Vertex>(-1);
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] != kAbsent && local[e.v] != kAbsent) edges.push_back({local[e.u], local[e.v], e.w});
  }
  return Graph(vertices.size(), std::move(edges));
}

}  // namespace cutsketch
