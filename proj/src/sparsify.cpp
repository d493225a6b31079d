#include "cutsketch/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "cutsketch/rng.hpp"

namespace cutsketch {

std::vector<Weight> forest_indices(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::uint32_t>> incident(n);
  for (std::uint32_t i = 0; i < g.num_edges(); ++i) {
    incident[g.edge(i).u].push_back(i);
    incident[g.edge(i).v].push_back(i);
  }

  std::vector<Weight> index(g.num_edges(), 0);
  std::vector<Weight> attach(n, 0);
  std::vector<char> scanned(n, 0);
  // Max-heap on attachment; ties go to the smaller vertex id.
  using Item = std::pair<Weight, Vertex>;
  auto lower = [](const Item& a, const Item& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(lower)> heap(lower);
  Vertex next_fresh = 0;

  for (std::size_t done = 0; done < n; ++done) {
    Vertex x = 0;
    for (;;) {
      if (heap.empty()) {
        while (scanned[next_fresh]) ++next_fresh;
        x = next_fresh;
        break;
      }
      auto [a, v] = heap.top();
      heap.pop();
      if (!scanned[v] && a == attach[v]) {
        x = v;
        break;
      }
    }
    scanned[x] = 1;
    for (std::uint32_t ei : incident[x]) {
      const Edge& e = g.edge(ei);
      const Vertex y = e.u == x ? e.v : e.u;
      if (scanned[y]) continue;
      attach[y] += e.w;
      index[ei] = attach[y];
      heap.push({attach[y], y});
    }
  }
  return index;
}

std::vector<double> sampling_probabilities(const Graph& g, double rho, double kappa) {
  if (!(rho > 1)) throw InputError("sparsifier quality rho must exceed 1, got " + std::to_string(rho));
  if (!(kappa > 0)) throw InputError("sparsifier kappa must be positive");
  const double eps = rho - 1;
  const double log_n = std::log(std::max<double>(2.0, static_cast<double>(g.num_vertices())));
  const double numerator = kappa * log_n * log_n / (eps * eps);
  const std::vector<Weight> index = forest_indices(g);
  std::vector<double> p(g.num_edges(), 1.0);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Weight w = g.edge(i).w;
    if (w > 0) p[i] = std::min(1.0, numerator * w / index[i]);
  }
  return p;
}

Sparsifier sparsify(const Graph& g, double rho, std::uint64_t seed, double kappa) {
  const std::vector<double> p = sampling_probabilities(g, rho, kappa);
  Rng rng = Rng(seed).derive("sparsify");
  Sparsifier h{Graph(g.num_vertices()), rho, seed};
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    if (e.w <= 0) continue;
    const double u = rng.uniform();
    if (p[i] >= 1) {
      h.graph.add_edge(e.u, e.v, e.w);
    } else if (u < p[i]) {
      h.graph.add_edge(e.u, e.v, e.w / p[i]);
    }
  }
  return h;
}

Sparsifier merge(const Sparsifier& a, const Sparsifier& b) {
  if (a.graph.num_vertices() != b.graph.num_vertices()) {
    throw InputError("cannot merge sparsifiers over " + std::to_string(a.graph.num_vertices()) +
                     " and " + std::to_string(b.graph.num_vertices()) + " vertices");
  }
  std::vector<Edge> edges(a.graph.edges().begin(), a.graph.edges().end());
  edges.insert(edges.end(), b.graph.edges().begin(), b.graph.edges().end());
  return {Graph(a.graph.num_vertices(), std::move(edges)), std::max(a.quality, b.quality), a.seed};
}

}  // namespace cutsketch
