#include "cutsketch/partition.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cutsketch {

bool is_sparse_subset(std::size_t crossing, std::size_t subset_size, std::size_t part_size, double eps) {
  if (subset_size == 0 || 2 * subset_size > part_size) return false;
  const double limit = static_cast<double>(subset_size) / eps;
  return static_cast<double>(crossing) <= limit * (1 + 1e-12);
}

double cross_edge_budget(std::size_t n, double eps) {
  const double log_n = n <= 1 ? 0.0 : std::ceil(std::log2(static_cast<double>(n)));
  return static_cast<double>(n) * log_n / eps;
}

namespace {

constexpr std::size_t kPowerIterations = 300;

struct LocalGraph {
  std::vector<Vertex> names;                     // sorted global ids
  std::vector<std::vector<std::uint32_t>> nbrs;  // parallel edges repeated
  std::vector<std::uint32_t> degree;

  [[nodiscard]] std::size_t size() const { return names.size(); }
};

LocalGraph build_local(std::span<const Vertex> part, std::span<const Edge> edges) {
  LocalGraph lg;
  lg.names.assign(part.begin(), part.end());
  std::sort(lg.names.begin(), lg.names.end());
  const std::size_t k = lg.names.size();
  lg.nbrs.resize(k);
  lg.degree.assign(k, 0);
  auto local = [&](Vertex v) -> std::int64_t {
    auto it = std::lower_bound(lg.names.begin(), lg.names.end(), v);
    if (it == lg.names.end() || *it != v) return -1;
    return it - lg.names.begin();
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> inside;
  inside.reserve(edges.size());
  for (const Edge& e : edges) {
    const std::int64_t a = local(e.u);
    const std::int64_t b = local(e.v);
    if (a < 0 || b < 0) continue;
    inside.emplace_back(a, b);
    ++lg.degree[a];
    ++lg.degree[b];
  }
  for (std::size_t v = 0; v < k; ++v) lg.nbrs[v].reserve(lg.degree[v]);
  for (auto [a, b] : inside) {
    lg.nbrs[a].push_back(static_cast<std::uint32_t>(b));
    lg.nbrs[b].push_back(static_cast<std::uint32_t>(a));
  }
  return lg;
}

struct Candidate {
  std::vector<std::uint32_t> members;  // sorted local ids
  std::size_t crossing = 0;
};

// Lower sparsity wins, then smaller size, then lexicographically smaller.
bool better(const Candidate& a, const Candidate& b) {
  const auto lhs = static_cast<unsigned __int128>(a.crossing) * b.members.size();
  const auto rhs = static_cast<unsigned __int128>(b.crossing) * a.members.size();
  if (lhs != rhs) return lhs < rhs;
  if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
  return a.members < b.members;
}

void keep_best(std::optional<Candidate>& best, Candidate c) {
  if (!best || better(c, *best)) best = std::move(c);
}

std::size_t crossing_count(const LocalGraph& lg, const std::vector<std::uint32_t>& members) {
  std::vector<char> in(lg.size(), 0);
  for (auto v : members) in[v] = 1;
  std::size_t d = 0;
  for (auto v : members) {
    for (auto u : lg.nbrs[v]) d += in[u] ? 0 : 1;
  }
  return d;
}

std::optional<Candidate> component_candidate(const LocalGraph& lg) {
  const std::size_t k = lg.size();
  std::vector<std::int32_t> comp(k, -1);
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::uint32_t s = 0; s < k; ++s) {
    if (comp[s] >= 0) continue;
    const auto id = static_cast<std::int32_t>(comps.size());
    comps.emplace_back();
    std::vector<std::uint32_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comps.back().push_back(v);
      for (auto u : lg.nbrs[v]) {
        if (comp[u] < 0) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  if (comps.size() < 2) return std::nullopt;
  std::optional<Candidate> best;
  for (auto& c : comps) {
    if (2 * c.size() > k) continue;
    std::sort(c.begin(), c.end());
    keep_best(best, Candidate{std::move(c), 0});
  }
  return best;
}

std::optional<Candidate> singleton_candidate(const LocalGraph& lg, double eps) {
  std::optional<Candidate> best;
  for (std::uint32_t v = 0; v < lg.size(); ++v) {
    if (is_sparse_subset(lg.degree[v], 1, lg.size(), eps)) keep_best(best, Candidate{{v}, lg.degree[v]});
  }
  return best;
}

// Any P' with |P'| = a has crossing >= a (min_degree - (a - 1) max_mult).
bool degree_rules_out(const LocalGraph& lg, double eps) {
  const std::size_t k = lg.size();
  const std::uint32_t min_degree = *std::min_element(lg.degree.begin(), lg.degree.end());
  std::size_t max_mult = 1;
  std::vector<std::uint32_t> count(k, 0);
  for (std::size_t v = 0; v < k; ++v) {
    for (auto u : lg.nbrs[v]) max_mult = std::max<std::size_t>(max_mult, ++count[u]);
    for (auto u : lg.nbrs[v]) count[u] = 0;
  }
  const double lower = static_cast<double>(min_degree) - static_cast<double>((k / 2 - 1) * max_mult);
  return lower > 1.0 / eps * (1 + 1e-12);
}

std::optional<Candidate> exact_candidate(const LocalGraph& lg, double eps) {
  const std::size_t k = lg.size();
  // layer[t][v]: neighbours of v joined by more than t parallel edges.
  std::vector<std::vector<std::uint32_t>> layer;
  std::vector<std::uint32_t> mult(k, 0);
  for (std::size_t v = 0; v < k; ++v) {
    for (auto u : lg.nbrs[v]) {
      const std::uint32_t t = mult[u]++;
      if (layer.size() <= t) layer.emplace_back(k, 0U);
      layer[t][v] |= 1U << u;
    }
    for (auto u : lg.nbrs[v]) mult[u] = 0;
  }

  std::uint32_t best_mask = 0;
  std::size_t best_d = 0;
  std::size_t best_size = 0;
  std::uint32_t mask = 0;
  std::size_t size = 0;
  std::int64_t d = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    const unsigned v = static_cast<unsigned>(std::countr_zero(i));
    std::int64_t inner = 0;
    for (const auto& l : layer) inner += std::popcount(l[v] & mask);
    const std::int64_t delta = static_cast<std::int64_t>(lg.degree[v]) - 2 * inner;
    if (mask & (1U << v)) {
      mask &= ~(1U << v);
      --size;
      d -= delta;
    } else {
      mask |= 1U << v;
      ++size;
      d += delta;
    }
    if (!is_sparse_subset(static_cast<std::size_t>(d), size, k, eps)) continue;
    bool take = best_size == 0;
    if (!take) {
      const auto lhs = static_cast<std::uint64_t>(d) * best_size;
      const auto rhs = static_cast<std::uint64_t>(best_d) * size;
      if (lhs != rhs) {
        take = lhs < rhs;
      } else if (size != best_size) {
        take = size < best_size;
      } else {
        const std::uint32_t diff = mask ^ best_mask;
        take = (mask & diff & (0U - diff)) != 0;  // lowest differing vertex is ours
      }
    }
    if (take) {
      best_mask = mask;
      best_d = static_cast<std::size_t>(d);
      best_size = size;
    }
  }
  if (best_size == 0) return std::nullopt;
  Candidate c;
  for (std::uint32_t v = 0; v < k; ++v) {
    if (best_mask & (1U << v)) c.members.push_back(v);
  }
  c.crossing = best_d;
  return c;
}

// Best prefix of `order` with size in [1, k/2].
Candidate best_prefix(const LocalGraph& lg, const std::vector<std::uint32_t>& order) {
  const std::size_t k = lg.size();
  std::vector<char> in(k, 0);
  std::int64_t d = 0;
  std::size_t best_len = 0;
  std::int64_t best_d = 0;
  for (std::size_t len = 1; len <= k / 2; ++len) {
    const auto v = order[len - 1];
    std::int64_t inner = 0;
    for (auto u : lg.nbrs[v]) inner += in[u];
    in[v] = 1;
    d += static_cast<std::int64_t>(lg.degree[v]) - 2 * inner;
    if (best_len == 0 || d * static_cast<std::int64_t>(best_len) < best_d * static_cast<std::int64_t>(len)) {
      best_len = len;
      best_d = d;
    }
  }
  Candidate c;
  c.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
  std::sort(c.members.begin(), c.members.end());
  c.crossing = static_cast<std::size_t>(best_d);
  return c;
}

// Approximate Fiedler vector: power iteration on (2 max_degree) I - L with
// the constant vector projected out.
Eigen::VectorXd fiedler_vector(const LocalGraph& lg) {
  const auto k = static_cast<Eigen::Index>(lg.size());
  std::vector<Eigen::Triplet<double>> entries;
  double max_degree = 1;
  for (Eigen::Index v = 0; v < k; ++v) {
    max_degree = std::max<double>(max_degree, lg.degree[v]);
    entries.emplace_back(v, v, -static_cast<double>(lg.degree[v]));
    for (auto u : lg.nbrs[v]) entries.emplace_back(v, u, 1.0);
  }
  Eigen::SparseMatrix<double> shifted(k, k);
  shifted.setFromTriplets(entries.begin(), entries.end());
  const double shift = 2 * max_degree;

  // Deterministic start that is not orthogonal to the low modes.
  Eigen::VectorXd x(k);
  for (Eigen::Index v = 0; v < k; ++v) x(v) = std::cos(1.0 + 2.3 * static_cast<double>(v));
  double rayleigh = 0;
  for (std::size_t iter = 0; iter < kPowerIterations; ++iter) {
    x.array() -= x.mean();
    const double norm = x.norm();
    if (norm == 0) break;
    x /= norm;
    Eigen::VectorXd y = shifted * x + shift * x;
    const double next = x.dot(y);
    x = std::move(y);
    if (iter > 8 && std::abs(next - rayleigh) <= 1e-10 * shift) break;
    rayleigh = next;
  }
  x.array() -= x.mean();
  return x;
}

std::vector<Candidate> spectral_sweeps(const LocalGraph& lg) {
  const std::size_t k = lg.size();
  const Eigen::VectorXd fiedler = fiedler_vector(lg);
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return fiedler(a) < fiedler(b); });
  std::vector<Candidate> out;
  out.push_back(best_prefix(lg, order));
  std::reverse(order.begin(), order.end());
  out.push_back(best_prefix(lg, order));
  return out;
}

// Grow from a seed, each step adding the vertex that raises the crossing
// count least.
Candidate greedy_growth(const LocalGraph& lg, std::uint32_t seed) {
  const std::size_t k = lg.size();
  std::vector<std::int64_t> conn(k, 0);
  std::vector<char> in(k, 0);
  std::vector<std::uint32_t> order;
  order.reserve(k / 2);
  auto add = [&](std::uint32_t v) {
    in[v] = 1;
    order.push_back(v);
    for (auto u : lg.nbrs[v]) ++conn[u];
  };
  add(seed);
  while (order.size() < k / 2) {
    std::int64_t best_delta = 0;
    std::int64_t pick = -1;
    for (std::uint32_t v = 0; v < k; ++v) {
      if (in[v]) continue;
      const std::int64_t delta = static_cast<std::int64_t>(lg.degree[v]) - 2 * conn[v];
      if (pick < 0 || delta < best_delta) {
        best_delta = delta;
        pick = v;
      }
    }
    add(static_cast<std::uint32_t>(pick));
  }
  order.resize(k);  // tail unused by best_prefix
  return best_prefix(lg, order);
}

// Single-vertex add/remove moves while they lower the sparsity.
Candidate local_moves(const LocalGraph& lg, Candidate c) {
  const std::size_t k = lg.size();
  std::vector<char> in(k, 0);
  std::vector<std::int64_t> conn(k, 0);
  for (auto v : c.members) in[v] = 1;
  for (auto v : c.members) {
    for (auto u : lg.nbrs[v]) ++conn[u];
  }
  auto d = static_cast<std::int64_t>(c.crossing);
  auto size = static_cast<std::int64_t>(c.members.size());
  for (std::size_t iter = 0; iter < 4 * k; ++iter) {
    std::int64_t best_v = -1;
    std::int64_t best_d = d;
    std::int64_t best_size = size;
    for (std::uint32_t v = 0; v < k; ++v) {
      const std::int64_t delta = static_cast<std::int64_t>(lg.degree[v]) - 2 * conn[v];
      std::int64_t nd = 0;
      std::int64_t ns = 0;
      if (in[v]) {
        if (size <= 1) continue;
        nd = d - delta;
        ns = size - 1;
      } else {
        if (2 * (size + 1) > static_cast<std::int64_t>(k)) continue;
        nd = d + delta;
        ns = size + 1;
      }
      if (nd * best_size < best_d * ns) {
        best_v = v;
        best_d = nd;
        best_size = ns;
      }
    }
    if (best_v < 0) break;
    const auto v = static_cast<std::uint32_t>(best_v);
    in[v] = in[v] ? 0 : 1;
    for (auto u : lg.nbrs[v]) conn[u] += in[v] ? 1 : -1;
    d = best_d;
    size = best_size;
  }
  c.members.clear();
  for (std::uint32_t v = 0; v < k; ++v) {
    if (in[v]) c.members.push_back(v);
  }
  c.crossing = static_cast<std::size_t>(d);
  return c;
}

std::optional<Candidate> heuristic_candidate(const LocalGraph& lg) {
  const std::size_t k = lg.size();
  std::optional<Candidate> best;
  for (auto& c : spectral_sweeps(lg)) keep_best(best, std::move(c));

  std::vector<std::uint32_t> by_degree(k);
  std::iota(by_degree.begin(), by_degree.end(), 0U);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return lg.degree[a] < lg.degree[b]; });
  for (std::size_t i = 0; i < std::min<std::size_t>(3, k); ++i) keep_best(best, greedy_growth(lg, by_degree[i]));

  if (best) keep_best(best, local_moves(lg, *best));
  return best;
}

std::optional<std::vector<std::uint32_t>> search_local(const LocalGraph& lg, double eps) {
  const std::size_t k = lg.size();
  if (k < 2) return std::nullopt;

  std::optional<Candidate> found = component_candidate(lg);
  if (!found) found = singleton_candidate(lg, eps);
  if (!found && k >= 4 && !degree_rules_out(lg, eps)) {
    found = k <= kExactPartCap ? exact_candidate(lg, eps) : heuristic_candidate(lg);
  }
  if (!found) return std::nullopt;
  // Every answer is re-verified from scratch.
  const std::size_t d = crossing_count(lg, found->members);
  if (!is_sparse_subset(d, found->members.size(), k, eps)) return std::nullopt;
  return std::move(found->members);
}

}  // namespace

std::optional<std::vector<Vertex>> find_sparse_subset(std::span<const Vertex> part,
                                                      std::span<const Edge> class_edges, double eps) {
  const LocalGraph lg = build_local(part, class_edges);
  auto local = search_local(lg, eps);
  if (!local) return std::nullopt;
  std::vector<Vertex> out;
  out.reserve(local->size());
  for (auto v : *local) out.push_back(lg.names[v]);
  return out;
}

ClassPartition recursive_partition(std::size_t n, std::span<const Edge> class_edges, double eps) {
  if (!(eps > 0)) throw InputError("eps must be positive");
  struct Pending {
    std::vector<Vertex> vertices;  // sorted
    std::vector<Edge> edges;       // both endpoints inside
  };

  ClassPartition out;
  out.eps = eps;
  std::vector<std::vector<Vertex>> finals;
  std::vector<Pending> stack;
  {
    Pending all;
    all.vertices.resize(n);
    std::iota(all.vertices.begin(), all.vertices.end(), 0U);
    all.edges.assign(class_edges.begin(), class_edges.end());
    stack.push_back(std::move(all));
  }
  std::vector<char> mark(n, 0);

  while (!stack.empty()) {
    Pending p = std::move(stack.back());
    stack.pop_back();
    if (p.vertices.size() <= 1) {
      finals.push_back(std::move(p.vertices));
      continue;
    }
    const LocalGraph lg = build_local(p.vertices, p.edges);
    auto sub = search_local(lg, eps);
    if (!sub) {
      finals.push_back(std::move(p.vertices));
      continue;
    }
    Pending inner;
    Pending outer;
    for (auto v : *sub) mark[lg.names[v]] = 1;
    for (Vertex v : p.vertices) (mark[v] ? inner : outer).vertices.push_back(v);
    for (const Edge& e : p.edges) {
      if (mark[e.u] && mark[e.v]) {
        inner.edges.push_back(e);
      } else if (!mark[e.u] && !mark[e.v]) {
        outer.edges.push_back(e);
      } else {
        out.cross_edges.push_back(e);
      }
    }
    for (auto v : *sub) mark[lg.names[v]] = 0;
    stack.push_back(std::move(outer));
    stack.push_back(std::move(inner));
  }

  std::sort(finals.begin(), finals.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  out.partition.part_of.assign(n, 0);
  out.partition.num_parts = static_cast<std::uint32_t>(finals.size());
  for (std::uint32_t id = 0; id < finals.size(); ++id) {
    for (Vertex v : finals[id]) out.partition.part_of[v] = id;
  }

  if (static_cast<double>(out.cross_edges.size()) > cross_edge_budget(n, eps)) {
    throw std::logic_error("cross-edge budget exceeded: " + std::to_string(out.cross_edges.size()) + " > " +
                           std::to_string(cross_edge_budget(n, eps)));
  }
  return out;
}

namespace {

std::uint64_t hash_edges(std::span<const Edge> edges) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  };
  for (const Edge& e : edges) {
    mix(e.u);
    mix(e.v);
    mix(std::bit_cast<std::uint64_t>(e.w));
  }
  return h;
}

}  // namespace

Partition PartitionCache::get(std::size_t n, std::span<const Edge> class_edges, double eps) {
  const std::uint64_t key = hash_edges(class_edges) ^ std::bit_cast<std::uint64_t>(eps) ^ (n * 0x9e3779b97f4a7c15ULL);
  {
    std::lock_guard lock(mutex_);
    const auto [lo, hi] = entries_.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      const Entry& e = it->second;
      if (e.n == n && e.eps == eps && std::equal(e.edges.begin(), e.edges.end(), class_edges.begin(), class_edges.end())) {
        ++hits_;
        return e.partition;
      }
    }
  }
  Partition p = recursive_partition(n, class_edges, eps).partition;
  std::lock_guard lock(mutex_);
  entries_.emplace(key, Entry{n, eps, {class_edges.begin(), class_edges.end()}, p});
  return p;
}

std::size_t PartitionCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

bool certify_partition(const ClassPartition& cp, std::span<const Edge> class_edges) {
  const auto parts = cp.partition.parts();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> part_edges(parts.size());
  std::vector<std::uint32_t> slot(cp.partition.num_vertices(), 0);
  for (const auto& members : parts) {
    if (members.size() > kExactPartCap) {
      throw InputError("certify refused: part of size " + std::to_string(members.size()) + " exceeds " +
                       std::to_string(kExactPartCap));
    }
    for (std::uint32_t i = 0; i < members.size(); ++i) slot[members[i]] = i;
  }
  for (const Edge& e : class_edges) {
    const auto pu = cp.partition.part_of[e.u];
    if (pu == cp.partition.part_of[e.v]) part_edges[pu].push_back({slot[e.u], slot[e.v]});
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const std::size_t k = parts[p].size();
    for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (2 * size > k) continue;
      std::size_t crossing = 0;
      for (auto [a, b] : part_edges[p]) crossing += (((mask >> a) ^ (mask >> b)) & 1U);
      if (is_sparse_subset(crossing, size, k, cp.eps)) return false;
    }
  }
  return true;
}

}  // namespace cutsketch
