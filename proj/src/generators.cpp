#include "cutsketch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cutsketch/rng.hpp"

namespace cutsketch {

Graph gen_complete(std::size_t n, Weight w) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v, w);
  }
  return g;
}

Graph gen_path(std::size_t n, Weight w) {
  Graph g(n);
  for (Vertex v = 1; v < n; ++v) g.add_edge(v - 1, v, w);
  return g;
}

Graph gen_cycle(std::size_t n, Weight w) {
  Graph g = gen_path(n, w);
  if (n >= 3) g.add_edge(static_cast<Vertex>(n - 1), 0, w);
  return g;
}

Graph gen_star(std::size_t n) {
  Graph g(n);
  for (Vertex v = 1; v < n; ++v) g.add_edge(0, v, 1);
  return g;
}

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("gnp");
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) g.add_edge(u, v, 1);
    }
  }
  return g;
}

Graph gen_dumbbell(std::size_t n, Weight clique_w, Weight bridge_w) {
  const std::size_t a = (n + 1) / 2;
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if ((u < a) == (v < a)) g.add_edge(u, v, clique_w);
    }
  }
  if (a < n) g.add_edge(0, static_cast<Vertex>(a), bridge_w);
  return g;
}

Graph gen_weighted_range(std::size_t n, double p, double w_max, std::uint64_t seed) {
  if (w_max < 1) throw InputError("w_max must be >= 1");
  Rng keep = Rng(seed).derive("weighted-keep");
  Rng weight = Rng(seed).derive("weighted-weight");
  const double log_max = std::log(w_max);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (keep.uniform() < p) {
        const double w = std::clamp(std::round(std::exp(weight.uniform() * log_max)), 1.0, w_max);
        g.add_edge(u, v, w);
      }
    }
  }
  return g;
}

namespace {

std::size_t block_side(double eps) {
  if (!(eps > 0) || eps >= 1) throw InputError("eps must lie in (0, 1)");
  const double inv_sq = 1.0 / (eps * eps);
  const auto k = static_cast<std::size_t>(std::llround(inv_sq));
  if (std::abs(inv_sq - static_cast<double>(k)) > 1e-6 * inv_sq || k < 2 || k % 2 != 0) {
    auto even = std::max<std::size_t>(2, 2 * static_cast<std::size_t>(std::llround(inv_sq / 2)));
    throw InputError("1/eps^2 = " + std::to_string(inv_sq) +
                     " must be an even integer; nearest admissible eps = " +
                     std::to_string(1.0 / std::sqrt(static_cast<double>(even))));
  }
  return k;
}

}  // namespace

Graph gen_hard_instance(std::size_t n, double eps, std::uint64_t seed) {
  const std::size_t k = block_side(eps);
  const std::size_t block = 2 * k;
  if (n == 0 || n % block != 0) {
    const std::size_t nearest = std::max(block, (n + block / 2) / block * block);
    throw InputError("hard instance needs eps^2 n / 2 integral: n = " + std::to_string(n) +
                     " inadmissible for eps = " + std::to_string(eps) + "; nearest admissible n = " +
                     std::to_string(nearest));
  }
  Rng root = Rng(seed).derive("hard-instance");
  Graph g(n);
  std::vector<Vertex> right(k);
  for (std::size_t b = 0; b < n / block; ++b) {
    const auto base = static_cast<Vertex>(b * block);
    for (std::size_t a = 0; a < k; ++a) {
      // Uniform half of the right side: partial Fisher-Yates.
      Rng rng = root.derive("row", b * k + a);
      std::iota(right.begin(), right.end(), 0U);
      for (std::size_t i = 0; i < k / 2; ++i) {
        std::swap(right[i], right[i + rng.below(k - i)]);
      }
      std::sort(right.begin(), right.begin() + static_cast<std::ptrdiff_t>(k / 2));
      for (std::size_t i = 0; i < k / 2; ++i) {
        g.add_edge(base + static_cast<Vertex>(a), base + static_cast<Vertex>(k + right[i]), 1);
      }
    }
  }
  return g;
}

Graph gen_probe_instance(std::size_t n, std::size_t block, std::uint64_t seed) {
  if (block == 0 || n % (2 * block) != 0) {
    throw InputError("probe instance needs n divisible by 2D: n = " + std::to_string(n) +
                     ", D = " + std::to_string(block));
  }
  Rng rng = Rng(seed).derive("probe-instance");
  Graph g(n);
  for (std::size_t b = 0; b < n / (2 * block); ++b) {
    const auto base = static_cast<Vertex>(2 * block * b);
    for (std::size_t i = 0; i < block; ++i) {
      for (std::size_t j = 0; j < block; ++j) {
        if (rng() & 1U) {
          g.add_edge(base + static_cast<Vertex>(i), base + static_cast<Vertex>(block + j), 1);
        }
      }
    }
  }
  return g;
}

}  // namespace cutsketch
