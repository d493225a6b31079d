#include "cutsketch/foreach_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cutsketch/parallel.hpp"
#include "cutsketch/rng.hpp"

namespace cutsketch {

int weight_class(Weight reweighted) {
  // (5 2^-i, 5 2^-i+1] <=> 5 / w in [2^(i-1), 2^i) <=> i = frexp exponent of 5 / w.
  int exp = 0;
  std::frexp(kDiscardAbove / reweighted, &exp);
  return exp;
}

std::uint32_t samples_per_vertex(double eps) {
  return static_cast<std::uint32_t>(std::ceil(1.0 / eps - 1e-9));
}

void check_eps(double eps) {
  if (!(eps > 0) || eps > 0.5) throw InputError("eps must lie in (0, 1/2], got " + std::to_string(eps));
}

ImportanceSample importance_sample(const Graph& g, double c, double eps, std::uint64_t seed) {
  check_eps(eps);
  if (!(c > 0)) throw InputError("scale c must be positive");
  const double eps_sq = eps * eps;
  Rng rng = Rng(seed).derive("importance");
  ImportanceSample out{g.num_vertices(), c, {}};
  for (const Edge& e : g.edges()) {
    const double w = e.w / c;
    if (w <= 0 || w > kDiscardAbove) continue;
    const double p = std::min(w / eps_sq, 1.0);
    if (p >= 1) {
      out.kept.push_back({e.u, e.v, w});
    } else if (rng.uniform() < p) {
      out.kept.push_back({e.u, e.v, w / p});
    }
  }
  return out;
}

std::vector<std::pair<int, std::vector<Edge>>> split_classes(std::span<const Edge> kept) {
  std::map<int, std::vector<Edge>> by_class;
  for (const Edge& e : kept) by_class[weight_class(e.w)].push_back(e);
  return {by_class.begin(), by_class.end()};
}

void ClassSketch::finalize() {
  intra_weight.assign(vertices.size(), 0);
  sample_offset.assign(vertices.size() + 1, 0);
  std::map<Vertex, Weight> cross_sum;
  for (const Edge& e : cross_edges) {
    cross_sum[e.u] += e.w;
    cross_sum[e.v] += e.w;
  }
  std::uint32_t offset = 0;
  for (std::size_t r = 0; r < vertices.size(); ++r) {
    const auto it = cross_sum.find(vertices[r].vertex);
    intra_weight[r] = vertices[r].weighted_degree - (it == cross_sum.end() ? 0.0 : it->second);
    sample_offset[r] = offset;
    if (vertices[r].intra_degree > 0) offset += samples_per_vertex;
  }
  sample_offset[vertices.size()] = offset;
}

ClassSketch build_class(std::size_t n, int index, std::span<const Edge> class_edges, const Partition& partition,
                        double eps, std::uint64_t seed) {
  ClassSketch cs;
  cs.index = index;
  cs.samples_per_vertex = samples_per_vertex(eps);

  std::vector<Weight> wdeg(n, 0);
  std::vector<std::vector<std::uint32_t>> intra(n);
  std::vector<char> touched(n, 0);
  for (std::uint32_t i = 0; i < class_edges.size(); ++i) {
    const Edge& e = class_edges[i];
    wdeg[e.u] += e.w;
    wdeg[e.v] += e.w;
    touched[e.u] = touched[e.v] = 1;
    if (partition.part_of[e.u] == partition.part_of[e.v]) {
      intra[e.u].push_back(i);
      intra[e.v].push_back(i);
    } else {
      cs.cross_edges.push_back(e);
    }
  }

  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> dense(partition.num_parts, kUnset);
  Rng rng = Rng(seed).derive("incident", static_cast<std::uint64_t>(index));
  for (Vertex v = 0; v < n; ++v) {
    if (!touched[v]) continue;
    std::uint32_t& id = dense[partition.part_of[v]];
    if (id == kUnset) id = cs.num_parts++;
    cs.vertices.push_back({v, id, wdeg[v], static_cast<std::uint32_t>(intra[v].size())});
    if (intra[v].empty()) continue;
    for (std::uint32_t t = 0; t < cs.samples_per_vertex; ++t) {
      const Edge& e = class_edges[intra[v][rng.below(intra[v].size())]];
      cs.samples.push_back({v, e.u == v ? e.v : e.u, e.w});
    }
  }
  cs.finalize();
  return cs;
}

ClassSketch build_class(std::size_t n, int index, std::span<const Edge> class_edges, double eps,
                        std::uint64_t seed) {
  return build_class(n, index, class_edges, recursive_partition(n, class_edges, eps).partition, eps, seed);
}

ScaleStructure build_scale(const Graph& g, double c, double eps, std::uint64_t seed, PartitionCache* cache,
                           const ClassObserver* observer) {
  const ImportanceSample sample = importance_sample(g, c, eps, seed);
  ScaleStructure ds;
  ds.c = c;
  ds.exponent = static_cast<int>(std::lround(std::log(c) / std::log(kScaleBase)));
  for (const auto& [index, edges] : split_classes(sample.kept)) {
    const std::size_t n = g.num_vertices();
    const Partition partition = cache ? cache->get(n, edges, eps) : recursive_partition(n, edges, eps).partition;
    if (observer && *observer) (*observer)(edges, partition, eps);
    ds.classes.push_back(build_class(n, index, edges, partition, eps, seed));
  }
  return ds;
}

namespace {

// Per-part sizes and |S cap P| over recorded vertices.
struct PartCounts {
  std::vector<std::uint32_t> size;
  std::vector<std::uint32_t> in_s;

  // True when A = S cap P (otherwise A is the complement side).
  [[nodiscard]] bool a_is_s(std::uint32_t p) const { return 2 * in_s[p] <= size[p]; }
};

PartCounts count_parts(const ClassSketch& cs, const VertexSet& s) {
  PartCounts pc{std::vector<std::uint32_t>(cs.num_parts, 0), std::vector<std::uint32_t>(cs.num_parts, 0)};
  for (const VertexRecord& r : cs.vertices) {
    ++pc.size[r.part];
    pc.in_s[r.part] += s.contains(r.vertex) ? 1 : 0;
  }
  return pc;
}

double record_term(const ClassSketch& cs, std::size_t r, bool a_is_s, const VertexSet& s) {
  const VertexRecord& rec = cs.vertices[r];
  double inside = 0;
  for (std::uint32_t t = cs.sample_offset[r]; t < cs.sample_offset[r + 1]; ++t) {
    const Edge& e = cs.samples[t];
    if (s.contains(e.v) == a_is_s) inside += e.w;
  }
  const double scale = static_cast<double>(rec.intra_degree) / cs.samples_per_vertex;
  return cs.intra_weight[r] - scale * inside;
}

}  // namespace

double estimate_part(const ClassSketch& cs, std::uint32_t part, const VertexSet& s) {
  const PartCounts pc = count_parts(cs, s);
  if (part >= cs.num_parts) return 0;
  const bool a_is_s = pc.a_is_s(part);
  double total = 0;
  for (std::size_t r = 0; r < cs.vertices.size(); ++r) {
    const VertexRecord& rec = cs.vertices[r];
    if (rec.part == part && s.contains(rec.vertex) == a_is_s) total += record_term(cs, r, a_is_s, s);
  }
  return total;
}

ClassTerms estimate_class(const ClassSketch& cs, const VertexSet& s) {
  ClassTerms t;
  t.index = cs.index;
  for (const Edge& e : cs.cross_edges) {
    if (s.contains(e.u) != s.contains(e.v)) t.cross += e.w;
  }
  const PartCounts pc = count_parts(cs, s);
  for (std::size_t r = 0; r < cs.vertices.size(); ++r) {
    const VertexRecord& rec = cs.vertices[r];
    const bool a_is_s = pc.a_is_s(rec.part);
    if (s.contains(rec.vertex) == a_is_s) t.intra += record_term(cs, r, a_is_s, s);
  }
  return t;
}

Estimate estimate_cut(const ScaleStructure& ds, const VertexSet& s) {
  Estimate est;
  est.scale = ds.c;
  if (s.trivial()) {
    est.trivial_query = true;
    return est;
  }
  double scaled = 0;
  for (const ClassSketch& cs : ds.classes) {
    ClassTerms t = estimate_class(cs, s);
    scaled += t.cross + t.intra;
    est.terms.push_back(t);
  }
  est.value = scaled * ds.c;
  return est;
}

ScaleChoice choose_scale(double c_tilde, int lo, int hi) {
  if (!(c_tilde > 0)) throw InputError("scale choice needs a positive cut estimate");
  const double target = std::log(c_tilde) / std::log(kScaleBase) - 2.0;
  const auto wanted = static_cast<int>(std::llround(target));
  ScaleChoice choice{std::clamp(wanted, lo, hi), false};
  choice.clamped = choice.exponent != wanted;
  return choice;
}

std::pair<int, int> scale_range(const Graph& g, std::size_t universe) {
  double w_min = 0;
  double total = 0;
  for (const Edge& e : g.edges()) {
    if (e.w <= 0) continue;
    w_min = w_min == 0 ? e.w : std::min(w_min, e.w);
    total += e.w;
  }
  if (total == 0) return {0, -1};
  const double log_base = std::log(kScaleBase);
  const double u = static_cast<double>(std::max<std::size_t>(universe, 1));
  // A selectable scale lies in [min cut / 1.4^4, total weight].
  const int cap = static_cast<int>(std::floor(5.0 * std::log(u) / log_base + 1e-9));
  const int lo = std::max(0, static_cast<int>(std::floor(std::log(w_min) / log_base)) - 3);
  const int hi = std::min(cap, static_cast<int>(std::ceil(std::log(total) / log_base)));
  return {std::min(lo, std::max(hi, 0)), std::max(hi, 0)};
}

BasicSketch build_basic(const Graph& g, double eps, std::uint64_t seed, const BasicOptions& options) {
  check_eps(eps);
  if (options.repetitions == 0) throw InputError("need at least one repetition");
  const Rng root(seed);
  BasicSketch sk;
  sk.n = g.num_vertices();
  sk.eps = eps;
  sk.sparsifier = sparsify(g, kScaleSparsifierQuality, root.derive("scale-sparsifier").key(), options.kappa);
  std::tie(sk.lo, sk.hi) = scale_range(g, options.universe == 0 ? g.num_vertices() : options.universe);
  const std::size_t per_rep = sk.hi >= sk.lo ? static_cast<std::size_t>(sk.hi - sk.lo + 1) : 0;
  sk.repetitions.assign(options.repetitions, std::vector<ScaleStructure>(per_rep));
  // Scales where every edge survives with probability 1 repeat the same
  // class edge lists in every repetition.
  PartitionCache cache;
  parallel_for(options.repetitions * per_rep, [&](std::size_t job) {
    const std::size_t rep = job / per_rep;
    const int exponent = sk.lo + static_cast<int>(job % per_rep);
    const std::uint64_t scale_seed = root.derive("repetition", rep).derive("scale", exponent).key();
    ScaleStructure ds = build_scale(g, std::pow(kScaleBase, exponent), eps, scale_seed, &cache, &options.observer);
    ds.exponent = exponent;
    sk.repetitions[rep][job % per_rep] = std::move(ds);
  });
  return sk;
}

Estimate query_basic(const BasicSketch& sk, const VertexSet& s) {
  Estimate est;
  if (s.universe() != sk.n) throw InputError("query set does not match sketch vertex count");
  if (s.trivial()) {
    est.trivial_query = true;
    return est;
  }
  const double c_tilde = approx_cut(sk.sparsifier, s);
  if (c_tilde <= 0 || sk.hi < sk.lo) {
    est.zero_cut = true;
    return est;
  }
  const ScaleChoice choice = choose_scale(c_tilde, sk.lo, sk.hi);
  const auto slot = static_cast<std::size_t>(choice.exponent - sk.lo);
  std::vector<Estimate> all;
  all.reserve(sk.repetitions.size());
  for (const auto& rep : sk.repetitions) all.push_back(estimate_cut(rep[slot], s));
  const std::size_t mid = (all.size() - 1) / 2;
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mid), all.end(),
                   [](const Estimate& a, const Estimate& b) { return a.value < b.value; });
  est = std::move(all[mid]);
  est.clamped = choice.clamped;
  return est;
}

}  // namespace cutsketch
