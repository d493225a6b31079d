#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cutsketch/graph.hpp"
#include "cutsketch/partition.hpp"
#include "cutsketch/sparsify.hpp"

namespace cutsketch {

/// Scales are powers of this base.
inline constexpr double kScaleBase = 1.4;
/// After rescaling to c = 1, heavier edges are dropped.
inline constexpr double kDiscardAbove = 5.0;
/// Quality of the sparsifier used to pick a scale.
inline constexpr double kScaleSparsifierQuality = 1.4;

/// Class i holds reweighted edges with weight in (5 2^-i, 5 2^-i+1].
int weight_class(Weight reweighted);
/// Number of incident samples stored per vertex: ceil(1/eps).
std::uint32_t samples_per_vertex(double eps);
/// Throws InputError unless 0 < eps <= 1/2.
void check_eps(double eps);

/// Surviving edges after discarding and importance sampling at scale c.
/// Weights are reweighted and expressed in units of c.
struct ImportanceSample {
  std::size_t n = 0;
  double c = 1;
  std::vector<Edge> kept;
};

ImportanceSample importance_sample(const Graph& g, double c, double eps, std::uint64_t seed);

/// Edges of each nonempty class, ascending by class index.
std::vector<std::pair<int, std::vector<Edge>>> split_classes(std::span<const Edge> kept);

struct VertexRecord {
  Vertex vertex = 0;
  std::uint32_t part = 0;           // dense among recorded vertices
  Weight weighted_degree = 0;       // all class edges at the vertex
  std::uint32_t intra_degree = 0;   // class edges inside its part

  friend bool operator==(const VertexRecord&, const VertexRecord&) = default;
};

/// One weight class of a scale structure. Vertices without class edges are
/// omitted and behave as singleton parts.
struct ClassSketch {
  int index = 0;
  std::uint32_t samples_per_vertex = 0;
  std::uint32_t num_parts = 0;
  std::vector<Edge> cross_edges;
  std::vector<VertexRecord> vertices;  // ascending vertex id
  /// samples_per_vertex draws for each record with intra_degree > 0, in
  /// record order; sample.u is the record's vertex.
  std::vector<Edge> samples;

  /// Weighted degree minus incident cross-edge weight, per record. Derived.
  std::vector<Weight> intra_weight;
  /// Offset of each record's samples. Derived.
  std::vector<std::uint32_t> sample_offset;

  /// Recomputes the derived fields.
  void finalize();

  friend bool operator==(const ClassSketch& a, const ClassSketch& b) {
    return a.index == b.index && a.samples_per_vertex == b.samples_per_vertex && a.num_parts == b.num_parts &&
           a.cross_edges == b.cross_edges && a.vertices == b.vertices && a.samples == b.samples;
  }
};

ClassSketch build_class(std::size_t n, int index, std::span<const Edge> class_edges, const Partition& partition,
                        double eps, std::uint64_t seed);
ClassSketch build_class(std::size_t n, int index, std::span<const Edge> class_edges, double eps,
                        std::uint64_t seed);

/// Sees every class partition during construction; may be called from
/// several threads at once.
using ClassObserver =
    std::function<void(std::span<const Edge> class_edges, const Partition& partition, double eps)>;

/// Structure for one guessed cut value c.
struct ScaleStructure {
  int exponent = 0;  // c = 1.4^exponent in the basic sketch's units
  double c = 1;
  std::vector<ClassSketch> classes;  // nonempty classes only

  friend bool operator==(const ScaleStructure&, const ScaleStructure&) = default;
};

ScaleStructure build_scale(const Graph& g, double c, double eps, std::uint64_t seed,
                           PartitionCache* cache = nullptr, const ClassObserver* observer = nullptr);

struct ClassTerms {
  int index = 0;
  double cross = 0;  // exact weight of crossing cross-part edges (units of c)
  double intra = 0;  // sum of per-part estimates (units of c)
};

struct Estimate {
  double value = 0;
  double scale = 0;
  std::vector<ClassTerms> terms;
  bool trivial_query = false;  // S empty or everything
  bool zero_cut = false;       // answered 0 without consulting a scale
  bool clamped = false;        // wanted scale outside the stored range

  [[nodiscard]] double scaled() const { return scale > 0 ? value / scale : 0; }
};

/// Estimate of the class weight leaving A within part `part`, where A is the
/// smaller side of S inside the part.
double estimate_part(const ClassSketch& cs, std::uint32_t part, const VertexSet& s);
ClassTerms estimate_class(const ClassSketch& cs, const VertexSet& s);
/// value = c * sum over classes of (cross + intra).
Estimate estimate_cut(const ScaleStructure& ds, const VertexSet& s);

struct ScaleChoice {
  int exponent = 0;
  bool clamped = false;
};

/// Exponent of the power of 1.4 nearest to c_tilde / 1.4^2, which lies in
/// [c_tilde / 1.4^3, c_tilde / 1.4]; clamped into [lo, hi]. c_tilde > 0.
ScaleChoice choose_scale(double c_tilde, int lo, int hi);

struct BasicOptions {
  double kappa = kDefaultSparsifierKappa;
  std::size_t repetitions = 1;
  /// Scale exponents never exceed log_1.4(universe^5); 0 means use g's n.
  std::size_t universe = 0;
  ClassObserver observer;
};

/// Sketch for weights in a polynomial range: a scale-picking sparsifier and,
/// per repetition, a contiguous run of scale structures.
struct BasicSketch {
  std::size_t n = 0;
  double eps = 0;
  Sparsifier sparsifier;
  int lo = 0;
  int hi = -1;  // empty when hi < lo
  std::vector<std::vector<ScaleStructure>> repetitions;

  friend bool operator==(const BasicSketch&, const BasicSketch&) = default;
};

/// Inclusive exponent range that a query can select for g.
std::pair<int, int> scale_range(const Graph& g, std::size_t universe);

BasicSketch build_basic(const Graph& g, double eps, std::uint64_t seed, const BasicOptions& options = {});
/// Median over repetitions of the scale-structure estimates.
Estimate query_basic(const BasicSketch& sk, const VertexSet& s);

}  // namespace cutsketch
