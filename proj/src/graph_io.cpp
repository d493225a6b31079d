#include "cutsketch/graph_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cutsketch/codec.hpp"

namespace cutsketch {

Graph read_graph_text(std::istream& in) {
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) throw InputError("graph text: missing header \"n m\"");
  Graph g(n);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = 0;
    long long v = 0;
    double w = 0;
    if (!(in >> u >> v >> w)) throw InputError("graph text: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    if (u < 0 || v < 0) throw InputError("graph text: negative vertex id on edge " + std::to_string(i));
    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), w);
  }
  return g;
}

void write_graph_text(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  out.precision(17);
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() >= 6 && std::string(bytes.begin(), bytes.begin() + 6) == "CUTSK1") {
    try {
      return deserialize_graph(bytes);
    } catch (const DecodeError& e) {
      throw InputError(path + ": " + e.what());
    }
  }
  std::istringstream text(std::string(bytes.begin(), bytes.end()));
  return read_graph_text(text);
}

void save_graph(const std::string& path, const Graph& g, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  if (binary) {
    const auto bytes = serialize(g);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    write_graph_text(out, g);
  }
}

}  // namespace cutsketch
