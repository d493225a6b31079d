#pragma once

#include <iosfwd>
#include <string>

#include "cutsketch/graph.hpp"

namespace cutsketch {

/// Text form: header "n m" then m lines "u v w".
Graph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const Graph& g);

/// Loads either form, sniffing the binary magic.
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g, bool binary = false);

}  // namespace cutsketch
