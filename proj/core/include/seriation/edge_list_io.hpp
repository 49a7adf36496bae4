#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seriation/graph.hpp"
#include "seriation/ordering.hpp"

namespace seriation {

// Text format: first significant line is n, then one "u v" per edge with
// 0-based ids and u < v; blank lines and lines starting with '#' ignored.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

// One real per line.
std::vector<double> read_latents_file(const std::string& path);
void write_latents_file(const std::string& path, const std::vector<double>& latents);

// One rank per line (line i = rank of vertex i, 1-based ranks).
Ordering read_ordering_file(const std::string& path);
void write_ordering_file(const std::string& path, const Ordering& o);

}  // namespace seriation
