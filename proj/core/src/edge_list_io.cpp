#include "seriation/edge_list_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "seriation/errors.hpp"

namespace seriation {

namespace {

bool significant(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return false;
    if (!isspace(static_cast<unsigned char>(ch))) return true;
  }
  return false;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  long n = -1;
  Graph g;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!significant(line)) continue;
    std::istringstream ss(line);
    if (n < 0) {
      if (!(ss >> n) || n < 0) throw ParseError("bad vertex count at line " + std::to_string(lineno));
      long extra;
      if (ss >> extra) throw ParseError("unexpected token after vertex count");
      g = Graph(static_cast<int>(n));
      continue;
    }
    long u, v;
    if (!(ss >> u >> v)) throw ParseError("bad edge at line " + std::to_string(lineno));
    long extra;
    if (ss >> extra) throw ParseError("unexpected token in edge at line " + std::to_string(lineno));
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw ParseError("edge out of range at line " + std::to_string(lineno));
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  if (n < 0) throw ParseError("missing vertex count");
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  auto in = open_in(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  auto out = open_out(path);
  write_edge_list(out, g);
  if (!out) throw ParseError("write failed: " + path);
}

std::vector<double> read_latents_file(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> vals;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!significant(line)) continue;
    try {
      vals.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw ParseError(path + ": bad real at line " + std::to_string(lineno));
    }
  }
  return vals;
}

void write_latents_file(const std::string& path, const std::vector<double>& latents) {
  auto out = open_out(path);
  char buf[40];
  for (double x : latents) {
    // round-trippable doubles
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

Ordering read_ordering_file(const std::string& path) {
  auto in = open_in(path);
  Ordering o;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!significant(line)) continue;
    try {
      o.rank.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw ParseError(path + ": bad rank at line " + std::to_string(lineno));
    }
  }
  if (!o.valid()) throw ParseError(path + ": ranks are not a bijection onto 1..n");
  return o;
}

void write_ordering_file(const std::string& path, const Ordering& o) {
  auto out = open_out(path);
  for (int r : o.rank) out << r << "\n";
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace seriation
