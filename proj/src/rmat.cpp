/*
 * Copyright 2026 The pathsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pathsim/rmat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pathsim/error.hpp"

namespace pathsim {

namespace {

// SplitMix64 finalizer; a bijective mix used as a counter-based generator.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t edge, std::uint64_t level) {
  std::uint64_t h = mix64(mix64(seed ^ mix64(edge)) + level);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

void RmatParams::validate() const {
  if (scale < 1 || scale > 62)
    throw Error(Errc::invalid_argument, "rmat: scale must be in [1, 62]");
  if (edgefactor < 1) throw Error(Errc::invalid_argument, "rmat: edgefactor must be >= 1");
  for (double q : {a, b, c, d})
    if (!(q >= 0.0 && q <= 1.0))
      throw Error(Errc::invalid_argument, "rmat: quadrant probabilities must lie in [0, 1]");
  if (std::fabs(a + b + c + d - 1.0) > 1e-9)
    throw Error(Errc::invalid_argument, "rmat: quadrant probabilities must sum to 1");
}

std::uint64_t rmat_edge_count(const RmatParams& p) {
  p.validate();
  const std::uint64_t n = p.vertex_count();
  if (p.edgefactor > std::numeric_limits<std::uint64_t>::max() / n)
    throw Error(Errc::invalid_argument, "rmat: edgefactor * 2^scale overflows");
  return p.edgefactor * n;
}

Edge generate_edge(const RmatParams& p, std::uint64_t k) {
  const double ab = p.a + p.b;
  const double abc = ab + p.c;
  VertexId u = 0;
  VertexId v = 0;
  for (std::uint64_t level = 0; level < p.scale; ++level) {
    double r = uniform01(p.seed, k, level);
    u <<= 1;
    v <<= 1;
    if (r < p.a) {
    } else if (r < ab) {
      v |= 1;
    } else if (r < abc) {
      u |= 1;
    } else {
      u |= 1;
      v |= 1;
    }
  }
  return {u, v};
}

std::vector<Edge> generate_edges(const RmatParams& p) {
  const std::uint64_t m = rmat_edge_count(p);
  std::vector<Edge> edges(m);
  for (std::uint64_t k = 0; k < m; ++k) edges[k] = generate_edge(p, k);
  return edges;
}

std::vector<Edge> canonicalize(std::vector<Edge> edges) {
  std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::string header_path(const std::string& edge_path) { return edge_path + ".hdr"; }

namespace {

void put_le64(std::ostream& out, std::uint64_t x) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t get_le64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 7; i >= 0; --i) x = (x << 8) | p[i];
  return x;
}

}  // namespace

void write_edge_file(const std::string& path, const EdgeFileHeader& header,
                     std::span<const Edge> edges) {
  if (header.edges != edges.size())
    throw Error(Errc::invalid_argument, "edge file header count does not match body");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    for (const Edge& e : edges) {
      put_le64(out, e.u);
      put_le64(out, e.v);
    }
    if (!out) throw Error(Errc::io_error, "short write to '" + path + "'");
  }
  std::ofstream hdr(header_path(path), std::ios::trunc);
  if (!hdr) throw Error(Errc::io_error, "cannot write '" + header_path(path) + "'");
  hdr.precision(17);
  hdr << "vertices = " << header.vertices << '\n'
      << "edges = " << header.edges << '\n'
      << "canonical = " << (header.canonical ? 1 : 0) << '\n'
      << "raw_edges = " << header.raw_edges << '\n'
      << "scale = " << header.scale << '\n'
      << "edgefactor = " << header.edgefactor << '\n'
      << "a = " << header.a << '\n'
      << "b = " << header.b << '\n'
      << "c = " << header.c << '\n'
      << "d = " << header.d << '\n'
      << "seed = " << header.seed << '\n';
}

EdgeFile read_edge_file(const std::string& path) {
  EdgeFile file;
  bool have_vertices = false;
  {
    std::ifstream hdr(header_path(path));
    if (!hdr) throw Error(Errc::io_error, "cannot open '" + header_path(path) + "'");
    std::string line;
    while (std::getline(hdr, line)) {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq);
      key.erase(key.find_last_not_of(" \t") + 1);
      std::istringstream value(line.substr(eq + 1));
      auto& h = file.header;
      if (key == "vertices") { value >> h.vertices; have_vertices = true; }
      else if (key == "edges") value >> h.edges;
      else if (key == "canonical") { int c = 1; value >> c; h.canonical = c != 0; }
      else if (key == "raw_edges") value >> h.raw_edges;
      else if (key == "scale") value >> h.scale;
      else if (key == "edgefactor") value >> h.edgefactor;
      else if (key == "a") value >> h.a;
      else if (key == "b") value >> h.b;
      else if (key == "c") value >> h.c;
      else if (key == "d") value >> h.d;
      else if (key == "seed") value >> h.seed;
      if (value.fail())
        throw Error(Errc::io_error, "bad header line in '" + header_path(path) + "': " + line);
    }
  }
  if (!have_vertices) throw Error(Errc::io_error, "header of '" + path + "' lacks vertices");

  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  auto bytes = static_cast<std::uint64_t>(in.tellg());
  if (bytes % 16 != 0 || bytes / 16 != file.header.edges)
    throw Error(Errc::io_error, "'" + path + "' size does not match its header");
  in.seekg(0);
  std::vector<unsigned char> body(bytes);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw Error(Errc::io_error, "short read from '" + path + "'");

  file.edges.resize(file.header.edges);
  for (std::uint64_t k = 0; k < file.header.edges; ++k) {
    Edge e{get_le64(&body[16 * k]), get_le64(&body[16 * k + 8])};
    if (e.u >= file.header.vertices || e.v >= file.header.vertices)
      throw Error(Errc::io_error, "edge endpoint out of range in '" + path + "'");
    file.edges[k] = e;
  }
  if (!file.header.canonical) {
    file.edges = canonicalize(std::move(file.edges));
    file.header.edges = file.edges.size();
    file.header.canonical = true;
  }
  return file;
}

}  // namespace pathsim
