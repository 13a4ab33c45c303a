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

#ifndef PATHSIM_RMAT_HPP_
#define PATHSIM_RMAT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pathsim {

using VertexId = std::uint64_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Graph500-style recursive-matrix parameters. Quadrant probabilities are
/// the Graph500 reference values.
struct RmatParams {
  std::uint64_t scale = 10;
  std::uint64_t edgefactor = 16;
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
  std::uint64_t seed = 1;

  std::uint64_t vertex_count() const { return std::uint64_t{1} << scale; }
  /// Throws Error(invalid_argument).
  void validate() const;
};

/// edgefactor * 2^scale, checked for overflow.
std::uint64_t rmat_edge_count(const RmatParams& p);

/// Edge k descends `scale` levels of the adjacency matrix, drawing one
/// uniform per level from a counter-based generator keyed on
/// (seed, k, level), so any edge can be produced independently.
std::vector<Edge> generate_edges(const RmatParams& p);
Edge generate_edge(const RmatParams& p, std::uint64_t k);

/// Drops self-loops, orders each pair as (min, max), removes duplicates,
/// and sorts lexicographically.
std::vector<Edge> canonicalize(std::vector<Edge> edges);

// ---------------------------------------------------------------------------
// Edge files: a binary body of little-endian (u, v) 64-bit pairs and a text
// sidecar `<path>.hdr` of `key = value` lines.

struct EdgeFileHeader {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  bool canonical = true;
  std::uint64_t raw_edges = 0;
  std::uint64_t scale = 0;
  std::uint64_t edgefactor = 0;
  double a = 0, b = 0, c = 0, d = 0;
  std::uint64_t seed = 0;
};

struct EdgeFile {
  EdgeFileHeader header;
  std::vector<Edge> edges;
};

std::string header_path(const std::string& edge_path);
void write_edge_file(const std::string& path, const EdgeFileHeader& header,
                     std::span<const Edge> edges);
/// Edges of non-canonical files are canonicalized on load.
EdgeFile read_edge_file(const std::string& path);

}  // namespace pathsim

#endif  // PATHSIM_RMAT_HPP_
