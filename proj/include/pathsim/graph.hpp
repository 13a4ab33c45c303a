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

/**
 * @file graph.hpp
 * @brief Loose sparse row graph striped over simulated memory.
 *
 * Vertex records (degree and edge-block offset) are striped, so vertex v's
 * record lives on node v mod nodes. Each node owns one edge pool holding
 * the edge blocks of its vertices back to back, which keeps a vertex's
 * neighbors on the same node as its record. Both directions of every
 * undirected edge are stored; neighbors within a block are ascending.
 */

#ifndef PATHSIM_GRAPH_HPP_
#define PATHSIM_GRAPH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pathsim/memsys.hpp"
#include "pathsim/rmat.hpp"

namespace pathsim {

struct EdgeBlock {
  NodeId home = 0;
  std::uint64_t offset = 0;  // start within the home node's pool
  std::uint64_t degree = 0;
};

class Graph {
 public:
  /// `edges` must be canonical (see canonicalize) with endpoints below
  /// `nvertices`. Loading is not charged to any recorder.
  static Graph build(std::span<const Edge> edges, std::uint64_t nvertices, SimMemory& mem);

  std::uint64_t nvertices() const { return nvertices_; }
  /// Directed count: twice the undirected edge count.
  std::uint64_t nedges() const { return nedges_; }
  SimMemory& memory() const { return *mem_; }

  GlobalAddress record(VertexId v) const { return degrees_.at(v); }
  GlobalAddress degree_address(VertexId v) const { return degrees_.at(v); }
  GlobalAddress offset_address(VertexId v) const { return offsets_.at(v); }
  GlobalAddress pool_address(NodeId node, std::uint64_t i) const { return pools_[node].at(i); }

  /// Reads v's record, migrating to its home node if needed.
  EdgeBlock open_block(SimThread& t, VertexId v) const;
  VertexId neighbor(SimThread& t, const EdgeBlock& block, std::uint64_t k) const {
    return mem_->read(t, pools_[block.home].at(block.offset + k));
  }

  std::uint64_t degree(SimThread& t, VertexId v) const;

  /// Calls f(neighbor) for every neighbor of v with rank in [begin, end).
  template <typename F>
  void for_each_neighbor(SimThread& t, VertexId v, F&& f, std::uint64_t begin = 0,
                         std::uint64_t end = ~std::uint64_t{0}) const {
    EdgeBlock block = open_block(t, v);
    if (end > block.degree) end = block.degree;
    for (std::uint64_t k = begin; k < end; ++k) f(neighbor(t, block, k));
  }

  std::vector<VertexId> neighbors(SimThread& t, VertexId v) const;

  // Uncounted inspection.
  std::uint64_t degree_of(VertexId v) const;
  std::vector<VertexId> neighbors_of(VertexId v) const;

 private:
  Graph() = default;
  void check_vertex(VertexId v) const;

  SimMemory* mem_ = nullptr;
  std::uint64_t nvertices_ = 0;
  std::uint64_t nedges_ = 0;
  SimArray degrees_;
  SimArray offsets_;
  std::vector<SimArray> pools_;
};

}  // namespace pathsim

#endif  // PATHSIM_GRAPH_HPP_
