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

#include "pathsim/graph.hpp"

#include <algorithm>

#include "pathsim/error.hpp"

namespace pathsim {

Graph Graph::build(std::span<const Edge> edges, std::uint64_t nvertices, SimMemory& mem) {
  if (nvertices == 0) throw Error(Errc::invalid_argument, "graph needs at least one vertex");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.u >= nvertices || e.v >= nvertices)
      throw Error(Errc::invalid_argument, "edge endpoint out of range");
    if (e.u >= e.v || (k > 0 && !(edges[k - 1] < e)))
      throw Error(Errc::invalid_argument, "edge list is not canonical");
  }

  const std::uint64_t nodes = mem.config().nodes;

  // Counting sort into CSR; canonical input makes each row ascending once
  // both directions are merged below.
  std::vector<std::uint64_t> degree(nvertices, 0);
  for (const Edge& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<std::uint64_t> row(nvertices + 1, 0);
  for (std::uint64_t v = 0; v < nvertices; ++v) row[v + 1] = row[v] + degree[v];
  std::vector<VertexId> adj(row[nvertices]);
  std::vector<std::uint64_t> fill(row.begin(), row.end() - 1);
  for (const Edge& e : edges) {
    adj[fill[e.u]++] = e.v;
    adj[fill[e.v]++] = e.u;
  }
  for (std::uint64_t v = 0; v < nvertices; ++v)
    std::sort(adj.begin() + static_cast<std::ptrdiff_t>(row[v]),
              adj.begin() + static_cast<std::ptrdiff_t>(row[v + 1]));

  Graph g;
  g.mem_ = &mem;
  g.nvertices_ = nvertices;
  g.nedges_ = adj.size();
  g.degrees_ = SimArray(mem, View::Striped, nvertices, 0);
  g.offsets_ = SimArray(mem, View::Striped, nvertices, 0);

  std::vector<Word> offsets(nvertices);
  std::vector<std::vector<Word>> pools(nodes);
  for (std::uint64_t v = 0; v < nvertices; ++v) {
    auto& pool = pools[v % nodes];
    offsets[v] = pool.size();
    pool.insert(pool.end(), adj.begin() + static_cast<std::ptrdiff_t>(row[v]),
                adj.begin() + static_cast<std::ptrdiff_t>(row[v + 1]));
  }
  mem.load(g.degrees_.id(), degree);
  mem.load(g.offsets_.id(), offsets);
  g.pools_.reserve(nodes);
  for (NodeId n = 0; n < nodes; ++n) {
    auto& pool = pools[n];
    if (pool.empty()) pool.push_back(0);  // allocations are never empty
    g.pools_.emplace_back(mem, View::Absolute, pool.size(), 0, n);
    mem.load(g.pools_.back().id(), pool);
  }
  return g;
}

void Graph::check_vertex(VertexId v) const {
  if (v >= nvertices_)
    throw Error(Errc::invalid_argument, "vertex " + std::to_string(v) + " out of range");
}

EdgeBlock Graph::open_block(SimThread& t, VertexId v) const {
  check_vertex(v);
  const NodeId before = t.node;
  EdgeBlock block;
  block.degree = mem_->read(t, degrees_.at(v));
  if (t.node != before) t.recorder->current().block_entry_migrations += 1;
  block.offset = mem_->read(t, offsets_.at(v));
  block.home = t.node;
  return block;
}

std::uint64_t Graph::degree(SimThread& t, VertexId v) const {
  check_vertex(v);
  return mem_->read(t, degrees_.at(v));
}

std::vector<VertexId> Graph::neighbors(SimThread& t, VertexId v) const {
  std::vector<VertexId> out;
  for_each_neighbor(t, v, [&](VertexId j) { out.push_back(j); });
  return out;
}

std::uint64_t Graph::degree_of(VertexId v) const {
  check_vertex(v);
  return mem_->peek(degrees_.at(v));
}

std::vector<VertexId> Graph::neighbors_of(VertexId v) const {
  check_vertex(v);
  const NodeId home = static_cast<NodeId>(v % mem_->config().nodes);
  const std::uint64_t deg = mem_->peek(degrees_.at(v));
  const std::uint64_t off = mem_->peek(offsets_.at(v));
  std::vector<VertexId> out(deg);
  for (std::uint64_t k = 0; k < deg; ++k) out[k] = mem_->peek(pools_[home].at(off + k));
  return out;
}

}  // namespace pathsim
