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

#include <algorithm>
#include <utility>

#include "local_loops.hpp"
#include "pathsim/algos.hpp"
#include "pathsim/error.hpp"

namespace pathsim {

namespace {

// Per-node frontier queues packed into one striped array: slot k of node
// n's queue is element k * nodes + n, so every queue is node-local.
struct Frontier {
  SimArray slots;
  SimArray tails;  // striped, one counter per node

  Frontier(SimMemory& mem, std::uint64_t nodes, std::uint64_t capacity)
      : slots(mem, View::Striped, nodes * capacity, 0),
        tails(mem, View::Striped, nodes, 0) {}
};

struct FrontierEntry {
  VertexId v;
  NodeId node;
  std::uint64_t slot;
};

// Expands edges [begin, end) of v's block from a thread already on v's home.
void claim_range(const Graph& g, SimThread& t, const EdgeBlock& block, VertexId v,
                 const SimArray& parent, std::uint64_t begin, std::uint64_t end) {
  SimMemory& mem = g.memory();
  for (std::uint64_t k = begin; k < end; ++k)
    mem.remote_claim(t, parent.at(g.neighbor(t, block, k)), kUnreached, v);
}

}  // namespace

BfsResult bfs(const Graph& g, VertexId source, Recorder& rec) {
  const std::uint64_t n = g.nvertices();
  if (source >= n)
    throw Error(Errc::invalid_argument,
                "bfs source " + std::to_string(source) + " out of range");
  SimMemory& mem = g.memory();
  const MachineConfig& cfg = mem.config();
  const std::uint64_t nodes = cfg.nodes;
  const std::uint64_t grain = cfg.task_grain;
  const std::uint64_t capacity = (n + nodes - 1) / nodes;

  BfsResult r;
  r.source = source;
  r.level = SimArray(mem, View::Striped, n, kUnreached);
  r.parent = SimArray(mem, View::Striped, n, kUnreached);
  Frontier cur(mem, nodes, capacity);
  Frontier next(mem, nodes, capacity);
  SimArray found(mem, View::Striped, 1, 0);

  rec.begin_phase("bfs-init");
  detail::for_each_local(mem, rec, r.level, grain, [&](SimThread& t, std::uint64_t i) {
    mem.write(t, r.level.at(i), kUnreached);
    mem.write(t, r.parent.at(i), kUnreached);
  });
  const NodeId src_home = static_cast<NodeId>(source % nodes);
  mem.run_at(r.parent.at(source), rec, [&](SimThread& t) {
    mem.write(t, r.parent.at(source), source);
    mem.write(t, r.level.at(source), 0);
    mem.write(t, cur.slots.at(src_home), source);
    mem.write(t, cur.tails.at(src_home), 1);
  });
  r.reached = 1;

  std::vector<FrontierEntry> frontier;
  for (std::uint64_t k = 0;; ++k) {
    // Scheduling order is host bookkeeping; the workers pay for their reads.
    frontier.clear();
    for (NodeId nd = 0; nd < nodes; ++nd) {
      const Word tail = mem.peek(cur.tails.at(nd));
      for (std::uint64_t s = 0; s < tail; ++s)
        frontier.push_back({mem.peek(cur.slots.at(s * nodes + nd)), nd, s});
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const FrontierEntry& a, const FrontierEntry& b) { return a.v < b.v; });

    rec.begin_phase("bfs-expand", k);
    for (const FrontierEntry& e : frontier) {
      mem.run_at(cur.slots.at(e.slot * nodes + e.node), rec, [&](SimThread& t) {
        const VertexId v = mem.read(t, cur.slots.at(e.slot * nodes + e.node));
        const EdgeBlock block = g.open_block(t, v);
        claim_range(g, t, block, v, r.parent, 0, std::min(grain, block.degree));
        for (std::uint64_t begin = grain; begin < block.degree; begin += grain) {
          mem.run_at(g.record(v), rec, [&](SimThread& w) {
            const EdgeBlock b = g.open_block(w, v);
            claim_range(g, w, b, v, r.parent, begin, std::min(begin + grain, b.degree));
          });
        }
      });
    }

    rec.begin_phase("bfs-scan", k);
    const Word next_level = k + 1;
    detail::for_each_local_chunk(
        mem, rec, r.parent, grain,
        [&](SimThread& t, NodeId nd, std::uint64_t first, std::uint64_t count) {
          Word discovered = 0;
          for (std::uint64_t j = 0; j < count; ++j) {
            const VertexId v = nd + (first + j) * nodes;
            if (mem.read(t, r.parent.at(v)) == kUnreached) continue;
            if (mem.read(t, r.level.at(v)) != kUnreached) continue;
            mem.write(t, r.level.at(v), next_level);
            const Word slot = mem.fetch_add(t, next.tails.at(nd), 1);
            mem.write(t, next.slots.at(slot * nodes + nd), v);
            ++discovered;
          }
          if (discovered != 0) mem.remote_add(t, found.at(0), discovered);
        });

    Word discovered = 0;
    mem.run_at(found.at(0), rec, [&](SimThread& t) {
      discovered = mem.read(t, found.at(0));
      if (discovered == 0) return;
      mem.write(t, found.at(0), 0);
      for (NodeId nd = 0; nd < nodes; ++nd) mem.write(t, cur.tails.at(nd), 0);
    });
    if (discovered == 0) {
      r.levels_count = k + 1;
      break;
    }
    r.reached += discovered;
    std::swap(cur, next);
  }
  return r;
}

}  // namespace pathsim
