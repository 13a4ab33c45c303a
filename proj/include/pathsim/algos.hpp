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

#ifndef PATHSIM_ALGOS_HPP_
#define PATHSIM_ALGOS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pathsim/graph.hpp"
#include "pathsim/memsys.hpp"

namespace pathsim {

/// Level and parent sentinel for vertices the search never reached.
inline constexpr Word kUnreached = kMaxWord;

struct BfsResult {
  SimArray level;   // striped, one word per vertex
  SimArray parent;  // striped; parent[source] == source
  VertexId source = 0;
  std::uint64_t levels_count = 0;
  std::uint64_t reached = 0;

  std::vector<Word> levels() const { return level.snapshot(); }
  std::vector<Word> parents() const { return parent.snapshot(); }
};

/// Level-synchronous search. Each level has two phases:
///
///   expand  one worker per frontier vertex, spawned on the vertex's home
///           node, reads the edge block locally and claims every neighbor
///           with an MSP conditional store into parent[]. Blocks longer than
///           the task grain are split across additional workers.
///   scan    per-node workers walk the local slice of parent[]; a vertex
///           claimed but without a level joins the node's next frontier.
///
/// Frontier vertices are expanded in ascending id order and neighbors in
/// block order, so the first claim (and therefore the parent) is the
/// smallest-id frontier neighbor.
BfsResult bfs(const Graph& g, VertexId source, Recorder& rec);
inline BfsResult bfs(const Graph& g, VertexId source) {
  return bfs(g, source, g.memory().recorder());
}

struct CcResult {
  SimArray labels;  // striped C[v]
  std::uint64_t iterations = 0;
  bool converged = false;

  std::vector<Word> label_values() const { return labels.snapshot(); }
};

inline constexpr std::uint64_t kDefaultMaxIter = 64;

/// Per-iteration record of a connected-components run, for checking how
/// migrations split between hooking and compression.
struct CcTrace {
  struct Round {
    std::uint64_t iteration = 0;
    std::uint64_t hook_migrations = 0;
    std::uint64_t hook_block_entry_migrations = 0;
    std::uint64_t hook_remote_min = 0;
    bool compressed = false;
    std::vector<Word> labels_before_compress;
    std::uint64_t compress_migrations = 0;
  };
  std::vector<Round> rounds;
};

/// Called after every phase with the phase label, iteration, and a copy of
/// the labels taken outside the cost model.
using CcObserver = std::function<void(std::string_view phase, std::uint64_t iteration,
                                      std::span<const Word> labels)>;

/// Min-label hooking through MSP remote_min plus pointer-jumping
/// compression. Per iteration: snapshot pC = C; clear the replicated
/// changed flag on every node; remote_min(&C[j], C[v]) over every directed
/// edge; flag nodes where pC != C; OR-reduce the flag across nodes; stop if
/// nothing changed, otherwise compress every label to its root.
CcResult connected_components(const Graph& g, std::uint64_t max_iter, Recorder& rec,
                              CcTrace* trace = nullptr, const CcObserver& observer = {});
inline CcResult connected_components(const Graph& g,
                                     std::uint64_t max_iter = kDefaultMaxIter) {
  return connected_components(g, max_iter, g.memory().recorder());
}

/// Number of pointer hops from each vertex to its root in the label forest
/// v -> labels[v], summed over all vertices.
std::uint64_t label_forest_depth_sum(std::span<const Word> labels);

/// True when every hooking phase migrated only to reach edge blocks (so
/// remote_min itself never migrated) and every compress phase migrated at
/// most once per hop of the label forest it started from.
bool cc_hooking_migration_check(const CcTrace& trace);

}  // namespace pathsim

#endif  // PATHSIM_ALGOS_HPP_
