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

#include "pathsim/verify.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace pathsim {

std::vector<Word> reference_bfs_levels(const Graph& g, VertexId source) {
  std::vector<Word> level(g.nvertices(), kMaxWord);
  std::deque<VertexId> queue{source};
  level[source] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId j : g.neighbors_of(v)) {
      if (level[j] != kMaxWord) continue;
      level[j] = level[v] + 1;
      queue.push_back(j);
    }
  }
  return level;
}

std::vector<Word> reference_component_labels(const Graph& g) {
  const std::uint64_t n = g.nvertices();
  std::vector<Word> parent(n);
  std::iota(parent.begin(), parent.end(), Word{0});
  auto find = [&](Word x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId j : g.neighbors_of(v)) {
      const Word a = find(v);
      const Word b = find(j);
      // Linking the larger root under the smaller keeps roots minimal.
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<Word> label(n);
  for (VertexId v = 0; v < n; ++v) label[v] = find(v);
  return label;
}

std::optional<std::string> check_bfs(const Graph& g, VertexId source,
                                     std::span<const Word> levels,
                                     std::span<const Word> parents) {
  const std::uint64_t n = g.nvertices();
  if (levels.size() != n || parents.size() != n) return "result arrays have the wrong length";
  const std::vector<Word> want = reference_bfs_levels(g, source);
  for (VertexId v = 0; v < n; ++v) {
    if (levels[v] != want[v])
      return "vertex " + std::to_string(v) + " has level " + std::to_string(levels[v]) +
             ", expected " + std::to_string(want[v]);
  }
  if (parents[source] != source) return "source is not its own parent";
  for (VertexId v = 0; v < n; ++v) {
    if (v == source) continue;
    if (want[v] == kMaxWord) {
      if (parents[v] != kMaxWord) return "unreached vertex " + std::to_string(v) + " has a parent";
      continue;
    }
    const Word p = parents[v];
    if (p >= n || levels[p] + 1 != levels[v])
      return "vertex " + std::to_string(v) + " has a parent outside the previous level";
    const std::vector<VertexId> nb = g.neighbors_of(v);
    if (!std::binary_search(nb.begin(), nb.end(), p))
      return "parent of vertex " + std::to_string(v) + " is not a neighbor";
  }
  return std::nullopt;
}

std::optional<std::string> check_component_labels(const Graph& g,
                                                  std::span<const Word> labels) {
  if (labels.size() != g.nvertices()) return "label array has the wrong length";
  const std::vector<Word> want = reference_component_labels(g);
  for (VertexId v = 0; v < want.size(); ++v) {
    if (labels[v] != want[v])
      return "vertex " + std::to_string(v) + " has label " + std::to_string(labels[v]) +
             ", expected " + std::to_string(want[v]);
  }
  return std::nullopt;
}

}  // namespace pathsim
