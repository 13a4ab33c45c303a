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

// Host-side reference results used by `pathsim verify`.

#ifndef PATHSIM_VERIFY_HPP_
#define PATHSIM_VERIFY_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathsim/graph.hpp"
#include "pathsim/memsys.hpp"

namespace pathsim {

/// Plain FIFO search over the graph's adjacency; unreached vertices get
/// kMaxWord.
std::vector<Word> reference_bfs_levels(const Graph& g, VertexId source);

/// Union-find labels: every vertex gets the smallest id in its component.
std::vector<Word> reference_component_labels(const Graph& g);

/// nullopt when `levels` matches the reference and every reached non-source
/// vertex has a parent that is a neighbor one level closer to the source.
/// Otherwise a description of the first problem found.
std::optional<std::string> check_bfs(const Graph& g, VertexId source,
                                     std::span<const Word> levels,
                                     std::span<const Word> parents);

std::optional<std::string> check_component_labels(const Graph& g,
                                                  std::span<const Word> labels);

}  // namespace pathsim

#endif  // PATHSIM_VERIFY_HPP_
