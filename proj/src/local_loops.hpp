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

#ifndef PATHSIM_SRC_LOCAL_LOOPS_HPP_
#define PATHSIM_SRC_LOCAL_LOOPS_HPP_

#include <algorithm>
#include <cstdint>

#include "pathsim/memsys.hpp"

namespace pathsim::detail {

/// Runs one worker per `grain` consecutive local elements of a striped array
/// on every node. body(t, node, first, count) visits global indices
/// node + (first + k) * nodes for k in [0, count).
template <typename Body>
void for_each_local_chunk(SimMemory& mem, Recorder& rec, const SimArray& striped,
                          std::uint64_t grain, Body&& body) {
  const std::uint64_t nodes = mem.config().nodes;
  for (NodeId n = 0; n < nodes; ++n) {
    const std::uint64_t local = striped_count_on(striped.length(), nodes, n);
    for (std::uint64_t first = 0; first < local; first += grain) {
      const std::uint64_t count = std::min(grain, local - first);
      mem.run_at(striped.at(n + first * nodes), rec,
                 [&](SimThread& t) { body(t, n, first, count); });
    }
  }
}

/// Element-wise form of for_each_local_chunk: body(t, global_index).
template <typename Body>
void for_each_local(SimMemory& mem, Recorder& rec, const SimArray& striped,
                    std::uint64_t grain, Body&& body) {
  const std::uint64_t nodes = mem.config().nodes;
  for_each_local_chunk(mem, rec, striped, grain,
                       [&](SimThread& t, NodeId n, std::uint64_t first, std::uint64_t count) {
                         for (std::uint64_t k = 0; k < count; ++k)
                           body(t, n + (first + k) * nodes);
                       });
}

}  // namespace pathsim::detail

#endif  // PATHSIM_SRC_LOCAL_LOOPS_HPP_
