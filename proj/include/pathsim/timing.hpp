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
 * @file timing.hpp
 * @brief Phase timing model.
 *
 * A job is a sequence of bulk-synchronous phases. Run alone, a phase lasts
 *
 *   D = sync + max(longest thread chain,
 *                  max over nodes of thread cycles / usable contexts,
 *                  max over channels of channel busy cycles)
 *
 * where usable contexts on a node is the smaller of the phase's worker count
 * there and the job's per-node share of its context budget, and sync is one
 * migration latency for the barrier.
 *
 * While running, a phase occupies each node's hardware contexts at rate
 * thread_cycles / D and each channel at busy / D. Concurrent jobs share
 * these resources as a fluid: at every instant each active phase advances at
 * a rate lambda in [0, 1] (its fraction of standalone speed). Rates are
 * handed out in job-list order under the capacities (contexts_per_node per
 * node, 1 per channel): a phase runs as fast as the capacity left by earlier
 * jobs allows, so oversubscribed resources delay later jobs. Adding a job
 * to the end of a list never moves the completion of any job before it.
 */

#ifndef PATHSIM_TIMING_HPP_
#define PATHSIM_TIMING_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pathsim/memsys.hpp"

namespace pathsim {

struct PhaseDemand {
  double duration = 0;  // standalone cycles
  // (resource, usage) with usage in capacity units; resources are nodes
  // [0, nodes) for contexts, then nodes + node * msps + channel.
  std::vector<std::pair<std::uint32_t, double>> usage;
};

struct JobTimeline {
  std::vector<PhaseDemand> phases;
  /// Sum of phase durations, accumulated in phase order.
  double standalone_cycles() const;
};

JobTimeline job_timeline(std::span<const PhaseProfile> phases, const MachineConfig& cfg,
                         std::uint64_t contexts_requested);

/// Resource capacities in the order used by PhaseDemand::usage.
std::vector<double> resource_capacities(const MachineConfig& cfg);

/// Completion time in cycles of each job when all start at time 0.
std::vector<double> simulate_concurrent(std::span<const JobTimeline> jobs,
                                        const MachineConfig& cfg);

}  // namespace pathsim

#endif  // PATHSIM_TIMING_HPP_
