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

#include "pathsim/timing.hpp"

#include <algorithm>
#include <limits>

namespace pathsim {

double JobTimeline::standalone_cycles() const {
  double total = 0;
  for (const PhaseDemand& p : phases) total += p.duration;
  return total;
}

JobTimeline job_timeline(std::span<const PhaseProfile> phases, const MachineConfig& cfg,
                         std::uint64_t contexts_requested) {
  const std::uint64_t nodes = cfg.nodes;
  const std::uint64_t msps = cfg.msps_per_node;
  const double share = static_cast<double>(
      std::clamp<std::uint64_t>(contexts_requested / nodes, 1, cfg.contexts_per_node()));
  const double sync = static_cast<double>(cfg.cost_migration);

  JobTimeline tl;
  tl.phases.reserve(phases.size());
  std::vector<double> node_cycles(nodes);
  for (const PhaseProfile& ph : phases) {
    double span = static_cast<double>(ph.max_chain);
    for (NodeId n = 0; n < nodes; ++n) {
      node_cycles[n] = static_cast<double>(ph.counters.get(Counter::simulated_cycles, n));
      // Threads that ever ran on the node: spawned there or arrived.
      const double visitors = static_cast<double>(
          ph.workers[n] + ph.counters.get(Counter::migrations, n));
      const double usable = std::min(share, std::max(1.0, visitors));
      span = std::max(span, node_cycles[n] / usable);
    }
    for (double busy : ph.channel_busy) span = std::max(span, busy);

    PhaseDemand d;
    d.duration = sync + span;
    for (NodeId n = 0; n < nodes; ++n)
      if (node_cycles[n] > 0) d.usage.emplace_back(n, node_cycles[n] / d.duration);
    for (std::uint64_t r = 0; r < nodes * msps; ++r)
      if (ph.channel_busy[r] > 0)
        d.usage.emplace_back(static_cast<std::uint32_t>(nodes + r),
                             ph.channel_busy[r] / d.duration);
    tl.phases.push_back(std::move(d));
  }
  return tl;
}

std::vector<double> resource_capacities(const MachineConfig& cfg) {
  std::vector<double> caps(cfg.nodes + cfg.nodes * cfg.msps_per_node, 1.0);
  for (std::uint64_t n = 0; n < cfg.nodes; ++n)
    caps[n] = static_cast<double>(cfg.contexts_per_node());
  return caps;
}

namespace {

struct Running {
  std::size_t job;
  std::size_t phase;
  double remaining;  // fraction of the phase still to do
  double rate;       // lambda
};

// Rates in job-list order: each phase takes the largest rate, up to 1, that
// fits in what the phases of earlier jobs left of every resource it uses.
// A job's progress therefore never depends on jobs listed after it.
void assign_rates(std::vector<Running>& active, std::span<const JobTimeline> jobs,
                  const std::vector<double>& caps, std::vector<double>& load) {
  std::fill(load.begin(), load.end(), 0.0);
  for (Running& a : active) {
    const auto& usage = jobs[a.job].phases[a.phase].usage;
    double rate = 1.0;
    for (const auto& [r, u] : usage) rate = std::min(rate, std::max(0.0, caps[r] - load[r]) / u);
    a.rate = rate;
    for (const auto& [r, u] : usage) load[r] += u * rate;
  }
}

}  // namespace

std::vector<double> simulate_concurrent(std::span<const JobTimeline> jobs,
                                        const MachineConfig& cfg) {
  const std::vector<double> caps = resource_capacities(cfg);
  std::vector<double> load(caps.size());
  std::vector<double> done(jobs.size(), 0.0);

  std::vector<Running> active;
  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!jobs[j].phases.empty()) active.push_back({j, 0, 1.0, 0.0});

  double now = 0;
  while (!active.empty()) {
    assign_rates(active, jobs, caps, load);

    double dt = std::numeric_limits<double>::infinity();
    std::size_t first = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Running& a = active[i];
      const double t = a.remaining * jobs[a.job].phases[a.phase].duration / a.rate;
      if (a.rate > 0 && t < dt) {
        dt = t;
        first = i;
      }
    }
    now += dt;

    std::vector<Running> next;
    next.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      Running a = active[i];
      const JobTimeline& job = jobs[a.job];
      if (i == first) {
        a.remaining = 0;
      } else {
        a.remaining -= dt * a.rate / job.phases[a.phase].duration;
        if (a.remaining < 1e-12) a.remaining = 0;
      }
      if (a.remaining > 0) {
        next.push_back(a);
      } else if (a.phase + 1 < job.phases.size()) {
        next.push_back({a.job, a.phase + 1, 1.0, 0.0});
      } else {
        done[a.job] = now;
      }
    }
    active.swap(next);
  }
  return done;
}

}  // namespace pathsim
