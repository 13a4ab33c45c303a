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
 * @file queries.hpp
 * @brief Sequential and concurrent execution of BFS / CC query sets.
 *
 * Every job executes once, functionally, against the shared read-only graph
 * with its own arrays and Recorder. Jobs never touch each other's data, so
 * the operations they issue, and therefore every counter, are the same
 * whether they run one after another or together. Only time differs, and
 * time comes from the phase timing model in timing.hpp.
 */

#ifndef PATHSIM_QUERIES_HPP_
#define PATHSIM_QUERIES_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pathsim/algos.hpp"
#include "pathsim/graph.hpp"
#include "pathsim/timing.hpp"

namespace pathsim {

enum class JobKind : std::uint8_t { BFS, CC };
const char* to_string(JobKind kind);

struct QueryJob {
  std::uint64_t id = 0;
  JobKind kind = JobKind::BFS;
  VertexId source = 0;  // BFS only
  std::uint64_t contexts_requested = 0;
};

QueryJob bfs_job(std::uint64_t id, VertexId source, std::uint64_t contexts);
QueryJob cc_job(std::uint64_t id, std::uint64_t contexts);

enum class RunMode : std::uint8_t { sequential, concurrent };
const char* to_string(RunMode mode);

/// Interpolated quantiles: the p-quantile of n sorted samples is
/// x[h] + (h - floor h) * (x[floor h + 1] - x[floor h]) with h = (n - 1) p.
struct Quantiles {
  double q0 = 0, q25 = 0, q50 = 0, q75 = 0, q100 = 0;
  std::array<double, 5> values() const { return {q0, q25, q50, q75, q100}; }
};

/// Throws Error(invalid_argument) on an empty sample.
Quantiles quantile_summary(std::span<const double> samples);

/// One functionally executed job: its events and derived phase demands.
struct JobProfile {
  QueryJob job;
  CounterSet counters;
  JobTimeline timeline;
  std::uint64_t levels_or_iterations = 0;  // BFS levels or CC iterations
  std::uint64_t reached_or_converged = 0;  // BFS vertices reached, CC converged flag
};

struct JobReport {
  QueryJob job;
  double start_cycles = 0;
  double end_cycles = 0;
  double seconds = 0;  // (end - start) / clock_hz
  CounterSet counters;
  std::uint64_t levels_or_iterations = 0;
  std::uint64_t reached_or_converged = 0;
};

struct RunReport {
  RunMode mode = RunMode::sequential;
  std::vector<JobReport> jobs;
  double makespan_cycles = 0;
  double makespan_seconds = 0;
  CounterSet counters;  // sum of per-job deltas
  Quantiles quantiles;  // over per-job seconds
  std::optional<double> host_seconds;  // set when wall-clock timing is on
};

struct RunOptions {
  std::uint64_t cc_max_iter = kDefaultMaxIter;
  bool wallclock = false;
};

/// Executes each job functionally and derives its timeline. Counter deltas
/// are committed to the graph's SimMemory. Validates every job first.
std::vector<JobProfile> profile_jobs(std::span<const QueryJob> jobs, const Graph& g,
                                     const RunOptions& options = {});

/// Jobs run back to back in list order; makespan is the sum of job times.
RunReport schedule_sequential(std::span<const JobProfile> profiles, const MachineConfig& cfg);
/// All jobs start together and share the machine; see simulate_concurrent.
RunReport schedule_concurrent(std::span<const JobProfile> profiles, const MachineConfig& cfg);

/// Throws Error(context_exhaustion) when the jobs' combined context demand
/// exceeds the machine's thread-context slots.
void check_context_capacity(std::span<const QueryJob> jobs, const MachineConfig& cfg);

RunReport run_sequential(std::span<const QueryJob> jobs, const Graph& g,
                         const RunOptions& options = {});
RunReport run_concurrent(std::span<const QueryJob> jobs, const Graph& g,
                         const RunOptions& options = {});

/// 100 * (seq - conc) / conc. Both must be positive.
double improvement_percent(double seq_time, double conc_time);

/// round(total * bfs_fraction) BFS jobs with distinct pseudo-random sources,
/// followed by CC jobs. Sources are drawn from vertices accepted by
/// `eligible` (all vertices when empty). Deterministic in `seed`.
std::vector<QueryJob> make_mix(std::uint64_t total, double bfs_fraction, std::uint64_t seed,
                               std::uint64_t nvertices, std::uint64_t contexts,
                               const std::function<bool(VertexId)>& eligible = {});

}  // namespace pathsim

#endif  // PATHSIM_QUERIES_HPP_
