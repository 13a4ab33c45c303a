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

#include "pathsim/queries.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "pathsim/error.hpp"

namespace pathsim {

const char* to_string(JobKind kind) { return kind == JobKind::BFS ? "bfs" : "cc"; }

const char* to_string(RunMode mode) {
  return mode == RunMode::sequential ? "seq" : "conc";
}

QueryJob bfs_job(std::uint64_t id, VertexId source, std::uint64_t contexts) {
  return {id, JobKind::BFS, source, contexts};
}

QueryJob cc_job(std::uint64_t id, std::uint64_t contexts) {
  return {id, JobKind::CC, 0, contexts};
}

Quantiles quantile_summary(std::span<const double> samples) {
  if (samples.empty()) throw Error(Errc::invalid_argument, "quantiles of an empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  auto at = [&](double p) {
    const double h = static_cast<double>(x.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
  };
  return {x.front(), at(0.25), at(0.5), at(0.75), x.back()};
}

namespace {

void validate_jobs(std::span<const QueryJob> jobs, const Graph& g) {
  for (const QueryJob& job : jobs) {
    if (job.contexts_requested == 0)
      throw Error(Errc::invalid_argument,
                  "job " + std::to_string(job.id) + " requests no thread contexts");
    if (job.kind == JobKind::BFS && job.source >= g.nvertices())
      throw Error(Errc::invalid_argument, "job " + std::to_string(job.id) + ": source " +
                                              std::to_string(job.source) + " out of range");
  }
}

RunReport finish(RunMode mode, std::span<const JobProfile> profiles, const MachineConfig& cfg,
                 std::span<const double> start, std::span<const double> end) {
  RunReport report;
  report.mode = mode;
  report.counters = CounterSet(cfg.nodes);
  std::vector<double> seconds;
  seconds.reserve(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const JobProfile& p = profiles[i];
    JobReport jr;
    jr.job = p.job;
    jr.start_cycles = start[i];
    jr.end_cycles = end[i];
    jr.seconds = (end[i] - start[i]) / cfg.clock_hz;
    jr.counters = p.counters;
    jr.levels_or_iterations = p.levels_or_iterations;
    jr.reached_or_converged = p.reached_or_converged;
    report.counters.merge(p.counters);
    report.makespan_cycles = std::max(report.makespan_cycles, end[i]);
    seconds.push_back(jr.seconds);
    report.jobs.push_back(std::move(jr));
  }
  report.makespan_seconds = report.makespan_cycles / cfg.clock_hz;
  if (!seconds.empty()) report.quantiles = quantile_summary(seconds);
  return report;
}

}  // namespace

std::vector<JobProfile> profile_jobs(std::span<const QueryJob> jobs, const Graph& g,
                                     const RunOptions& options) {
  validate_jobs(jobs, g);
  SimMemory& mem = g.memory();
  const MachineConfig& cfg = mem.config();
  std::vector<JobProfile> out;
  out.reserve(jobs.size());
  for (const QueryJob& job : jobs) {
    Recorder rec(cfg);
    JobProfile p;
    p.job = job;
    if (job.kind == JobKind::BFS) {
      BfsResult r = bfs(g, job.source, rec);
      p.levels_or_iterations = r.levels_count;
      p.reached_or_converged = r.reached;
    } else {
      CcResult r = connected_components(g, options.cc_max_iter, rec);
      p.levels_or_iterations = r.iterations;
      p.reached_or_converged = r.converged ? 1 : 0;
    }
    p.counters = rec.counters();
    mem.commit(p.counters);
    p.timeline = job_timeline(rec.phases(), cfg, job.contexts_requested);
    out.push_back(std::move(p));
  }
  return out;
}

RunReport schedule_sequential(std::span<const JobProfile> profiles, const MachineConfig& cfg) {
  std::vector<double> start(profiles.size());
  std::vector<double> end(profiles.size());
  double now = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    start[i] = now;
    for (const PhaseDemand& ph : profiles[i].timeline.phases) now += ph.duration;
    end[i] = now;
  }
  RunReport r = finish(RunMode::sequential, profiles, cfg, start, end);
  r.makespan_cycles = now;
  r.makespan_seconds = now / cfg.clock_hz;
  return r;
}

RunReport schedule_concurrent(std::span<const JobProfile> profiles, const MachineConfig& cfg) {
  std::vector<JobTimeline> timelines;
  timelines.reserve(profiles.size());
  for (const JobProfile& p : profiles) timelines.push_back(p.timeline);
  const std::vector<double> end = simulate_concurrent(timelines, cfg);
  const std::vector<double> start(profiles.size(), 0.0);
  return finish(RunMode::concurrent, profiles, cfg, start, end);
}

void check_context_capacity(std::span<const QueryJob> jobs, const MachineConfig& cfg) {
  std::uint64_t demand = 0;
  for (const QueryJob& job : jobs) demand += job.contexts_requested;
  if (demand > cfg.total_context_slots())
    throw Error(Errc::context_exhaustion,
                std::to_string(jobs.size()) + " concurrent jobs need " + std::to_string(demand) +
                    " thread contexts but the machine holds " +
                    std::to_string(cfg.total_context_slots()));
}

namespace {

template <typename Schedule>
RunReport run_with(std::span<const QueryJob> jobs, const Graph& g, const RunOptions& options,
                   Schedule&& schedule) {
  if (jobs.empty()) throw Error(Errc::invalid_argument, "no jobs to run");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<JobProfile> profiles = profile_jobs(jobs, g, options);
  RunReport r = schedule(profiles, g.memory().config());
  if (options.wallclock)
    r.host_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

RunReport run_sequential(std::span<const QueryJob> jobs, const Graph& g,
                         const RunOptions& options) {
  // Jobs run one at a time, so each only needs to fit by itself.
  for (const QueryJob& job : jobs) check_context_capacity({&job, 1}, g.memory().config());
  return run_with(jobs, g, options, schedule_sequential);
}

RunReport run_concurrent(std::span<const QueryJob> jobs, const Graph& g,
                         const RunOptions& options) {
  check_context_capacity(jobs, g.memory().config());
  return run_with(jobs, g, options, schedule_concurrent);
}

double improvement_percent(double seq_time, double conc_time) {
  if (!(seq_time > 0) || !(conc_time > 0))
    throw Error(Errc::invalid_argument, "improvement needs positive times");
  return 100.0 * (seq_time - conc_time) / conc_time;
}

std::vector<QueryJob> make_mix(std::uint64_t total, double bfs_fraction, std::uint64_t seed,
                               std::uint64_t nvertices, std::uint64_t contexts,
                               const std::function<bool(VertexId)>& eligible) {
  if (!(bfs_fraction >= 0.0 && bfs_fraction <= 1.0))
    throw Error(Errc::invalid_argument, "bfs fraction must lie in [0, 1]");
  const auto nbfs = static_cast<std::uint64_t>(std::llround(static_cast<double>(total) * bfs_fraction));

  std::vector<VertexId> pool;
  if (nbfs > 0) {
    for (VertexId v = 0; v < nvertices; ++v)
      if (!eligible || eligible(v)) pool.push_back(v);
    if (pool.size() < nbfs)
      throw Error(Errc::invalid_argument, "need " + std::to_string(nbfs) +
                                              " distinct BFS sources, only " +
                                              std::to_string(pool.size()) + " eligible");
  }

  // Partial Fisher-Yates: the first nbfs slots become a uniform sample
  // without replacement.
  std::mt19937_64 rng(seed);
  std::vector<QueryJob> jobs;
  jobs.reserve(total);
  for (std::uint64_t i = 0; i < nbfs; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    jobs.push_back(bfs_job(i, pool[i], contexts));
  }
  for (std::uint64_t i = nbfs; i < total; ++i) jobs.push_back(cc_job(i, contexts));
  return jobs;
}

}  // namespace pathsim
