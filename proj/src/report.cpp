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

#include "pathsim/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace pathsim {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

nlohmann::ordered_json counters_json(const CounterSet& c) {
  nlohmann::ordered_json j;
  for (std::size_t k = 0; k < kCounterKinds; ++k) {
    const auto kind = static_cast<Counter>(k);
    j[to_string(kind)] = c.total(kind);
  }
  return j;
}

}  // namespace

std::string kind_mix(std::span<const QueryJob> jobs) {
  std::uint64_t nbfs = 0;
  for (const QueryJob& j : jobs) nbfs += j.kind == JobKind::BFS ? 1 : 0;
  return "bfs:" + std::to_string(nbfs) + "/cc:" + std::to_string(jobs.size() - nbfs);
}

void write_bench_csv(std::ostream& out, const BenchHeader& h, std::span<const BenchRow> rows) {
  out << "# pathsim bench seed=" << h.seed << " nodes=" << h.nodes << " vertices=" << h.vertices
      << " edges=" << h.edges << " mix_bfs=" << num(h.mix_bfs)
      << " job_contexts=" << h.job_contexts << '\n'
      << kBenchCsvColumns << '\n';
  for (const BenchRow& row : rows) {
    const RunReport& r = row.report;
    out << to_string(r.mode) << ',' << row.njobs << ',' << row.kind_mix << ','
        << num(r.makespan_seconds) << ',';
    if (row.improvement_pct) out << num(*row.improvement_pct);
    for (double q : r.quantiles.values()) out << ',' << num(q);
    out << ',' << r.counters.total(Counter::migrations) << ',' << r.counters.remote_ops_total()
        << '\n';
  }
}

void write_bench_json(std::ostream& out, const BenchHeader& h, const MachineConfig& cfg,
                      std::span<const BenchRow> rows) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["seed"] = h.seed;
  doc["nodes"] = h.nodes;
  doc["vertices"] = h.vertices;
  doc["edges"] = h.edges;
  doc["mix_bfs"] = h.mix_bfs;
  doc["job_contexts"] = h.job_contexts;

  ordered_json machine = ordered_json::object();
  std::istringstream lines(format_machine_config(cfg));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) machine[line.substr(0, eq)] = line.substr(eq + 3);
  }
  doc["machine"] = machine;

  ordered_json runs = ordered_json::array();
  for (const BenchRow& row : rows) {
    const RunReport& r = row.report;
    ordered_json run;
    run["mode"] = to_string(r.mode);
    run["njobs"] = row.njobs;
    run["kind_mix"] = row.kind_mix;
    run["makespan_s"] = r.makespan_seconds;
    run["makespan_cycles"] = r.makespan_cycles;
    run["improvement_pct"] =
        row.improvement_pct ? ordered_json(*row.improvement_pct) : ordered_json(nullptr);
    const auto q = r.quantiles.values();
    run["quantiles_s"] = {q[0], q[1], q[2], q[3], q[4]};
    run["counters"] = counters_json(r.counters);
    if (r.host_seconds) run["host_seconds"] = *r.host_seconds;
    ordered_json jobs = ordered_json::array();
    for (const JobReport& jr : r.jobs) {
      ordered_json j;
      j["id"] = jr.job.id;
      j["kind"] = to_string(jr.job.kind);
      if (jr.job.kind == JobKind::BFS) {
        j["source"] = jr.job.source;
        j["levels"] = jr.levels_or_iterations;
        j["reached"] = jr.reached_or_converged;
      } else {
        j["iterations"] = jr.levels_or_iterations;
        j["converged"] = jr.reached_or_converged != 0;
      }
      j["contexts"] = jr.job.contexts_requested;
      j["start_s"] = jr.start_cycles / cfg.clock_hz;
      j["end_s"] = jr.end_cycles / cfg.clock_hz;
      j["time_s"] = jr.seconds;
      j["counters"] = counters_json(jr.counters);
      jobs.push_back(std::move(j));
    }
    run["jobs"] = std::move(jobs);
    runs.push_back(std::move(run));
  }
  doc["runs"] = std::move(runs);
  out << doc.dump(2) << '\n';
}

}  // namespace pathsim
