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
 * @file report.hpp
 * @brief Benchmark tables.
 *
 * CSV layout, one row per (job count, mode):
 *
 *   # pathsim bench seed=<S> nodes=<N> vertices=<V> edges=<E> mix_bfs=<F> job_contexts=<C>
 *   mode,njobs,kind_mix,makespan_s,improvement_pct,q0,q25,q50,q75,q100,migrations,remote_ops
 *
 * mode is `seq` or `conc`; kind_mix is `bfs:<count>/cc:<count>`;
 * improvement_pct is filled on `conc` rows when the sequential run of the
 * same job set is also present, and empty otherwise. Quantiles are over
 * per-job seconds. Counters are totals across the job set.
 */

#ifndef PATHSIM_REPORT_HPP_
#define PATHSIM_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "pathsim/queries.hpp"

namespace pathsim {

struct BenchHeader {
  std::uint64_t seed = 0;
  std::uint64_t nodes = 0;
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;  // undirected
  double mix_bfs = 1.0;
  std::uint64_t job_contexts = 0;
};

struct BenchRow {
  std::uint64_t njobs = 0;
  std::string kind_mix;
  RunReport report;
  std::optional<double> improvement_pct;
};

std::string kind_mix(std::span<const QueryJob> jobs);

inline constexpr const char* kBenchCsvColumns =
    "mode,njobs,kind_mix,makespan_s,improvement_pct,q0,q25,q50,q75,q100,migrations,remote_ops";

void write_bench_csv(std::ostream& out, const BenchHeader& header,
                     std::span<const BenchRow> rows);

/// JSON object with the header, the machine configuration, and every run
/// including its per-job rows.
void write_bench_json(std::ostream& out, const BenchHeader& header, const MachineConfig& cfg,
                      std::span<const BenchRow> rows);

}  // namespace pathsim

#endif  // PATHSIM_REPORT_HPP_
