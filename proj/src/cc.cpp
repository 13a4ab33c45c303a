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

#include <algorithm>

#include "local_loops.hpp"
#include "pathsim/algos.hpp"
#include "pathsim/error.hpp"

namespace pathsim {

CcResult connected_components(const Graph& g, std::uint64_t max_iter, Recorder& rec,
                              CcTrace* trace, const CcObserver& observer) {
  if (max_iter == 0) throw Error(Errc::invalid_argument, "cc needs max_iter >= 1");
  SimMemory& mem = g.memory();
  const MachineConfig& cfg = mem.config();
  const std::uint64_t nodes = cfg.nodes;
  const std::uint64_t grain = cfg.task_grain;
  const std::uint64_t n = g.nvertices();

  CcResult r;
  r.labels = SimArray(mem, View::Striped, n, 0);
  SimArray prev(mem, View::Striped, n, 0);
  SimArray changed(mem, View::Replicated, 1, 0);
  const SimArray& C = r.labels;

  auto notify = [&](std::string_view phase, std::uint64_t iter) {
    if (!observer) return;
    const std::vector<Word> labels = C.snapshot();
    observer(phase, iter, labels);
  };
  auto phase_migrations = [&] {
    return rec.phases().back().counters.total(Counter::migrations);
  };

  rec.begin_phase("cc-init");
  detail::for_each_local(mem, rec, C, grain,
                         [&](SimThread& t, std::uint64_t v) { mem.write(t, C.at(v), v); });
  notify("cc-init", 0);

  for (std::uint64_t iter = 0; iter < max_iter; ++iter) {
    CcTrace::Round round;
    round.iteration = iter;

    rec.begin_phase("cc-snapshot", iter);
    detail::for_each_local(mem, rec, C, grain, [&](SimThread& t, std::uint64_t v) {
      mem.write(t, prev.at(v), mem.read(t, C.at(v)));
    });

    rec.begin_phase("cc-clear", iter);
    mem.run_at(changed.at(0), rec,
               [&](SimThread& t) { mem.broadcast_replicated(t, changed.id(), 0); });

    rec.begin_phase("cc-hook", iter);
    detail::for_each_local(mem, rec, C, grain, [&](SimThread& t, std::uint64_t v) {
      const Word cv = mem.read(t, C.at(v));
      const EdgeBlock block = g.open_block(t, v);
      const auto hook = [&](SimThread& w, const EdgeBlock& b, std::uint64_t begin,
                            std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k)
          mem.remote_min(w, C.at(g.neighbor(w, b, k)), cv);
      };
      hook(t, block, 0, std::min(grain, block.degree));
      for (std::uint64_t begin = grain; begin < block.degree; begin += grain) {
        mem.run_at(g.record(v), rec, [&](SimThread& w) {
          const EdgeBlock b = g.open_block(w, v);
          hook(w, b, begin, std::min(begin + grain, b.degree));
        });
      }
    });
    {
      const PhaseProfile& p = rec.phases().back();
      round.hook_migrations = p.counters.total(Counter::migrations);
      round.hook_block_entry_migrations = p.block_entry_migrations;
      round.hook_remote_min = p.counters.total(Counter::remote_min);
    }
    notify("cc-hook", iter);

    rec.begin_phase("cc-detect", iter);
    detail::for_each_local_chunk(
        mem, rec, C, grain,
        [&](SimThread& t, NodeId nd, std::uint64_t first, std::uint64_t count) {
          bool differs = false;
          for (std::uint64_t k = 0; k < count && !differs; ++k) {
            const std::uint64_t v = nd + (first + k) * nodes;
            differs = mem.read(t, prev.at(v)) != mem.read(t, C.at(v));
          }
          if (differs) mem.write(t, changed.at(0), 1);
        });

    rec.begin_phase("cc-reduce", iter);
    bool any = false;
    mem.run_at(changed.at(0), rec,
               [&](SimThread& t) { any = mem.reduce_or_replicated(t, changed.id()); });

    if (!any) {
      if (trace != nullptr) trace->rounds.push_back(std::move(round));
      r.iterations = iter + 1;
      r.converged = true;
      return r;
    }

    if (trace != nullptr) round.labels_before_compress = C.snapshot();
    rec.begin_phase("cc-compress", iter);
    detail::for_each_local(mem, rec, C, grain, [&](SimThread& t, std::uint64_t v) {
      const Word start = mem.read(t, C.at(v));
      if (start == v) return;
      mem.run_at(C.at(v), rec, [&](SimThread& w) {
        Word c = start;
        for (;;) {
          const Word cc = mem.read(w, C.at(c));
          if (cc == c) break;
          c = cc;
        }
        if (c != start) mem.write(w, C.at(v), c);
      });
    });
    round.compressed = true;
    round.compress_migrations = phase_migrations();
    notify("cc-compress", iter);
    if (trace != nullptr) trace->rounds.push_back(std::move(round));
  }
  r.iterations = max_iter;
  r.converged = false;
  return r;
}

std::uint64_t label_forest_depth_sum(std::span<const Word> labels) {
  const std::uint64_t n = labels.size();
  // depth[v] is filled once per vertex by walking up to the first vertex
  // whose depth is already known.
  constexpr std::uint64_t kUnknown = ~std::uint64_t{0};
  std::vector<std::uint64_t> depth(n, kUnknown);
  std::vector<std::uint64_t> path;
  std::uint64_t sum = 0;
  for (std::uint64_t v = 0; v < n; ++v) {
    std::uint64_t u = v;
    path.clear();
    while (depth[u] == kUnknown) {
      const Word p = labels[u];
      if (p >= n) throw Error(Errc::invalid_argument, "label out of range");
      if (p == u) {
        depth[u] = 0;
        break;
      }
      path.push_back(u);
      if (path.size() > n) throw Error(Errc::invalid_argument, "label forest has a cycle");
      u = p;
    }
    std::uint64_t d = depth[u];
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth[*it] = ++d;
    sum += depth[v];
  }
  return sum;
}

bool cc_hooking_migration_check(const CcTrace& trace) {
  for (const CcTrace::Round& round : trace.rounds) {
    if (round.hook_migrations != round.hook_block_entry_migrations) return false;
    if (round.compressed &&
        round.compress_migrations > label_forest_depth_sum(round.labels_before_compress))
      return false;
  }
  return true;
}

}  // namespace pathsim
