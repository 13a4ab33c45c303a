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

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any fails. Thresholds are the constants below; nothing is tuned per run.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "pathsim/algos.hpp"
#include "pathsim/cli.hpp"
#include "pathsim/error.hpp"
#include "pathsim/graph.hpp"
#include "pathsim/queries.hpp"
#include "pathsim/rmat.hpp"

namespace {

using namespace pathsim;

constexpr int kCorpusGraphs = 60;             // >= 50
constexpr oracle::Id kCorpusMaxVertices = 4096;
constexpr double kCorrectnessBudgetS = 60.0;
constexpr int kAtomicOps = 10000;
constexpr int kAtomicSchedules = 128;          // >= 100
constexpr int kAtomicHostThreads = 4;
constexpr std::uint64_t kBenefitScale = 16;
constexpr std::uint64_t kBenefitNodes = 8;
constexpr std::uint64_t kBenefitMinJobs = 16;
constexpr std::uint64_t kBenefitMaxJobs = 64;
constexpr std::uint64_t kBenefitStep = 8;
constexpr double kBenefitMinImprovement = 50.0;  // percent, strict
constexpr double kBenefitMinR2 = 0.98;
constexpr double kBenefitBudgetS = 600.0;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Edge> to_edges(const std::vector<oracle::Pair>& pairs) {
  std::vector<Edge> out;
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) out.push_back({u, v});
  return out;
}

std::vector<oracle::Pair> rmat_pairs(std::uint64_t scale, std::uint64_t seed) {
  RmatParams p;
  p.scale = scale;
  p.seed = seed;
  std::vector<oracle::Pair> out;
  for (const Edge& e : canonicalize(generate_edges(p))) out.emplace_back(e.u, e.v);
  return out;
}

struct CorpusGraph {
  oracle::Id n;
  std::vector<oracle::Pair> edges;
  std::uint64_t nodes;
};

// Mixed densities from near-empty to dense, on assorted machine sizes, plus
// the scale-10 R-MAT graph.
std::vector<CorpusGraph> corpus() {
  std::vector<CorpusGraph> out;
  std::mt19937_64 rng(20240601);
  const double densities[] = {0.1, 0.5, 1.0, 2.0, 8.0, 32.0};
  for (int i = 0; i < kCorpusGraphs; ++i) {
    const oracle::Id n = 2 + rng() % (kCorpusMaxVertices - 1);
    const double d = densities[i % 6];
    const auto m = static_cast<oracle::Id>(d * static_cast<double>(n));
    const std::uint64_t nodes = 1 + rng() % 8;
    out.push_back({n, oracle::random_graph(n, m, rng()), nodes});
  }
  out.push_back({1024, rmat_pairs(10, 1), 8});
  return out;
}

// ---------------------------------------------------------------------------

Verdict criterion1(const std::vector<CorpusGraph>& graphs) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t checked = 0;
  for (const CorpusGraph& cg : graphs) {
    SimMemory mem(default_pathfinder_config(cg.nodes));
    Graph g = Graph::build(to_edges(cg.edges), cg.n, mem);
    Recorder rec(mem.config());
    CcResult r = connected_components(g, kDefaultMaxIter, rec);
    const auto want = oracle::component_min_labels(cg.n, cg.edges);
    const auto got = r.label_values();
    v.require(r.converged, "cc converged on n=" + std::to_string(cg.n));
    // Equal min-id labelings mean equal partitions with min-id labels.
    v.require(got == want, "labels equal union-find min ids on n=" + std::to_string(cg.n));
    ++checked;
  }
  const double secs = seconds_since(t0);
  v.require(secs < kCorrectnessBudgetS, "runtime under 60 s");
  v.detail << checked << " graphs, " << secs << " s";
  return v;
}

Verdict criterion2(const std::vector<CorpusGraph>& graphs) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t searches = 0;
  std::mt19937_64 rng(77);
  for (const CorpusGraph& cg : graphs) {
    SimMemory mem(default_pathfinder_config(cg.nodes));
    Graph g = Graph::build(to_edges(cg.edges), cg.n, mem);
    const auto adj = oracle::adjacency(cg.n, cg.edges);
    for (int s = 0; s < 3; ++s) {
      const oracle::Id source = rng() % cg.n;
      Recorder rec(mem.config());
      BfsResult r = bfs(g, source, rec);
      const auto lv = r.levels();
      const auto par = r.parents();
      const auto want = oracle::fifo_bfs_levels(cg.n, cg.edges, source);
      bool same = true;
      for (oracle::Id x = 0; x < cg.n; ++x)
        same = same && (want[x] == oracle::kNone ? lv[x] == kUnreached : lv[x] == want[x]);
      v.require(same, "levels equal FIFO BFS on n=" + std::to_string(cg.n));
      bool parents_ok = par[source] == source;
      for (oracle::Id x = 0; x < cg.n && parents_ok; ++x) {
        if (x == source || lv[x] == kUnreached) continue;
        const Word p = par[x];
        parents_ok = p < cg.n && lv[p] + 1 == lv[x] &&
                     std::find(adj[x].begin(), adj[x].end(), p) != adj[x].end();
      }
      v.require(parents_ok, "parent property on n=" + std::to_string(cg.n));
      ++searches;
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < kCorrectnessBudgetS, "runtime under 60 s");
  v.detail << searches << " searches, " << secs << " s";
  return v;
}

Verdict criterion3(const std::vector<CorpusGraph>& graphs) {
  Verdict v;
  std::uint64_t rounds = 0, compress_rounds = 0, hook_migrations = 0, remote_mins = 0;
  for (const CorpusGraph& cg : graphs) {
    SimMemory mem(default_pathfinder_config(std::max<std::uint64_t>(cg.nodes, 2)));
    Graph g = Graph::build(to_edges(cg.edges), cg.n, mem);
    Recorder rec(mem.config());
    CcTrace trace;
    connected_components(g, kDefaultMaxIter, rec, &trace);
    for (const CcTrace::Round& r : trace.rounds) {
      ++rounds;
      hook_migrations += r.hook_migrations;
      remote_mins += r.hook_remote_min;
      // Every hooking migration is a thread entering an edge block, so none
      // is left over for remote_min.
      v.require(r.hook_migrations == r.hook_block_entry_migrations,
                "hook migrations all block entries on n=" + std::to_string(cg.n));
      if (r.compressed) {
        ++compress_rounds;
        const std::vector<oracle::Id> forest(r.labels_before_compress.begin(),
                                             r.labels_before_compress.end());
        v.require(r.compress_migrations <= oracle::forest_depth_sum(forest),
                  "compress migrations within forest depth on n=" + std::to_string(cg.n));
      }
    }
  }
  v.require(compress_rounds > 0 && remote_mins > 0, "trace exercised hooking and compress");
  v.detail << rounds << " rounds, " << compress_rounds << " compressed, " << remote_mins
           << " remote_min, " << hook_migrations << " hook migrations (all block entries)";
  return v;
}

std::uint64_t pointer_chase_migrations(std::uint64_t nodes, std::uint64_t length) {
  SimMemory mem(default_pathfinder_config(nodes));
  SimArray a(mem, View::Striped, length);
  for (std::uint64_t i = 0; i + 1 < length; ++i) mem.poke(a.at(i), i + 1);
  mem.poke(a.at(length - 1), kMaxWord);
  Recorder rec(mem.config());
  mem.run_at(a.at(0), rec, [&](SimThread& t) {
    Word next = 0;
    while (next != kMaxWord) next = mem.read(t, a.at(next));
  });
  return rec.counters().total(Counter::migrations);
}

Verdict criterion4() {
  Verdict v;
  // Single node: kernels and chases never migrate.
  {
    SimMemory mem(default_pathfinder_config(1));
    auto pairs = rmat_pairs(9, 4);
    Graph g = Graph::build(to_edges(pairs), 512, mem);
    Recorder rec(mem.config());
    bfs(g, 0, rec);
    connected_components(g, kDefaultMaxIter, rec);
    v.require(rec.counters().total(Counter::migrations) == 0, "1-node kernels migrate 0");
    for (std::uint64_t len : {1u, 2u, 17u, 1000u})
      v.require(pointer_chase_migrations(1, len) == 0, "1-node chase migrates 0");
  }
  std::uint64_t checked = 0;
  for (std::uint64_t len : {2u, 3u, 7u, 64u, 1000u, 4097u}) {
    v.require(pointer_chase_migrations(2, len) == len - 1,
              "2-node chase of " + std::to_string(len) + " migrates L-1");
    ++checked;
  }
  v.detail << checked << " chase lengths on 2 nodes, 1-node workloads at 0";
  return v;
}

Verdict criterion5() {
  Verdict v;
  SimMemory mem(default_pathfinder_config(8));
  for (int s = 0; s < kAtomicSchedules; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s) + 1);
    std::vector<oracle::Id> values(kAtomicOps);
    for (auto& x : values) x = rng() % 1000000007ull;
    // The schedule: a seeded permutation split among host threads that each
    // issue from a different node.
    std::vector<std::size_t> order(kAtomicOps);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    SimArray cells(mem, View::Striped, 16);
    const GlobalAddress min_cell = cells.at(rng() % 16);
    GlobalAddress add_cell = cells.at(rng() % 16);
    while (add_cell.index == min_cell.index) add_cell = cells.at(rng() % 16);
    const Word min_init = kMaxWord;
    mem.poke(min_cell, min_init);
    mem.poke(add_cell, 0);

    std::vector<std::thread> pool;
    for (int w = 0; w < kAtomicHostThreads; ++w) {
      pool.emplace_back([&, w] {
        Recorder rec(mem.config());
        mem.run_at(cells.at(static_cast<std::uint64_t>(w) * 3 % 16), rec, [&](SimThread& t) {
          for (std::size_t k = static_cast<std::size_t>(w); k < order.size();
               k += kAtomicHostThreads) {
            mem.remote_min(t, min_cell, values[order[k]]);
            mem.remote_add(t, add_cell, values[order[k]]);
          }
        });
      });
    }
    for (auto& th : pool) th.join();
    v.require(mem.peek(min_cell) == oracle::fold_min(min_init, values),
              "remote_min fold on schedule " + std::to_string(s));
    v.require(mem.peek(add_cell) == oracle::fold_add(0, values),
              "remote_add fold on schedule " + std::to_string(s));
  }
  v.detail << kAtomicSchedules << " schedules x " << kAtomicOps << " ops x {min, add} on "
           << kAtomicHostThreads << " host threads";
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  RmatParams p;
  p.scale = kBenefitScale;
  p.seed = 1;
  SimMemory mem(default_pathfinder_config(kBenefitNodes));
  Graph g = Graph::build(canonicalize(generate_edges(p)), p.vertex_count(), mem);
  const MachineConfig& cfg = mem.config();
  const auto eligible = [&g](VertexId x) { return g.degree_of(x) > 0; };
  const auto jobs =
      make_mix(kBenefitMaxJobs, 1.0, 7, g.nvertices(), default_job_contexts(cfg), eligible);
  const std::vector<JobProfile> all = profile_jobs(jobs, g);

  std::vector<double> ks, conc_s;
  double worst = 1e300, best = 0;
  for (std::uint64_t k = kBenefitMinJobs; k <= kBenefitMaxJobs; k += kBenefitStep) {
    std::span<const JobProfile> some(all.data(), k);
    check_context_capacity(std::span<const QueryJob>(jobs.data(), k), cfg);
    const RunReport seq = schedule_sequential(some, cfg);
    const RunReport conc = schedule_concurrent(some, cfg);
    const double impr = improvement_percent(seq.makespan_seconds, conc.makespan_seconds);
    worst = std::min(worst, impr);
    best = std::max(best, impr);
    v.require(impr > kBenefitMinImprovement,
              "improvement > 50% at k=" + std::to_string(k));
    ks.push_back(static_cast<double>(k));
    conc_s.push_back(conc.makespan_seconds);
  }
  const double r2 = oracle::r_squared(ks, conc_s);
  const double secs = seconds_since(t0);
  v.require(ks.size() >= 6, "at least 6 points");
  v.require(r2 >= kBenefitMinR2, "concurrent makespan linear in k (R^2)");
  v.require(secs < kBenefitBudgetS, "runtime under 10 min");
  v.detail << ks.size() << " points k=16..64, improvement " << worst << "%.." << best
           << "%, R^2=" << r2 << ", " << secs << " s";
  return v;
}

Verdict criterion7() {
  Verdict v;
  RmatParams p;
  p.scale = 10;
  SimMemory mem(default_pathfinder_config(8));
  Graph g = Graph::build(canonicalize(generate_edges(p)), p.vertex_count(), mem);
  const MachineConfig& cfg = mem.config();
  const std::uint64_t budget = default_job_contexts(cfg);
  const auto eligible = [&g](VertexId x) { return g.degree_of(x) > 0; };

  // Smallest job count the machine cannot hold at once.
  std::uint64_t k = 1;
  while (k * budget <= cfg.total_context_slots()) ++k;
  const auto jobs = make_mix(k, 1.0, 5, g.nvertices(), budget, eligible);

  bool conc_failed = false;
  try {
    run_concurrent(jobs, g);
  } catch (const Error& e) {
    conc_failed = e.code() == Errc::context_exhaustion;
  }
  bool seq_ok = false;
  try {
    seq_ok = run_sequential(jobs, g).jobs.size() == k;
  } catch (const Error&) {
    seq_ok = false;
  }
  std::vector<QueryJob> fewer(jobs.begin(), jobs.end() - 1);
  bool below_ok = true;
  try {
    check_context_capacity(fewer, cfg);
  } catch (const Error&) {
    below_ok = false;
  }
  v.require(conc_failed, "run_concurrent raises context exhaustion");
  v.require(seq_ok, "run_sequential succeeds on the same jobs");
  v.require(below_ok, "one job fewer is admitted");
  v.detail << "K=" << k << " jobs x " << budget << " contexts > " << cfg.total_context_slots()
           << " slots on 8 nodes";
  return v;
}

using Split = std::pair<std::uint64_t, std::uint64_t>;

Verdict criterion8() {
  Verdict v;
  auto split = [](const std::vector<QueryJob>& jobs) {
    std::uint64_t b = 0;
    for (const QueryJob& j : jobs) b += j.kind == JobKind::BFS ? 1 : 0;
    return Split{b, jobs.size() - b};
  };
  v.require(split(make_mix(170, 0.8, 1, 1u << 20, 768)) == Split{136, 34},
            "170 at 0.8 -> 136/34");
  v.require(split(make_mix(700, 0.9, 1, 1u << 20, 768)) == Split{630, 70},
            "700 at 0.9 -> 630/70");

  RmatParams p;
  p.scale = 14;
  SimMemory mem(default_pathfinder_config(8));
  Graph g = Graph::build(canonicalize(generate_edges(p)), p.vertex_count(), mem);
  const auto eligible = [&g](VertexId x) { return g.degree_of(x) > 0; };
  const auto jobs =
      make_mix(10, 0.8, 3, g.nvertices(), default_job_contexts(mem.config()), eligible);
  v.require(split(jobs) == Split{8, 2}, "10 at 0.8 -> 8/2");
  const auto profiles = profile_jobs(jobs, g);
  const RunReport seq = schedule_sequential(profiles, mem.config());
  const RunReport conc = schedule_concurrent(profiles, mem.config());
  const double impr = improvement_percent(seq.makespan_seconds, conc.makespan_seconds);
  v.require(impr > 0.0, "mixed improvement positive");
  v.detail << "splits exact; scale-14 8/2 mix improvement " << impr << "%";
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict criterion9() {
  Verdict v;
  for (std::uint64_t scale = 1; scale <= 14; ++scale) {
    for (std::uint64_t ef : {1u, 4u, 16u}) {
      RmatParams p;
      p.scale = scale;
      p.edgefactor = ef;
      v.require(generate_edges(p).size() == (ef << scale), "tuple count at scale " +
                                                               std::to_string(scale));
    }
  }
  RmatParams big;
  big.scale = 25;
  v.require(rmat_edge_count(big) == 16ull << 25, "scale-25 count");

  for (std::uint64_t scale = 4; scale <= 12; ++scale) {
    RmatParams p;
    p.scale = scale;
    p.seed = 100 + scale;
    const auto raw = generate_edges(p);
    std::vector<oracle::Pair> pairs;
    for (const Edge& e : raw) pairs.emplace_back(e.u, e.v);
    v.require(canonicalize(raw).size() == oracle::hashset_dedup_count(pairs),
              "canonical count at scale " + std::to_string(scale));
  }

  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string a = dir + "/pathsim_accept_a.bin", b = dir + "/pathsim_accept_b.bin";
  std::ostringstream sink;
  const int ra = cli::run({"generate", "--scale", "12", "--seed", "9", "--out", a}, sink, sink);
  const int rb = cli::run({"generate", "--scale", "12", "--seed", "9", "--out", b}, sink, sink);
  const std::string ba = slurp(a), bb = slurp(b);
  v.require(ra == 0 && rb == 0 && !ba.empty() && ba == bb &&
                slurp(a + ".hdr") == slurp(b + ".hdr"),
            "generate byte-identical twice");
  for (const auto& f : {a, b, a + ".hdr", b + ".hdr"}) std::remove(f.c_str());
  v.detail << "counts exact for scales 1..14, canonicalization matches hash set for 4..12, "
           << ba.size() << "-byte file identical";
  return v;
}

Verdict criterion10() {
  Verdict v;
  const std::vector<std::string> args = {"bench", "--scale", "10", "--queries", "4,8,12",
                                         "--mix-bfs", "0.75", "--seed", "11"};
  std::ostringstream o1, o2, e1, e2;
  const int r1 = cli::run(args, o1, e1);
  const int r2 = cli::run(args, o2, e2);
  v.require(r1 == 0 && r2 == 0, "bench exits 0");
  v.require(!o1.str().empty() && o1.str() == o2.str(), "CSV bit-identical");
  v.detail << o1.str().size() << " CSV bytes identical across two runs";
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<Verdict()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name
              << "): " << v.detail.str() << " [" << seconds_since(t0) << " s]" << std::endl;
    failures += v.pass ? 0 : 1;
  };

  const std::vector<CorpusGraph> graphs = corpus();
  report(1, "cc correctness", [&] { return criterion1(graphs); });
  report(2, "bfs correctness", [&] { return criterion2(graphs); });
  report(3, "migration structure", [&] { return criterion3(graphs); });
  report(4, "migration semantics", criterion4);
  report(5, "remote-op atomicity", criterion5);
  report(6, "concurrency benefit", criterion6);
  report(7, "context exhaustion", criterion7);
  report(8, "mix methodology", criterion8);
  report(9, "generator", criterion9);
  report(10, "determinism", criterion10);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
