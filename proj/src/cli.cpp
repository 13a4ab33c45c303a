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

#include "pathsim/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <span>
#include <tuple>

#include "CLI11.hpp"
#include "pathsim/algos.hpp"
#include "pathsim/error.hpp"
#include "pathsim/queries.hpp"
#include "pathsim/report.hpp"
#include "pathsim/rmat.hpp"
#include "pathsim/verify.hpp"

namespace pathsim::cli {

namespace {

struct MachineOptions {
  std::string path;
  std::vector<std::string> overrides;

  void attach(CLI::App& app) {
    app.add_option("--machine", path,
                   "Machine config file (key = value lines); defaults to $PATHSIM_MACHINE");
    app.add_option("--set", overrides, "Override one machine key, e.g. --set nodes=32")
        ->type_name("KEY=VALUE");
  }

  // Defaults < file < --set.
  MachineConfig resolve() const {
    MachineConfig cfg;
    std::string file = path;
    if (file.empty()) {
      if (const char* env = std::getenv("PATHSIM_MACHINE"); env != nullptr) file = env;
    }
    if (!file.empty()) cfg = load_machine_config(file, cfg);
    for (const std::string& kv : overrides) apply_machine_override(cfg, kv);
    cfg.validate();
    return cfg;
  }
};

struct GraphOptions {
  std::string path;
  std::uint64_t scale = 0;
  std::uint64_t edgefactor = 16;
  std::uint64_t seed = 1;

  void attach(CLI::App& app) {
    auto* g = app.add_option("--graph", path, "Edge file written by `generate`");
    auto* s = app.add_option("--scale", scale, "Generate an R-MAT graph in memory instead")
                  ->check(CLI::Range(1, 40));
    app.add_option("--edgefactor", edgefactor, "R-MAT edge factor for --scale")
        ->check(CLI::PositiveNumber);
    app.add_option("--graph-seed", seed, "R-MAT seed for --scale");
    g->excludes(s);
    s->excludes(g);
  }

  EdgeFile load() const {
    if (!path.empty()) return read_edge_file(path);
    if (scale == 0) throw Error(Errc::invalid_argument, "one of --graph or --scale is required");
    RmatParams p;
    p.scale = scale;
    p.edgefactor = edgefactor;
    p.seed = seed;
    EdgeFile f;
    f.edges = canonicalize(generate_edges(p));
    f.header.vertices = p.vertex_count();
    f.header.edges = f.edges.size();
    return f;
  }
};

struct Loaded {
  std::unique_ptr<SimMemory> mem;
  std::optional<Graph> graph;
  std::uint64_t undirected_edges = 0;
};

Loaded load_graph(const GraphOptions& go, const MachineConfig& cfg) {
  EdgeFile f = go.load();
  Loaded l;
  l.mem = std::make_unique<SimMemory>(cfg);
  l.undirected_edges = f.edges.size();
  l.graph.emplace(Graph::build(f.edges, f.header.vertices, *l.mem));
  return l;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  return out;
}

std::string counters_line(const CounterSet& c) {
  std::ostringstream s;
  s << "migrations=" << c.total(Counter::migrations)
    << " local_reads=" << c.total(Counter::local_reads)
    << " local_writes=" << c.total(Counter::local_writes)
    << " remote_ops=" << c.remote_ops_total();
  return s.str();
}

// Result arrays are little-endian 64-bit words, one per vertex.
void write_words(const std::string& path, std::span<const Word> words) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  for (Word w : words) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((w >> (8 * i)) & 0xff);
    out.write(buf, 8);
  }
  if (!out) throw Error(Errc::io_error, "short write to '" + path + "'");
}

std::vector<Word> read_words(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0)
    throw Error(Errc::io_error, "'" + path + "' is not a whole number of words");
  std::vector<Word> words(bytes.size() / 8);
  for (std::size_t k = 0; k < words.size(); ++k)
    for (int i = 7; i >= 0; --i) words[k] = (words[k] << 8) | bytes[8 * k + i];
  return words;
}

// ---------------------------------------------------------------------------

struct GenerateCmd {
  RmatParams params;
  std::string out;
  bool raw = false;

  void attach(CLI::App& app) {
    app.add_option("--scale", params.scale, "log2 of the vertex count")
        ->required()
        ->check(CLI::Range(1, 40));
    app.add_option("--edgefactor", params.edgefactor, "Edge tuples per vertex")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", params.seed, "Generator seed");
    app.add_option("--a", params.a);
    app.add_option("--b", params.b);
    app.add_option("--c", params.c);
    app.add_option("--d", params.d);
    app.add_option("--out", out, "Edge file to write; the header goes to <out>.hdr")->required();
    app.add_flag("--raw", raw, "Write the raw tuple stream instead of canonical edges");
  }

  int operator()(std::ostream& os) const {
    std::vector<Edge> edges = generate_edges(params);
    EdgeFileHeader h;
    h.vertices = params.vertex_count();
    h.raw_edges = edges.size();
    h.scale = params.scale;
    h.edgefactor = params.edgefactor;
    h.a = params.a;
    h.b = params.b;
    h.c = params.c;
    h.d = params.d;
    h.seed = params.seed;
    if (!raw) edges = canonicalize(std::move(edges));
    h.canonical = !raw;
    h.edges = edges.size();
    write_edge_file(out, h, edges);
    os << "generate vertices=" << h.vertices << " raw_edges=" << h.raw_edges
       << " edges=" << h.edges << " canonical=" << (h.canonical ? "yes" : "no") << '\n';
    return kExitOk;
  }
};

struct BuildCmd {
  MachineOptions machine;
  GraphOptions graph;

  void attach(CLI::App& app) {
    machine.attach(app);
    graph.attach(app);
  }

  int operator()(std::ostream& os) const {
    const MachineConfig cfg = machine.resolve();
    Loaded l = load_graph(graph, cfg);
    os << "build vertices=" << l.graph->nvertices() << " edges=" << l.undirected_edges
       << " directed_edges=" << l.graph->nedges() << " nodes=" << cfg.nodes << '\n';
    for (NodeId n = 0; n < cfg.nodes; ++n)
      os << "node " << n << " words=" << l.mem->words_used(n) << '\n';
    return kExitOk;
  }
};

struct BfsCmd {
  MachineOptions machine;
  GraphOptions graph;
  VertexId source = 0;
  std::string levels_out;
  std::string parents_out;

  void attach(CLI::App& app) {
    machine.attach(app);
    graph.attach(app);
    app.add_option("--source", source, "Search root");
    app.add_option("--levels", levels_out, "Write the level array here");
    app.add_option("--parents", parents_out, "Write the parent array here");
  }

  int operator()(std::ostream& os) const {
    const MachineConfig cfg = machine.resolve();
    Loaded l = load_graph(graph, cfg);
    Recorder rec(cfg);
    BfsResult r = bfs(*l.graph, source, rec);
    const double cycles =
        job_timeline(rec.phases(), cfg, default_job_contexts(cfg)).standalone_cycles();
    os << "bfs source=" << source << " levels=" << r.levels_count << " reached=" << r.reached
       << " time_s=" << cycles / cfg.clock_hz << ' ' << counters_line(rec.counters()) << '\n';
    if (!levels_out.empty()) write_words(levels_out, r.levels());
    if (!parents_out.empty()) write_words(parents_out, r.parents());
    return kExitOk;
  }
};

struct CcCmd {
  MachineOptions machine;
  GraphOptions graph;
  std::uint64_t max_iter = kDefaultMaxIter;
  std::string out;

  void attach(CLI::App& app) {
    machine.attach(app);
    graph.attach(app);
    app.add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Write the label array here");
  }

  int operator()(std::ostream& os) const {
    const MachineConfig cfg = machine.resolve();
    Loaded l = load_graph(graph, cfg);
    Recorder rec(cfg);
    CcResult r = connected_components(*l.graph, max_iter, rec);
    const auto labels = r.label_values();
    std::uint64_t components = 0;
    for (VertexId v = 0; v < labels.size(); ++v) components += labels[v] == v ? 1 : 0;
    const double cycles =
        job_timeline(rec.phases(), cfg, default_job_contexts(cfg)).standalone_cycles();
    os << "cc components=" << components << " iterations=" << r.iterations
       << " converged=" << (r.converged ? "yes" : "no") << " time_s=" << cycles / cfg.clock_hz
       << ' ' << counters_line(rec.counters()) << '\n';
    if (!out.empty()) write_words(out, labels);
    return r.converged ? kExitOk : kExitFailure;
  }
};

struct BenchCmd {
  MachineOptions machine;
  GraphOptions graph;
  std::vector<std::uint64_t> queries;
  std::string mode = "both";
  double mix_bfs = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t job_contexts = 0;
  std::uint64_t max_iter = kDefaultMaxIter;
  std::string csv = "-";
  std::string json;
  bool wallclock = false;

  void attach(CLI::App& app) {
    machine.attach(app);
    graph.attach(app);
    app.add_option("--queries", queries, "Job counts, e.g. 16 or 16,24,32")
        ->required()
        ->delimiter(',');
    app.add_option("--mode", mode, "seq, conc, or both")
        ->check(CLI::IsMember({"seq", "conc", "both"}));
    app.add_option("--mix-bfs", mix_bfs, "Fraction of BFS jobs; the rest are CC")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", seed, "Seed for BFS source selection");
    app.add_option("--job-contexts", job_contexts,
                   "Thread contexts reserved per job (default: machine contexts / 16)");
    app.add_option("--max-iter", max_iter, "CC iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--csv", csv, "CSV output path, - for stdout");
    app.add_option("--json", json, "JSON report path");
    app.add_flag("--wallclock", wallclock, "Also record host elapsed time per run");
  }

  int operator()(std::ostream& os) const {
    for (std::uint64_t n : queries)
      if (n == 0) throw Error(Errc::invalid_argument, "--queries must be positive");
    const MachineConfig cfg = machine.resolve();
    const std::uint64_t contexts = job_contexts != 0 ? job_contexts : default_job_contexts(cfg);
    const bool want_seq = mode != "conc";
    const bool want_conc = mode != "seq";
    Loaded l = load_graph(graph, cfg);
    const Graph& g = *l.graph;
    const auto eligible = [&g](VertexId v) { return g.degree_of(v) > 0; };

    std::vector<std::vector<QueryJob>> sets;
    for (std::uint64_t n : queries) {
      sets.push_back(make_mix(n, mix_bfs, seed, g.nvertices(), contexts, eligible));
      if (want_conc) check_context_capacity(sets.back(), cfg);
    }

    // A job's events do not depend on the set it runs in, so each distinct
    // job executes once and is reused across the sweep.
    std::map<std::tuple<JobKind, VertexId, std::uint64_t>, JobProfile> cache;
    RunOptions ro;
    ro.cc_max_iter = max_iter;
    auto profiles_for = [&](const std::vector<QueryJob>& jobs) {
      std::vector<JobProfile> out;
      for (const QueryJob& job : jobs) {
        auto key = std::make_tuple(job.kind, job.source, job.contexts_requested);
        auto it = cache.find(key);
        if (it == cache.end())
          it = cache.emplace(key, std::move(profile_jobs({&job, 1}, g, ro).front())).first;
        JobProfile p = it->second;
        p.job = job;
        out.push_back(std::move(p));
      }
      return out;
    };

    std::vector<BenchRow> rows;
    for (const auto& jobs : sets) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<JobProfile> profiles = profiles_for(jobs);
      const double profile_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::optional<RunReport> seq;
      std::optional<RunReport> conc;
      auto timed = [&](auto&& schedule) {
        const auto t1 = std::chrono::steady_clock::now();
        RunReport r = schedule(profiles, cfg);
        if (wallclock)
          r.host_seconds =
              profile_s +
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        return r;
      };
      if (want_seq) seq = timed(schedule_sequential);
      if (want_conc) conc = timed(schedule_concurrent);
      const std::string mix = kind_mix(jobs);
      if (seq) rows.push_back({jobs.size(), mix, *seq, std::nullopt});
      if (conc) {
        std::optional<double> impr;
        if (seq) impr = improvement_percent(seq->makespan_seconds, conc->makespan_seconds);
        rows.push_back({jobs.size(), mix, *conc, impr});
      }
    }

    BenchHeader h;
    h.seed = seed;
    h.nodes = cfg.nodes;
    h.vertices = g.nvertices();
    h.edges = l.undirected_edges;
    h.mix_bfs = mix_bfs;
    h.job_contexts = contexts;
    if (csv == "-") {
      write_bench_csv(os, h, rows);
    } else {
      std::ofstream f = open_out(csv);
      write_bench_csv(f, h, rows);
    }
    if (!json.empty()) {
      std::ofstream f = open_out(json);
      write_bench_json(f, h, cfg, rows);
    }
    return kExitOk;
  }
};

struct VerifyCmd {
  MachineOptions machine;
  GraphOptions graph;
  std::uint64_t sources = 4;
  std::uint64_t seed = 1;
  std::string labels;

  void attach(CLI::App& app) {
    machine.attach(app);
    graph.attach(app);
    app.add_option("--sources", sources, "Number of BFS sources to check");
    app.add_option("--seed", seed, "Seed for BFS source selection");
    app.add_option("--labels", labels,
                   "Check this label array (as written by `cc --out`) instead of running CC");
  }

  int operator()(std::ostream& os) const {
    const MachineConfig cfg = machine.resolve();
    Loaded l = load_graph(graph, cfg);
    const Graph& g = *l.graph;
    bool ok = true;
    auto report = [&](const std::string& what, const std::optional<std::string>& problem) {
      os << (problem ? "FAIL " : "PASS ") << what;
      if (problem) os << ": " << *problem;
      os << '\n';
      ok = ok && !problem;
    };

    if (!labels.empty()) {
      report("cc labels from " + labels, check_component_labels(g, read_words(labels)));
    } else {
      CcResult r = connected_components(g);
      std::optional<std::string> problem;
      if (!r.converged) problem = "did not converge";
      if (!problem) problem = check_component_labels(g, r.label_values());
      report("cc", problem);
    }

    const auto eligible = [&g](VertexId v) { return g.degree_of(v) > 0; };
    std::uint64_t usable = 0;
    for (VertexId v = 0; v < g.nvertices(); ++v) usable += eligible(v) ? 1 : 0;
    const std::uint64_t k = std::min(sources, usable);
    for (const QueryJob& job : make_mix(k, 1.0, seed, g.nvertices(), 1, eligible)) {
      BfsResult r = bfs(g, job.source);
      report("bfs source=" + std::to_string(job.source),
             check_bfs(g, job.source, r.levels(), r.parents()));
    }
    return ok ? kExitOk : kExitVerifyFailed;
  }
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return kExitUsage;
    case Errc::context_exhaustion: return kExitContextExhaustion;
    default: return kExitFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator of a migratory-thread machine running concurrent graph queries",
               "pathsim"};
  app.require_subcommand(1);

  GenerateCmd generate;
  BuildCmd build;
  BfsCmd bfs_cmd;
  CcCmd cc_cmd;
  BenchCmd bench;
  VerifyCmd verify;
  generate.attach(*app.add_subcommand("generate", "Write an R-MAT edge file"));
  build.attach(*app.add_subcommand("build", "Load a graph and report its layout"));
  bfs_cmd.attach(*app.add_subcommand("bfs", "Run one breadth-first search"));
  cc_cmd.attach(*app.add_subcommand("cc", "Run connected components"));
  bench.attach(*app.add_subcommand("bench", "Compare sequential and concurrent query sets"));
  verify.attach(*app.add_subcommand("verify", "Check kernels against reference results"));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("generate")) return generate(out);
    if (app.got_subcommand("build")) return build(out);
    if (app.got_subcommand("bfs")) return bfs_cmd(out);
    if (app.got_subcommand("cc")) return cc_cmd(out);
    if (app.got_subcommand("bench")) return bench(out);
    if (app.got_subcommand("verify")) return verify(out);
  } catch (const Error& e) {
    err << "pathsim: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "pathsim: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pathsim::cli
