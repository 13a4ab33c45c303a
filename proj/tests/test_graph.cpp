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

#include <gtest/gtest.h>

#include <algorithm>
#include <thread>

#include "oracles.hpp"
#include "pathsim/error.hpp"
#include "pathsim/graph.hpp"

namespace pathsim {
namespace {

std::vector<Edge> to_edges(const std::vector<oracle::Pair>& pairs) {
  std::vector<Edge> out;
  for (auto [u, v] : pairs) out.push_back({u, v});
  return out;
}

std::uint64_t migrations(SimMemory& mem) {
  return mem.recorder().counters().total(Counter::migrations);
}

TEST(Graph, SingleEdgeOnTwoNodes) {
  SimMemory mem(default_pathfinder_config(2));
  std::vector<Edge> e = {{0, 1}};
  Graph g = Graph::build(e, 2, mem);
  EXPECT_EQ(g.degree_of(0), 1u);
  EXPECT_EQ(g.degree_of(1), 1u);
  EXPECT_EQ(mem.home_node(g.record(0)), 0u);
  EXPECT_EQ(mem.home_node(g.record(1)), 1u);
  EXPECT_EQ(mem.home_node(g.pool_address(0, 0)), 0u);
  EXPECT_EQ(mem.home_node(g.pool_address(1, 0)), 1u);
}

TEST(Graph, EmptyEdgeList) {
  SimMemory mem(default_pathfinder_config(2));
  Graph g = Graph::build({}, 4, mem);
  for (VertexId v = 0; v < 4; ++v) EXPECT_EQ(g.degree_of(v), 0u);
  EXPECT_EQ(g.nedges(), 0u);
}

TEST(Graph, PathOnOneNode) {
  SimMemory mem(default_pathfinder_config(1));
  std::vector<Edge> e = {{0, 1}, {1, 2}};
  Graph g = Graph::build(e, 3, mem);
  EXPECT_EQ(g.degree_of(0), 1u);
  EXPECT_EQ(g.degree_of(1), 2u);
  EXPECT_EQ(g.degree_of(2), 1u);
  EXPECT_EQ(g.nedges(), 4u);
}

TEST(Graph, RejectsNonCanonicalOrOutOfRange) {
  SimMemory mem(default_pathfinder_config(2));
  auto code = [&](std::vector<Edge> e, std::uint64_t n) {
    try {
      Graph::build(e, n, mem);
    } catch (const Error& err) {
      return err.code();
    }
    return Errc::io_error;
  };
  EXPECT_EQ(code({{1, 0}}, 2), Errc::invalid_argument);
  EXPECT_EQ(code({{0, 1}, {0, 1}}, 2), Errc::invalid_argument);
  EXPECT_EQ(code({{0, 2}, {0, 1}}, 3), Errc::invalid_argument);
  EXPECT_EQ(code({{0, 5}}, 3), Errc::invalid_argument);
  EXPECT_EQ(code({}, 0), Errc::invalid_argument);
}

TEST(Graph, StarCenterYieldsExactlyTheLeaves) {
  SimMemory mem(default_pathfinder_config(4));
  std::vector<Edge> e;
  for (VertexId leaf = 1; leaf <= 9; ++leaf) e.push_back({0, leaf});
  Graph g = Graph::build(e, 10, mem);
  std::vector<VertexId> got;
  mem.run_at(g.record(0), mem.recorder(), [&](SimThread& t) {
    got = g.neighbors(t, 0);
    EXPECT_EQ(g.degree(t, 0), 9u);
  });
  EXPECT_EQ(got, (std::vector<VertexId>{1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(migrations(mem), 0u);
}

TEST(Graph, ZeroDegreeIterationMigratesAtMostOnce) {
  SimMemory mem(default_pathfinder_config(4));
  Graph g = Graph::build({}, 8, mem);
  mem.run_at(g.record(0), mem.recorder(), [&](SimThread& t) {
    EXPECT_TRUE(g.neighbors(t, 3).empty());
  });
  EXPECT_LE(migrations(mem), 1u);
}

TEST(Graph, DegreeOfIsolatedAndOutOfRange) {
  SimMemory mem(default_pathfinder_config(2));
  std::vector<Edge> e = {{0, 1}};
  Graph g = Graph::build(e, 3, mem);
  mem.run_at(g.record(2), mem.recorder(), [&](SimThread& t) {
    EXPECT_EQ(g.degree(t, 2), 0u);
    EXPECT_EQ(g.degree(t, 1), 1u);
    EXPECT_THROW(g.degree(t, 3), Error);
  });
  EXPECT_THROW(g.neighbors_of(3), Error);
}

class RandomGraphs : public ::testing::TestWithParam<int> {};

TEST_P(RandomGraphs, Invariants) {
  const int seed = GetParam();
  const std::uint64_t nodes = 1 + seed % 7;
  const oracle::Id n = 20 + static_cast<oracle::Id>(seed) * 13;
  const auto pairs = oracle::random_graph(n, n * (1 + seed % 5), static_cast<std::uint64_t>(seed));
  const auto adj = oracle::adjacency(n, pairs);
  SimMemory mem(default_pathfinder_config(nodes));
  Graph g = Graph::build(to_edges(pairs), n, mem);

  EXPECT_EQ(g.nedges(), 2 * pairs.size());
  std::uint64_t degree_sum = 0;
  for (VertexId v = 0; v < n; ++v) {
    auto want = adj[v];
    std::sort(want.begin(), want.end());
    EXPECT_EQ(g.neighbors_of(v), want);
    degree_sum += g.degree_of(v);
    // Record and block share the vertex's home node.
    EXPECT_EQ(mem.home_node(g.record(v)), v % nodes);
    for (VertexId j : g.neighbors_of(v)) {
      auto back = g.neighbors_of(j);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), v));
    }
  }
  EXPECT_EQ(degree_sum, g.nedges());
  EXPECT_EQ(degree_sum % 2, 0u);

  // Iterating any vertex from anywhere costs at most one migration.
  for (VertexId v = 0; v < n; v += 3) {
    const std::uint64_t before = migrations(mem);
    mem.run_at(g.record((v + 1) % n), mem.recorder(), [&](SimThread& t) {
      EXPECT_EQ(g.neighbors(t, v), g.neighbors_of(v));
    });
    EXPECT_LE(migrations(mem) - before, 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGraphs, ::testing::Range(1, 21));

TEST(Graph, RebuildIsIdentical) {
  const auto pairs = oracle::random_graph(300, 900, 4);
  SimMemory a(default_pathfinder_config(3));
  SimMemory b(default_pathfinder_config(3));
  Graph ga = Graph::build(to_edges(pairs), 300, a);
  Graph gb = Graph::build(to_edges(pairs), 300, b);
  for (VertexId v = 0; v < 300; ++v) EXPECT_EQ(ga.neighbors_of(v), gb.neighbors_of(v));
}

TEST(Graph, ConcurrentReadersAgree) {
  const auto pairs = oracle::random_graph(500, 3000, 9);
  SimMemory mem(default_pathfinder_config(4));
  Graph g = Graph::build(to_edges(pairs), 500, mem);
  std::vector<std::uint64_t> sums(4, 0);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      Recorder rec(mem.config());
      for (VertexId v = 0; v < 500; ++v) {
        mem.run_at(g.record(v), rec, [&](SimThread& t) {
          g.for_each_neighbor(t, v, [&](VertexId j) { sums[w] += j; });
        });
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int w = 1; w < 4; ++w) EXPECT_EQ(sums[w], sums[0]);
}

}  // namespace
}  // namespace pathsim
