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
 * @file machine.hpp
 * @brief Machine description shared by every layer of the simulator.
 *
 * The simulated system is a set of nodes, each with cache-less multithreaded
 * cores, a pool of hardware thread contexts, and several narrow memory
 * channels that each own a memory-side processor (MSP). Memory is a
 * partitioned global address space addressed through three views:
 *
 *   view 0 (Replicated)  one private copy per node, resolved on the node the
 *                        accessing thread currently occupies
 *   view 1 (Absolute)    a plain global address owned by a single node
 *   view 2 (Striped)     consecutive 64-bit elements on consecutive nodes
 *
 * Addresses are (allocation, element index) pairs rather than packed
 * physical addresses; resolution to (node, local offset) is a pure function
 * of the address and the allocation table.
 */

#ifndef PATHSIM_MACHINE_HPP_
#define PATHSIM_MACHINE_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pathsim {

using Word = std::uint64_t;
using NodeId = std::uint32_t;

inline constexpr Word kMaxWord = ~Word{0};

struct MachineConfig {
  std::uint64_t nodes = 8;
  std::uint64_t cores_per_node = 24;
  std::uint64_t contexts_per_core = 64;
  std::uint64_t msps_per_node = 8;
  double channel_bandwidth_bytes_per_sec = 2e9;
  double clock_hz = 225e6;

  // Thread-visible latencies, in simulated cycles.
  std::uint64_t cost_local_access = 192;
  std::uint64_t cost_migration = 256;
  std::uint64_t cost_issue = 1;
  // MSP occupancy of one remote read-modify-write.
  std::uint64_t cost_remote_op = 3;

  std::uint64_t word_bytes = 8;

  // Saved-context memory: how many live threads a node can hold, including
  // those not currently bound to a hardware context.
  std::uint64_t context_slots_per_node = 8 * 24 * 64;
  std::uint64_t memory_words_per_node = std::uint64_t{1} << 33;
  std::uint64_t max_allocations = std::uint64_t{1} << 16;

  // Work items (edges or vertices) handled by one spawned worker thread.
  std::uint64_t task_grain = 64;

  std::uint64_t contexts_per_node() const {
    return cores_per_node * contexts_per_core;
  }
  std::uint64_t total_contexts() const { return nodes * contexts_per_node(); }
  std::uint64_t total_context_slots() const {
    return nodes * context_slots_per_node;
  }
  /// Channel occupancy, in cycles, of moving one word.
  double word_transfer_cycles() const {
    return static_cast<double>(word_bytes) * clock_hz /
           channel_bandwidth_bytes_per_sec;
  }

  /// Throws Error(invalid_argument) on any non-positive count or rate.
  void validate() const;

  bool operator==(const MachineConfig&) const = default;
};

MachineConfig default_pathfinder_config(std::uint64_t nodes);

/// Threads a single query may keep live: enough that sixteen queries fill
/// every hardware context of the machine.
std::uint64_t default_job_contexts(const MachineConfig& cfg);

/// `key = value` text form. Unknown keys and malformed lines are rejected.
MachineConfig parse_machine_config(std::string_view text,
                                   MachineConfig base = MachineConfig{});
void apply_machine_override(MachineConfig& cfg, std::string_view assignment);
std::string format_machine_config(const MachineConfig& cfg);
MachineConfig load_machine_config(const std::string& path,
                                  MachineConfig base = MachineConfig{});

// ---------------------------------------------------------------------------
// Addresses

enum class View : std::uint8_t { Replicated = 0, Absolute = 1, Striped = 2 };

const char* to_string(View view);

struct ArrayId {
  std::uint32_t value = 0;
  bool operator==(const ArrayId&) const = default;
};

/// An element of an allocation seen through a view. Reading a Replicated
/// allocation through the Absolute view addresses the concatenation of all
/// node copies, so element `node * length + i` is copy `node`'s element i.
struct GlobalAddress {
  View view = View::Striped;
  ArrayId array;
  std::uint64_t index = 0;
};

struct Placement {
  NodeId node = 0;
  std::uint64_t offset = 0;
  bool operator==(const Placement&) const = default;
};

struct AllocationInfo {
  View view = View::Striped;
  std::uint64_t length = 0;
  NodeId owner = 0;  // Absolute allocations only
};

/// Number of elements of a striped array of `length` that live on `node`.
std::uint64_t striped_count_on(std::uint64_t length, std::uint64_t nodes,
                               NodeId node);

/// Fixed-capacity allocation table. Lookups are lock-free and may run
/// concurrently with insertions; identifiers are never reused.
class AllocationTable {
 public:
  explicit AllocationTable(std::uint64_t capacity);

  /// `prepare` runs after the id is reserved and before the entry becomes
  /// visible to find().
  ArrayId insert(const AllocationInfo& info,
                 const std::function<void(ArrayId)>& prepare = {});
  void erase(ArrayId id);

  /// nullptr for unknown or released handles.
  const AllocationInfo* find(ArrayId id) const;

  std::uint64_t live_count() const;

 private:
  struct Slot {
    std::atomic<bool> live{false};
    AllocationInfo info;
  };

  std::unique_ptr<Slot[]> slots_;
  std::uint64_t capacity_;
  std::atomic<std::uint64_t> next_{1};
  std::atomic<std::uint64_t> live_{0};
};

/// Resolves an address to its owning node and offset within that node's
/// segment. `current` is the node of the accessing thread, which only
/// matters for the Replicated view. Throws Error(invalid_address).
Placement resolve(const GlobalAddress& addr, const MachineConfig& cfg,
                  const AllocationTable& table, NodeId current);

NodeId home_node(const GlobalAddress& addr, const MachineConfig& cfg,
                 const AllocationTable& table, NodeId current = 0);

// ---------------------------------------------------------------------------
// Counters

enum class Counter : std::uint8_t {
  migrations,
  local_reads,
  local_writes,
  remote_min,
  remote_add,
  remote_write,
  remote_claim,
  spawns,
  simulated_cycles,
  msp_cycles,
};

inline constexpr std::size_t kCounterKinds = 10;

const char* to_string(Counter counter);

/// Per-node event tallies. A CounterSet has a single writer; sets produced
/// by concurrent streams are combined with merge() at run boundaries.
class CounterSet {
 public:
  CounterSet() = default;
  explicit CounterSet(std::uint64_t nodes);

  std::uint64_t nodes() const { return nodes_; }

  void add(Counter c, NodeId node, std::uint64_t delta = 1) {
    counts_[index(c, node)] += delta;
  }
  std::uint64_t get(Counter c, NodeId node) const {
    return counts_[index(c, node)];
  }
  std::uint64_t total(Counter c) const;
  std::uint64_t remote_ops_total() const;

  void merge(const CounterSet& other);
  /// Element-wise difference; `earlier` must be a prior snapshot.
  CounterSet since(const CounterSet& earlier) const;

  bool operator==(const CounterSet&) const = default;

 private:
  std::size_t index(Counter c, NodeId node) const {
    return static_cast<std::size_t>(node) * kCounterKinds +
           static_cast<std::size_t>(c);
  }

  std::uint64_t nodes_ = 0;
  std::vector<std::uint64_t> counts_;
};

}  // namespace pathsim

#endif  // PATHSIM_MACHINE_HPP_
