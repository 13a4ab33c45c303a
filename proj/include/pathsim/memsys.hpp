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
 * @file memsys.hpp
 * @brief Simulated global memory, migratory threads, and MSP remote operations.
 *
 * Threads only ever read memory on the node they occupy. A read of a word
 * homed elsewhere first migrates the thread there. Writes and the remote
 * read-modify-write operations (min, add, claim) never move the thread; they
 * are queued at the memory-side processor of the channel owning the word.
 *
 * Every operation is charged to a Recorder, which keeps per-phase counters
 * and the resource usage the timing model needs:
 *
 *   simulated_cycles  thread-visible latency accumulated on each node
 *   channel_busy      occupancy of each memory channel (word transfers and
 *                     MSP read-modify-write cycles)
 *   workers           threads spawned on each node
 *   max_chain         longest single-thread latency chain
 */

#ifndef PATHSIM_MEMSYS_HPP_
#define PATHSIM_MEMSYS_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathsim/machine.hpp"

namespace pathsim {

struct PhaseProfile {
  std::string label;
  std::uint64_t iteration = 0;
  CounterSet counters;
  std::vector<std::uint64_t> workers;   // per node
  std::vector<double> channel_busy;     // node * msps_per_node + channel
  std::uint64_t max_chain = 0;
  // Migrations taken to reach a vertex's edge block from another node.
  std::uint64_t block_entry_migrations = 0;

  double channel(NodeId node, std::uint64_t ch, std::uint64_t msps) const {
    return channel_busy[node * msps + ch];
  }
};

/// Accumulates the events of one execution stream (typically one query).
/// Single writer: never share a Recorder between host threads.
class Recorder {
 public:
  explicit Recorder(const MachineConfig& cfg);

  void begin_phase(std::string label, std::uint64_t iteration = 0);

  /// The open phase; opens an "adhoc" phase when none has been started.
  PhaseProfile& current() {
    if (current_ == nullptr) begin_phase("adhoc");
    return *current_;
  }

  const std::vector<PhaseProfile>& phases() const { return phases_; }
  CounterSet counters() const;
  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t msps() const { return msps_; }

 private:
  std::uint64_t nodes_;
  std::uint64_t msps_;
  std::vector<PhaseProfile> phases_;
  PhaseProfile* current_ = nullptr;
};

struct SimThread {
  std::uint64_t id = 0;
  NodeId node = 0;
  std::uint64_t query = 0;
  bool alive = false;
  std::uint64_t chain = 0;  // latency accumulated since spawn
  Recorder* recorder = nullptr;
};

class SimMemory {
 public:
  explicit SimMemory(MachineConfig cfg);
  ~SimMemory();

  SimMemory(const SimMemory&) = delete;
  SimMemory& operator=(const SimMemory&) = delete;

  const MachineConfig& config() const { return cfg_; }
  const AllocationTable& table() const { return table_; }

  /// Striped arrays place element i on node i mod nodes, Replicated arrays
  /// get one copy per node, Absolute arrays live wholly on `owner`.
  ArrayId alloc(View view, std::uint64_t length, Word init = 0, NodeId owner = 0);
  /// The caller guarantees no thread still accesses the allocation.
  void release(ArrayId id);
  std::uint64_t words_used(NodeId node) const;

  NodeId home_node(const GlobalAddress& addr, NodeId current = 0) const {
    return pathsim::home_node(addr, cfg_, table_, current);
  }

  SimThread spawn_at(const GlobalAddress& addr, Recorder& recorder,
                     std::uint64_t query = 0);
  SimThread spawn_at(const GlobalAddress& addr) { return spawn_at(addr, recorder_); }
  void terminate(SimThread& t);

  /// Spawns at `addr`, runs `body(SimThread&)`, and terminates the thread.
  template <typename Body>
  void run_at(const GlobalAddress& addr, Recorder& recorder, Body&& body) {
    SimThread t = spawn_at(addr, recorder);
    try {
      body(t);
    } catch (...) {
      if (t.alive) terminate(t);
      throw;
    }
    terminate(t);
  }

  Word read(SimThread& t, const GlobalAddress& addr);
  void write(SimThread& t, const GlobalAddress& addr, Word value);
  void remote_min(SimThread& t, const GlobalAddress& addr, Word value);
  void remote_add(SimThread& t, const GlobalAddress& addr, Word value);
  /// MSP conditional store: the word becomes `desired` only if it still
  /// holds `expected`. Fire-and-forget like every remote operation.
  void remote_claim(SimThread& t, const GlobalAddress& addr, Word expected, Word desired);
  /// Atomic read-modify-write executed by the thread itself; migrates like a
  /// read and returns the previous value.
  Word fetch_add(SimThread& t, const GlobalAddress& addr, Word delta);

  /// Logical OR of element `index` across every node copy of a Replicated
  /// allocation. Visits nodes in order starting from the thread's node and
  /// stops at the first nonzero copy.
  bool reduce_or_replicated(SimThread& t, ArrayId handle, std::uint64_t index = 0);
  /// Stores `value` into element `index` of every node copy.
  void broadcast_replicated(SimThread& t, ArrayId handle, Word value,
                            std::uint64_t index = 0);

  // Uncounted host access, for loading inputs and inspecting results.
  Word peek(const GlobalAddress& addr, NodeId node = 0) const;
  void poke(const GlobalAddress& addr, Word value, NodeId node = 0);
  /// Striped: element order. Replicated: node-major copies. Absolute: as is.
  std::vector<Word> snapshot(ArrayId id) const;
  void load(ArrayId id, std::span<const Word> values);

  /// Recorder used by threads spawned without one.
  Recorder& recorder() { return recorder_; }

  /// Totals committed by finished runs plus the default recorder's events.
  CounterSet counters() const;
  void commit(const CounterSet& delta);

  std::uint64_t occupancy(NodeId node) const {
    return occupancy_[node].load(std::memory_order_relaxed);
  }

 private:
  struct Storage {
    AllocationInfo info;
    std::vector<std::unique_ptr<Word[]>> segments;
  };

  struct Resolved {
    Word* word;
    Placement where;
  };

  Resolved locate(const GlobalAddress& addr, NodeId current) const;
  void check_alive(const SimThread& t) const;
  void migrate(SimThread& t, NodeId dest, PhaseProfile& phase);
  void charge_local(SimThread& t, PhaseProfile& phase, const Placement& at, Counter kind);
  void charge_remote(SimThread& t, PhaseProfile& phase, const Placement& at, Counter kind);
  const Storage& storage(ArrayId id) const;

  MachineConfig cfg_;
  AllocationTable table_;
  std::vector<std::unique_ptr<Storage>> storage_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> words_used_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> occupancy_;
  std::atomic<std::uint64_t> next_thread_{1};
  std::mutex alloc_mutex_;
  mutable std::mutex totals_mutex_;
  CounterSet totals_;
  Recorder recorder_;
};

/// Owning handle for one allocation; releases it on destruction.
class SimArray {
 public:
  SimArray() = default;
  SimArray(SimMemory& mem, View view, std::uint64_t length, Word init = 0,
           NodeId owner = 0)
      : mem_(&mem), id_(mem.alloc(view, length, init, owner)), view_(view),
        length_(length) {}
  ~SimArray() { reset(); }

  SimArray(SimArray&& other) noexcept { *this = std::move(other); }
  SimArray& operator=(SimArray&& other) noexcept {
    if (this != &other) {
      reset();
      mem_ = std::exchange(other.mem_, nullptr);
      id_ = other.id_;
      view_ = other.view_;
      length_ = other.length_;
    }
    return *this;
  }

  ArrayId id() const { return id_; }
  View view() const { return view_; }
  std::uint64_t length() const { return length_; }
  explicit operator bool() const { return mem_ != nullptr; }

  GlobalAddress at(std::uint64_t i) const { return {view_, id_, i}; }
  std::vector<Word> snapshot() const { return mem_->snapshot(id_); }

  void reset() {
    if (mem_ != nullptr) mem_->release(id_);
    mem_ = nullptr;
  }

 private:
  SimMemory* mem_ = nullptr;
  ArrayId id_;
  View view_ = View::Striped;
  std::uint64_t length_ = 0;
};

}  // namespace pathsim

#endif  // PATHSIM_MEMSYS_HPP_
