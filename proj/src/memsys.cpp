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

#include "pathsim/memsys.hpp"

#include <algorithm>
#include <atomic>

#include "pathsim/error.hpp"

namespace pathsim {

Recorder::Recorder(const MachineConfig& cfg)
    : nodes_(cfg.nodes), msps_(cfg.msps_per_node) {}

void Recorder::begin_phase(std::string label, std::uint64_t iteration) {
  PhaseProfile phase;
  phase.label = std::move(label);
  phase.iteration = iteration;
  phase.counters = CounterSet(nodes_);
  phase.workers.assign(nodes_, 0);
  phase.channel_busy.assign(nodes_ * msps_, 0.0);
  phases_.push_back(std::move(phase));
  current_ = &phases_.back();
}

CounterSet Recorder::counters() const {
  CounterSet sum(nodes_);
  for (const auto& phase : phases_) sum.merge(phase.counters);
  return sum;
}

SimMemory::SimMemory(MachineConfig cfg)
    : cfg_(cfg),
      table_((cfg.validate(), cfg.max_allocations)),
      storage_(cfg.max_allocations + 1),
      words_used_(std::make_unique<std::atomic<std::uint64_t>[]>(cfg.nodes)),
      occupancy_(std::make_unique<std::atomic<std::uint64_t>[]>(cfg.nodes)),
      totals_(cfg.nodes),
      recorder_(cfg) {}

SimMemory::~SimMemory() = default;

ArrayId SimMemory::alloc(View view, std::uint64_t length, Word init, NodeId owner) {
  if (length == 0) throw Error(Errc::invalid_argument, "allocation length must be >= 1");
  if (view == View::Absolute && owner >= cfg_.nodes)
    throw Error(Errc::invalid_argument, "absolute allocation owner out of range");

  const std::uint64_t nodes = cfg_.nodes;
  auto segment_length = [&](NodeId n) -> std::uint64_t {
    switch (view) {
      case View::Striped: return striped_count_on(length, nodes, n);
      case View::Replicated: return length;
      case View::Absolute: return n == owner ? length : 0;
    }
    return 0;
  };

  std::lock_guard lock(alloc_mutex_);
  for (NodeId n = 0; n < nodes; ++n) {
    std::uint64_t need = segment_length(n);
    if (words_used_[n].load(std::memory_order_relaxed) + need > cfg_.memory_words_per_node)
      throw Error(Errc::allocation_failure,
                  "node " + std::to_string(n) + " out of memory allocating " +
                      std::to_string(length) + " words");
  }

  auto store = std::make_unique<Storage>();
  store->info = AllocationInfo{view, length, view == View::Absolute ? owner : 0};
  if (view == View::Absolute) {
    store->segments.emplace_back(std::make_unique<Word[]>(length));
    std::fill_n(store->segments[0].get(), length, init);
  } else {
    store->segments.resize(nodes);
    for (NodeId n = 0; n < nodes; ++n) {
      std::uint64_t len = segment_length(n);
      if (len == 0) continue;
      store->segments[n] = std::make_unique<Word[]>(len);
      std::fill_n(store->segments[n].get(), len, init);
    }
  }
  for (NodeId n = 0; n < nodes; ++n)
    words_used_[n].fetch_add(segment_length(n), std::memory_order_relaxed);

  return table_.insert(store->info,
                       [&](ArrayId id) { storage_[id.value] = std::move(store); });
}

void SimMemory::release(ArrayId id) {
  std::lock_guard lock(alloc_mutex_);
  const AllocationInfo* info = table_.find(id);
  if (info == nullptr) return;
  const Storage& st = *storage_[id.value];
  for (NodeId n = 0; n < cfg_.nodes; ++n) {
    std::uint64_t len = 0;
    switch (st.info.view) {
      case View::Striped: len = striped_count_on(st.info.length, cfg_.nodes, n); break;
      case View::Replicated: len = st.info.length; break;
      case View::Absolute: len = n == st.info.owner ? st.info.length : 0; break;
    }
    words_used_[n].fetch_sub(len, std::memory_order_relaxed);
  }
  table_.erase(id);
  storage_[id.value].reset();
}

std::uint64_t SimMemory::words_used(NodeId node) const {
  return words_used_[node].load(std::memory_order_relaxed);
}

const SimMemory::Storage& SimMemory::storage(ArrayId id) const {
  if (table_.find(id) == nullptr)
    throw Error(Errc::invalid_address, "unknown allocation handle " + std::to_string(id.value));
  return *storage_[id.value];
}

SimMemory::Resolved SimMemory::locate(const GlobalAddress& addr, NodeId current) const {
  Placement where = resolve(addr, cfg_, table_, current);
  const Storage& st = *storage_[addr.array.value];
  std::size_t seg = st.info.view == View::Absolute ? 0 : where.node;
  return {&st.segments[seg][where.offset], where};
}

void SimMemory::check_alive(const SimThread& t) const {
  if (!t.alive)
    throw Error(Errc::use_after_termination,
                "thread " + std::to_string(t.id) + " used after termination");
}

void SimMemory::migrate(SimThread& t, NodeId dest, PhaseProfile& phase) {
  occupancy_[t.node].fetch_sub(1, std::memory_order_relaxed);
  occupancy_[dest].fetch_add(1, std::memory_order_relaxed);
  t.node = dest;
  t.chain += cfg_.cost_migration;
  phase.counters.add(Counter::migrations, dest);
  phase.counters.add(Counter::simulated_cycles, dest, cfg_.cost_migration);
}

void SimMemory::charge_local(SimThread& t, PhaseProfile& phase, const Placement& at,
                             Counter kind) {
  t.chain += cfg_.cost_local_access;
  phase.counters.add(kind, at.node);
  phase.counters.add(Counter::simulated_cycles, at.node, cfg_.cost_local_access);
  phase.channel_busy[at.node * cfg_.msps_per_node + at.offset % cfg_.msps_per_node] +=
      cfg_.word_transfer_cycles();
}

void SimMemory::charge_remote(SimThread& t, PhaseProfile& phase, const Placement& at,
                              Counter kind) {
  t.chain += cfg_.cost_issue;
  phase.counters.add(Counter::simulated_cycles, t.node, cfg_.cost_issue);
  phase.counters.add(kind, at.node);
  phase.counters.add(Counter::msp_cycles, at.node, cfg_.cost_remote_op);
  phase.channel_busy[at.node * cfg_.msps_per_node + at.offset % cfg_.msps_per_node] +=
      static_cast<double>(cfg_.cost_remote_op);
}

SimThread SimMemory::spawn_at(const GlobalAddress& addr, Recorder& recorder,
                              std::uint64_t query) {
  NodeId node = home_node(addr, 0);
  auto& slots = occupancy_[node];
  std::uint64_t used = slots.load(std::memory_order_relaxed);
  do {
    if (used >= cfg_.context_slots_per_node)
      throw Error(Errc::context_exhaustion,
                  "no free thread context on node " + std::to_string(node) + " (" +
                      std::to_string(used) + " in use)");
  } while (!slots.compare_exchange_weak(used, used + 1, std::memory_order_relaxed));

  SimThread t;
  t.id = next_thread_.fetch_add(1, std::memory_order_relaxed);
  t.node = node;
  t.query = query;
  t.alive = true;
  t.chain = cfg_.cost_issue;
  t.recorder = &recorder;
  PhaseProfile& phase = recorder.current();
  phase.workers[node] += 1;
  phase.counters.add(Counter::spawns, node);
  phase.counters.add(Counter::simulated_cycles, node, cfg_.cost_issue);
  return t;
}

void SimMemory::terminate(SimThread& t) {
  check_alive(t);
  occupancy_[t.node].fetch_sub(1, std::memory_order_relaxed);
  PhaseProfile& phase = t.recorder->current();
  phase.max_chain = std::max(phase.max_chain, t.chain);
  t.alive = false;
}

Word SimMemory::read(SimThread& t, const GlobalAddress& addr) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  PhaseProfile& phase = t.recorder->current();
  if (r.where.node != t.node) migrate(t, r.where.node, phase);
  charge_local(t, phase, r.where, Counter::local_reads);
  return std::atomic_ref<Word>(*r.word).load(std::memory_order_relaxed);
}

void SimMemory::write(SimThread& t, const GlobalAddress& addr, Word value) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  PhaseProfile& phase = t.recorder->current();
  if (r.where.node == t.node)
    charge_local(t, phase, r.where, Counter::local_writes);
  else
    charge_remote(t, phase, r.where, Counter::remote_write);
  std::atomic_ref<Word>(*r.word).store(value, std::memory_order_relaxed);
}

void SimMemory::remote_min(SimThread& t, const GlobalAddress& addr, Word value) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  charge_remote(t, t.recorder->current(), r.where, Counter::remote_min);
  std::atomic_ref<Word> cell(*r.word);
  Word old = cell.load(std::memory_order_relaxed);
  while (value < old &&
         !cell.compare_exchange_weak(old, value, std::memory_order_relaxed)) {
  }
}

void SimMemory::remote_add(SimThread& t, const GlobalAddress& addr, Word value) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  charge_remote(t, t.recorder->current(), r.where, Counter::remote_add);
  std::atomic_ref<Word>(*r.word).fetch_add(value, std::memory_order_relaxed);
}

void SimMemory::remote_claim(SimThread& t, const GlobalAddress& addr, Word expected,
                             Word desired) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  charge_remote(t, t.recorder->current(), r.where, Counter::remote_claim);
  std::atomic_ref<Word>(*r.word).compare_exchange_strong(expected, desired,
                                                          std::memory_order_relaxed);
}

Word SimMemory::fetch_add(SimThread& t, const GlobalAddress& addr, Word delta) {
  check_alive(t);
  Resolved r = locate(addr, t.node);
  PhaseProfile& phase = t.recorder->current();
  if (r.where.node != t.node) migrate(t, r.where.node, phase);
  charge_local(t, phase, r.where, Counter::local_reads);
  charge_local(t, phase, r.where, Counter::local_writes);
  return std::atomic_ref<Word>(*r.word).fetch_add(delta, std::memory_order_relaxed);
}

bool SimMemory::reduce_or_replicated(SimThread& t, ArrayId handle, std::uint64_t index) {
  check_alive(t);
  const AllocationInfo* info = table_.find(handle);
  if (info == nullptr || info->view != View::Replicated)
    throw Error(Errc::invalid_argument, "reduce_or_replicated needs a replicated allocation");
  const NodeId start = t.node;
  for (std::uint64_t k = 0; k < cfg_.nodes; ++k) {
    NodeId node = static_cast<NodeId>((start + k) % cfg_.nodes);
    GlobalAddress copy{View::Absolute, handle, node * info->length + index};
    if (read(t, copy) != 0) return true;
  }
  return false;
}

void SimMemory::broadcast_replicated(SimThread& t, ArrayId handle, Word value,
                                     std::uint64_t index) {
  check_alive(t);
  const AllocationInfo* info = table_.find(handle);
  if (info == nullptr || info->view != View::Replicated)
    throw Error(Errc::invalid_argument, "broadcast_replicated needs a replicated allocation");
  for (NodeId node = 0; node < cfg_.nodes; ++node)
    write(t, GlobalAddress{View::Absolute, handle, node * info->length + index}, value);
}

Word SimMemory::peek(const GlobalAddress& addr, NodeId node) const {
  return std::atomic_ref<Word>(*locate(addr, node).word).load(std::memory_order_relaxed);
}

void SimMemory::poke(const GlobalAddress& addr, Word value, NodeId node) {
  std::atomic_ref<Word>(*locate(addr, node).word).store(value, std::memory_order_relaxed);
}

std::vector<Word> SimMemory::snapshot(ArrayId id) const {
  const Storage& st = storage(id);
  const auto& info = st.info;
  std::vector<Word> out;
  switch (info.view) {
    case View::Striped:
      out.resize(info.length);
      for (std::uint64_t i = 0; i < info.length; ++i)
        out[i] = st.segments[i % cfg_.nodes][i / cfg_.nodes];
      break;
    case View::Replicated:
      out.reserve(info.length * cfg_.nodes);
      for (NodeId n = 0; n < cfg_.nodes; ++n)
        out.insert(out.end(), st.segments[n].get(), st.segments[n].get() + info.length);
      break;
    case View::Absolute:
      out.assign(st.segments[0].get(), st.segments[0].get() + info.length);
      break;
  }
  return out;
}

void SimMemory::load(ArrayId id, std::span<const Word> values) {
  const Storage& st = storage(id);
  const auto& info = st.info;
  const std::uint64_t expected =
      info.view == View::Replicated ? info.length * cfg_.nodes : info.length;
  if (values.size() != expected)
    throw Error(Errc::invalid_argument, "load: expected " + std::to_string(expected) +
                                            " words, got " + std::to_string(values.size()));
  switch (info.view) {
    case View::Striped:
      for (std::uint64_t i = 0; i < info.length; ++i)
        st.segments[i % cfg_.nodes][i / cfg_.nodes] = values[i];
      break;
    case View::Replicated:
      for (NodeId n = 0; n < cfg_.nodes; ++n)
        std::copy_n(values.begin() + n * info.length, info.length, st.segments[n].get());
      break;
    case View::Absolute:
      std::copy(values.begin(), values.end(), st.segments[0].get());
      break;
  }
}

CounterSet SimMemory::counters() const {
  CounterSet out = recorder_.counters();
  std::lock_guard lock(totals_mutex_);
  out.merge(totals_);
  return out;
}

void SimMemory::commit(const CounterSet& delta) {
  std::lock_guard lock(totals_mutex_);
  totals_.merge(delta);
}

}  // namespace pathsim
