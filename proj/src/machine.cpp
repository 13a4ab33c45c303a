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

#include "pathsim/machine.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "pathsim/error.hpp"

namespace pathsim {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_address: return "invalid-address";
    case Errc::allocation_failure: return "allocation-failure";
    case Errc::use_after_termination: return "use-after-termination";
    case Errc::context_exhaustion: return "context-exhaustion";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

void MachineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::invalid_argument, std::string("machine config: ") + what);
  };
  require(nodes >= 1, "nodes must be >= 1");
  require(cores_per_node >= 1, "cores_per_node must be >= 1");
  require(contexts_per_core >= 1, "contexts_per_core must be >= 1");
  require(msps_per_node >= 1, "msps_per_node must be >= 1");
  require(channel_bandwidth_bytes_per_sec > 0, "channel_bandwidth_bytes_per_sec must be > 0");
  require(clock_hz > 0, "clock_hz must be > 0");
  require(cost_local_access >= 1, "cost_local_access must be >= 1");
  require(cost_migration >= 1, "cost_migration must be >= 1");
  require(cost_issue >= 1, "cost_issue must be >= 1");
  require(cost_remote_op >= 1, "cost_remote_op must be >= 1");
  require(word_bytes == 8, "word_bytes is fixed at 8");
  require(context_slots_per_node >= 1, "context_slots_per_node must be >= 1");
  require(memory_words_per_node >= 1, "memory_words_per_node must be >= 1");
  require(max_allocations >= 1, "max_allocations must be >= 1");
  require(task_grain >= 1, "task_grain must be >= 1");
}

MachineConfig default_pathfinder_config(std::uint64_t nodes) {
  if (nodes == 0) throw Error(Errc::invalid_argument, "node count must be >= 1");
  MachineConfig cfg;
  cfg.nodes = nodes;
  return cfg;
}

std::uint64_t default_job_contexts(const MachineConfig& cfg) {
  std::uint64_t budget = cfg.total_contexts() / 16;
  return budget == 0 ? 1 : budget;
}

namespace {

struct Field {
  std::function<void(MachineConfig&, std::string_view)> set;
  std::function<std::string(const MachineConfig&)> get;
};

std::uint64_t parse_count(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    // Accept integral values written in floating notation, e.g. 2e3.
    double d = 0;
    try {
      std::size_t used = 0;
      d = std::stod(std::string(value), &used);
      if (used != value.size() || d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d)))
        throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument,
                  "machine config: bad integer for " + std::string(key) + ": '" +
                      std::string(value) + "'");
    }
    out = static_cast<std::uint64_t>(d);
  }
  return out;
}

double parse_rate(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    double d = std::stod(std::string(value), &used);
    if (used != value.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "machine config: bad number for " +
                                            std::string(key) + ": '" +
                                            std::string(value) + "'");
  }
}

std::string format_double(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

#define PATHSIM_COUNT_FIELD(name)                                              \
  {                                                                            \
    #name, Field {                                                             \
      [](MachineConfig& c, std::string_view v) { c.name = parse_count(#name, v); }, \
          [](const MachineConfig& c) { return std::to_string(c.name); }        \
    }                                                                          \
  }
#define PATHSIM_RATE_FIELD(name)                                               \
  {                                                                            \
    #name, Field {                                                             \
      [](MachineConfig& c, std::string_view v) { c.name = parse_rate(#name, v); }, \
          [](const MachineConfig& c) { return format_double(c.name); }         \
    }                                                                          \
  }

const std::vector<std::pair<std::string_view, Field>>& fields() {
  static const std::vector<std::pair<std::string_view, Field>> table = {
      PATHSIM_COUNT_FIELD(nodes),
      PATHSIM_COUNT_FIELD(cores_per_node),
      PATHSIM_COUNT_FIELD(contexts_per_core),
      PATHSIM_COUNT_FIELD(msps_per_node),
      PATHSIM_RATE_FIELD(channel_bandwidth_bytes_per_sec),
      PATHSIM_RATE_FIELD(clock_hz),
      PATHSIM_COUNT_FIELD(cost_local_access),
      PATHSIM_COUNT_FIELD(cost_migration),
      PATHSIM_COUNT_FIELD(cost_issue),
      PATHSIM_COUNT_FIELD(cost_remote_op),
      PATHSIM_COUNT_FIELD(word_bytes),
      PATHSIM_COUNT_FIELD(context_slots_per_node),
      PATHSIM_COUNT_FIELD(memory_words_per_node),
      PATHSIM_COUNT_FIELD(max_allocations),
      PATHSIM_COUNT_FIELD(task_grain),
  };
  return table;
}

#undef PATHSIM_COUNT_FIELD
#undef PATHSIM_RATE_FIELD

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

void assign(MachineConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(cfg, value);
      return;
    }
  }
  throw Error(Errc::invalid_argument, "machine config: unknown key '" + std::string(key) + "'");
}

}  // namespace

void apply_machine_override(MachineConfig& cfg, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(Errc::invalid_argument,
                "machine config: expected key=value, got '" + std::string(assignment) + "'");
  auto key = trim(assignment.substr(0, eq));
  auto value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty())
    throw Error(Errc::invalid_argument,
                "machine config: expected key=value, got '" + std::string(assignment) + "'");
  assign(cfg, key, value);
}

MachineConfig parse_machine_config(std::string_view text, MachineConfig base) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_machine_override(base, line);
  }
  return base;
}

std::string format_machine_config(const MachineConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) {
    out += name;
    out += " = ";
    out += field.get(cfg);
    out += '\n';
  }
  return out;
}

MachineConfig load_machine_config(const std::string& path, MachineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open machine config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_machine_config(buf.str(), base);
}

const char* to_string(View view) {
  switch (view) {
    case View::Replicated: return "replicated";
    case View::Absolute: return "absolute";
    case View::Striped: return "striped";
  }
  return "unknown";
}

std::uint64_t striped_count_on(std::uint64_t length, std::uint64_t nodes, NodeId node) {
  return length / nodes + (node < length % nodes ? 1 : 0);
}

AllocationTable::AllocationTable(std::uint64_t capacity)
    : slots_(std::make_unique<Slot[]>(capacity + 1)), capacity_(capacity) {}

ArrayId AllocationTable::insert(const AllocationInfo& info,
                                const std::function<void(ArrayId)>& prepare) {
  std::uint64_t id = next_.fetch_add(1, std::memory_order_relaxed);
  if (id > capacity_) {
    next_.fetch_sub(1, std::memory_order_relaxed);
    throw Error(Errc::allocation_failure, "allocation table full");
  }
  Slot& slot = slots_[id];
  slot.info = info;
  if (prepare) prepare(ArrayId{static_cast<std::uint32_t>(id)});
  slot.live.store(true, std::memory_order_release);
  live_.fetch_add(1, std::memory_order_relaxed);
  return ArrayId{static_cast<std::uint32_t>(id)};
}

void AllocationTable::erase(ArrayId id) {
  if (id.value == 0 || id.value > capacity_) return;
  if (slots_[id.value].live.exchange(false, std::memory_order_acq_rel))
    live_.fetch_sub(1, std::memory_order_relaxed);
}

const AllocationInfo* AllocationTable::find(ArrayId id) const {
  if (id.value == 0 || id.value > capacity_) return nullptr;
  const Slot& slot = slots_[id.value];
  return slot.live.load(std::memory_order_acquire) ? &slot.info : nullptr;
}

std::uint64_t AllocationTable::live_count() const {
  return live_.load(std::memory_order_relaxed);
}

Placement resolve(const GlobalAddress& addr, const MachineConfig& cfg,
                  const AllocationTable& table, NodeId current) {
  const AllocationInfo* info = table.find(addr.array);
  if (info == nullptr)
    throw Error(Errc::invalid_address,
                "unknown allocation handle " + std::to_string(addr.array.value));
  auto out_of_range = [&] {
    return Error(Errc::invalid_address, "index " + std::to_string(addr.index) +
                                            " out of range for allocation " +
                                            std::to_string(addr.array.value));
  };
  switch (info->view) {
    case View::Striped:
      if (addr.view != View::Striped)
        throw Error(Errc::invalid_address, "striped allocation accessed through another view");
      if (addr.index >= info->length) throw out_of_range();
      return {static_cast<NodeId>(addr.index % cfg.nodes), addr.index / cfg.nodes};
    case View::Absolute:
      if (addr.view != View::Absolute)
        throw Error(Errc::invalid_address, "absolute allocation accessed through another view");
      if (addr.index >= info->length) throw out_of_range();
      return {info->owner, addr.index};
    case View::Replicated:
      if (addr.view == View::Replicated) {
        if (addr.index >= info->length) throw out_of_range();
        if (current >= cfg.nodes)
          throw Error(Errc::invalid_address, "accessing node out of range");
        return {current, addr.index};
      }
      if (addr.view == View::Absolute) {
        if (addr.index >= info->length * cfg.nodes) throw out_of_range();
        return {static_cast<NodeId>(addr.index / info->length), addr.index % info->length};
      }
      throw Error(Errc::invalid_address, "replicated allocation accessed through striped view");
  }
  throw out_of_range();
}

NodeId home_node(const GlobalAddress& addr, const MachineConfig& cfg,
                 const AllocationTable& table, NodeId current) {
  return resolve(addr, cfg, table, current).node;
}

const char* to_string(Counter counter) {
  switch (counter) {
    case Counter::migrations: return "migrations";
    case Counter::local_reads: return "local_reads";
    case Counter::local_writes: return "local_writes";
    case Counter::remote_min: return "remote_min";
    case Counter::remote_add: return "remote_add";
    case Counter::remote_write: return "remote_write";
    case Counter::remote_claim: return "remote_claim";
    case Counter::spawns: return "spawns";
    case Counter::simulated_cycles: return "simulated_cycles";
    case Counter::msp_cycles: return "msp_cycles";
  }
  return "unknown";
}

CounterSet::CounterSet(std::uint64_t nodes)
    : nodes_(nodes), counts_(static_cast<std::size_t>(nodes) * kCounterKinds, 0) {}

std::uint64_t CounterSet::total(Counter c) const {
  std::uint64_t sum = 0;
  for (NodeId n = 0; n < nodes_; ++n) sum += get(c, n);
  return sum;
}

std::uint64_t CounterSet::remote_ops_total() const {
  return total(Counter::remote_min) + total(Counter::remote_add) +
         total(Counter::remote_write) + total(Counter::remote_claim);
}

void CounterSet::merge(const CounterSet& other) {
  if (nodes_ == 0) {
    *this = other;
    return;
  }
  if (other.nodes_ == 0) return;
  if (other.nodes_ != nodes_)
    throw Error(Errc::invalid_argument, "merging counter sets of different node counts");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

CounterSet CounterSet::since(const CounterSet& earlier) const {
  if (earlier.nodes_ == 0) return *this;
  if (earlier.nodes_ != nodes_)
    throw Error(Errc::invalid_argument, "differencing counter sets of different node counts");
  CounterSet out(nodes_);
  for (std::size_t i = 0; i < counts_.size(); ++i) out.counts_[i] = counts_[i] - earlier.counts_[i];
  return out;
}

}  // namespace pathsim
