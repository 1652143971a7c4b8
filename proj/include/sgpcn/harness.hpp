/*
 * Copyright 2026 the sgpcn authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgpcn/controller.hpp"
#include "sgpcn/energy.hpp"
#include "sgpcn/metrics.hpp"
#include "sgpcn/model.hpp"
#include "sgpcn/queueing.hpp"
#include "sgpcn/slot_solver.hpp"

namespace sgpcn::harness {

/// Full simulation configuration; every field defaults to the reference
/// two-BST setup (see default_config).
struct SimConfig {
  model::Topology topology;
  queueing::TrafficSpec traffic;
  energy::EnergyPrices prices;
  Eigen::VectorXd harvest_mean_mw;  // per BST
  controller::LyapunovConfig control;
  std::string algorithm = "tsube";  // tsube | wolpe | zfbf
  long num_slots = 2000;
  std::uint64_t seed = 1;
  int ma_window = 10;
  std::string out_path = "trace.csv";
  double slot_ms = 1.0;
  double bst_scale = 1000.0;

  void validate() const;
};

/// The reference configuration: two six-antenna BSTs 400 m apart with three
/// UEs each at the midpoint, one 0.8-efficiency power line, 1.6/0.6 nano-cent
/// prices, 2.1 nats/slot/Hz arrivals, constant processing rate 8, mean
/// harvests 300 and 200 mW/slot, five-slot frames.
SimConfig default_config();

/// Parses the hierarchical key-value text format ("a.b = value", '#'
/// comments, comma-separated lists). Unknown keys and invariant violations
/// raise std::invalid_argument naming the key.
SimConfig parse_config(const std::string& text);

/// parse_config over a file's contents; a missing key keeps its default, an
/// empty file yields default_config().
SimConfig load_config(const std::string& path);

/// Called after each simulated slot with the solved decision.
using SlotObserver = std::function<void(
    long slot, const slot_solver::PerSlotProblem&, const slot_solver::SlotDecision&)>;

/// Runs the two-time-scale simulation: per frame draw the harvest, snapshot
/// the queues and schedule; per slot draw channels and arrivals, solve the
/// configured algorithm's slot problem and step the queues. Deterministic in
/// (config, seed). Throws std::runtime_error on solver failure, naming the
/// slot and dumping the cone program next to out_path.
std::vector<metrics::TraceRecord> run(const SimConfig& config,
                                      const SlotObserver& observer = {});

/// run() plus CSV emission; returns the trace path.
std::string run_to_file(const SimConfig& config);

/// Fixed column order: slot, frame, algorithm, seed, v, phi, cost_total,
/// cost_bst<m>..., delta_<a>_<b>..., then qa/qu/rate/arr per UE as
/// <prefix>_<m>_<n>. Doubles use %.17g so identical runs give identical bytes.
void write_trace_csv(const std::vector<metrics::TraceRecord>& trace,
                     const model::Topology& topology, const std::string& path);
std::vector<metrics::TraceRecord> read_trace_csv(const std::string& path);

struct RunSummary {
  std::string path;
  std::string algorithm;
  std::uint64_t seed = 0;
  double v = 0.0;
  long slots = 0;
  double mean_cost_cents = 0.0;
  double annualized_dollars = 0.0;
  std::optional<double> delay_slots;
  std::vector<double> cost_moving_average;
};

struct GroupSummary {
  std::string algorithm;
  double v = 0.0;
  int runs = 0;
  double mean_cost_cents = 0.0;
  double std_cost_cents = 0.0;
  double mean_delay_slots = 0.0;
  double std_delay_slots = 0.0;
};

struct Summary {
  std::vector<RunSummary> runs;
  std::vector<GroupSummary> groups;  // keyed by (algorithm, v)
};

/// Per-run statistics plus mean +- sample std across seeds per
/// (algorithm, V) group. The delay uses Little's law over the trailing
/// `window` records; the moving average uses the same window.
Summary summarize(const std::vector<std::string>& paths, int window);

}  // namespace sgpcn::harness
