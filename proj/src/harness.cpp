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

#include "sgpcn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sgpcn/baselines.hpp"
#include "sgpcn/rng.hpp"

namespace sgpcn::harness {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "': " + what);
}

/// Key-value view over the config text with typed, defaulted getters.
class Keys {
 public:
  explicit Keys(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected 'key = value'");
      kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }

  double number(const std::string& key, double fallback) {
    const auto v = fetch(key);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      key_error(key, "not a number: '" + *v + "'");
    }
  }

  long integer(const std::string& key, long fallback) {
    const double x = number(key, static_cast<double>(fallback));
    const long i = static_cast<long>(x);
    if (static_cast<double>(i) != x) key_error(key, "not an integer");
    return i;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto v = fetch(key);
    return v ? *v : fallback;
  }

  /// Scalar broadcast or exact-length list.
  Eigen::VectorXd broadcast(const std::string& key, int n, double fallback) {
    const auto v = fetch(key);
    Eigen::VectorXd out(n);
    if (!v) {
      out.setConstant(fallback);
      return out;
    }
    const std::vector<std::string> items = split(*v, ',');
    if (items.size() != 1 && static_cast<int>(items.size()) != n)
      key_error(key, "expected 1 or " + std::to_string(n) + " values");
    for (int i = 0; i < n; ++i) {
      const std::string& s = items[items.size() == 1 ? 0 : i];
      try {
        out(i) = std::stod(s);
      } catch (...) {
        key_error(key, "not a number: '" + s + "'");
      }
    }
    return out;
  }

  std::vector<long> integer_list(const std::string& key,
                                 const std::vector<long>& fallback) {
    const auto v = fetch(key);
    if (!v) return fallback;
    std::vector<long> out;
    for (const std::string& s : split(*v, ',')) {
      try {
        out.push_back(std::stol(s));
      } catch (...) {
        key_error(key, "not an integer: '" + s + "'");
      }
    }
    return out;
  }

  bool present(const std::string& key) const { return kv_.count(key) > 0; }
  std::optional<std::string> fetch(const std::string& key) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : kv_)
      if (used_.count(key) == 0) key_error(key, "unknown key");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

slot_solver::SlotResult dispatch(const std::string& algorithm,
                                 const slot_solver::PerSlotProblem& prob) {
  if (algorithm == "tsube") return slot_solver::tsube_slot(prob);
  if (algorithm == "wolpe") return baselines::wolpe_slot(prob);
  if (algorithm == "zfbf") return baselines::zfbf_slot(prob);
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

}  // namespace

void SimConfig::validate() const {
  prices.validate();
  traffic.validate();
  if (algorithm != "tsube" && algorithm != "wolpe" && algorithm != "zfbf")
    throw std::invalid_argument("config key 'control.algorithm': must be tsube, wolpe or zfbf");
  if (num_slots < 0)
    throw std::invalid_argument("config key 'run.slots': must be >= 0");
  if (ma_window < 1)
    throw std::invalid_argument("config key 'run.window': must be >= 1");
  if (slot_ms <= 0.0)
    throw std::invalid_argument("config key 'run.slot_ms': must be positive");
  if (bst_scale <= 0.0)
    throw std::invalid_argument("config key 'run.bst_scale': must be positive");
  if (harvest_mean_mw.size() != topology.num_bsts)
    throw std::invalid_argument("config key 'harvest.mean_mw': one value per BST");
  if ((harvest_mean_mw.array() < 0.0).any())
    throw std::invalid_argument("config key 'harvest.mean_mw': must be >= 0");
  if (control.v <= 0.0)
    throw std::invalid_argument("config key 'control.v': must be positive");
  if (control.frame_slots < 1)
    throw std::invalid_argument("config key 'control.frame_slots': must be >= 1");
}

SimConfig default_config() { return parse_config(""); }

SimConfig parse_config(const std::string& text) {
  Keys keys(text);
  SimConfig cfg;

  model::Topology& topo = cfg.topology;
  topo.num_bsts = static_cast<int>(keys.integer("topology.num_bsts", 2));
  topo.antennas_per_bst =
      static_cast<int>(keys.integer("topology.antennas_per_bst", 6));
  std::vector<long> ues =
      keys.integer_list("topology.ues_per_bst",
                        std::vector<long>(std::max(topo.num_bsts, 0), 3));
  if (static_cast<int>(ues.size()) == 1 && topo.num_bsts > 1)
    ues.assign(topo.num_bsts, ues[0]);
  topo.ues_per_bst.assign(ues.begin(), ues.end());
  int total_ues = 0;
  for (long n : ues) total_ues += static_cast<int>(n);

  const double inter = keys.number("topology.inter_bst_distance_m", 400.0);
  const std::string layout = keys.text("topology.layout", "midpoint");
  if (layout == "midpoint") {
    topo.distance_m =
        Eigen::MatrixXd::Constant(topo.num_bsts, total_ues, inter / 2.0);
  } else if (layout == "explicit") {
    const Eigen::VectorXd flat = keys.broadcast(
        "topology.distances_m", topo.num_bsts * total_ues, 0.0);
    topo.distance_m = Eigen::MatrixXd(topo.num_bsts, total_ues);
    for (int j = 0; j < topo.num_bsts; ++j)
      for (int u = 0; u < total_ues; ++u)
        topo.distance_m(j, u) = flat(j * total_ues + u);
  } else {
    key_error("topology.layout", "must be midpoint or explicit");
  }

  topo.carrier_freq_ghz = keys.number("topology.carrier_freq_ghz", 2.1);
  topo.noise_mw =
      keys.broadcast("topology.noise_mw", total_ues, std::pow(10.0, -10.7));
  topo.pa_efficiency = keys.number("topology.pa_efficiency", 0.8);
  topo.max_tx_mw = keys.broadcast("topology.max_tx_mw", topo.num_bsts, 400.0);
  topo.baseband_mw =
      keys.broadcast("topology.baseband_mw", topo.num_bsts, 100.0);

  const std::string default_edges = topo.num_bsts >= 2 ? "0-1" : "none";
  const std::string edges = keys.text("lines.edges", default_edges);
  std::vector<std::pair<int, int>> edge_list;
  if (edges != "none" && !edges.empty()) {
    for (const std::string& item : split(edges, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos)
        key_error("lines.edges", "expected entries like 0-1");
      try {
        edge_list.emplace_back(std::stoi(item.substr(0, dash)),
                               std::stoi(item.substr(dash + 1)));
      } catch (...) {
        key_error("lines.edges", "expected entries like 0-1");
      }
    }
  }
  const Eigen::VectorXd betas = keys.broadcast(
      "lines.efficiency", std::max<int>(1, edge_list.size()), 0.8);
  for (std::size_t e = 0; e < edge_list.size(); ++e)
    topo.lines.push_back({edge_list[e].first, edge_list[e].second,
                          betas(std::min<Eigen::Index>(e, betas.size() - 1))});

  topo.finalize();

  cfg.prices.buy = keys.number("prices.buy", 1.6e-9);
  cfg.prices.sell = keys.number("prices.sell", 0.6e-9);

  queueing::TrafficSpec& traffic = cfg.traffic;
  traffic.mean_arrival = keys.broadcast("traffic.mean_arrival", total_ues, 2.1);
  traffic.processing_rate =
      keys.broadcast("traffic.processing_rate", total_ues, 8.0);
  traffic.max_arrival = keys.number("traffic.max_arrival",
                                    2.0 * traffic.mean_arrival.maxCoeff());
  traffic.max_service = traffic.processing_rate.maxCoeff();
  // Rate envelope: the best single link could ever do with full power.
  double best_gain = 0.0;
  for (int j = 0; j < topo.num_bsts; ++j)
    for (int u = 0; u < total_ues; ++u)
      best_gain = std::max(best_gain, 1.0 / topo.pathloss_linear(j, u));
  const double envelope =
      std::log1p(topo.max_tx_mw.maxCoeff() * best_gain *
                 topo.antennas_per_bst / topo.noise_mw.minCoeff());
  traffic.max_rate = keys.number("traffic.max_rate", envelope);

  cfg.harvest_mean_mw = keys.broadcast("harvest.mean_mw", topo.num_bsts, 0.0);
  if (!keys.present("harvest.mean_mw")) {
    cfg.harvest_mean_mw.setConstant(200.0);
    if (topo.num_bsts >= 1) cfg.harvest_mean_mw(0) = 300.0;
  }

  const double v = keys.number("control.v", 0.1);
  const int frame_slots =
      static_cast<int>(keys.integer("control.frame_slots", 5));
  cfg.algorithm = keys.text("control.algorithm", "tsube");

  cfg.num_slots = keys.integer("run.slots", 2000);
  cfg.seed = static_cast<std::uint64_t>(keys.integer("run.seed", 1));
  cfg.ma_window = static_cast<int>(keys.integer("run.window", 10));
  cfg.out_path = keys.text("run.out", "trace.csv");
  cfg.slot_ms = keys.number("run.slot_ms", 1.0);
  cfg.bst_scale = keys.number("run.bst_scale", 1000.0);

  keys.reject_unknown();
  cfg.control = controller::LyapunovConfig::make(v, frame_slots, traffic, total_ues);
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path) {
  if (path.empty()) return default_config();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<metrics::TraceRecord> run(const SimConfig& config,
                                      const SlotObserver& observer) {
  config.validate();
  const model::Topology& topo = config.topology;
  const int total_ues = topo.total_ues();
  const int frame_slots = config.control.frame_slots;

  RngStream channel_rng(config.seed, StreamTag::Channel);
  RngStream arrival_rng(config.seed, StreamTag::Arrival);
  RngStream harvest_rng(config.seed, StreamTag::Harvest);

  Eigen::VectorXd qa = Eigen::VectorXd::Zero(total_ues);
  Eigen::VectorXd qu = Eigen::VectorXd::Zero(total_ues);
  Eigen::VectorXd qa_frame = qa, qu_frame = qu;
  controller::FrameSchedule schedule;
  energy::HarvestState harvest;

  std::vector<metrics::TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(std::max(config.num_slots, 0L)));

  for (long t = 0; t < config.num_slots; ++t) {
    const long k = t / frame_slots;
    if (t % frame_slots == 0) {
      harvest = energy::draw_harvest(config.harvest_mean_mw, harvest_rng,
                                     frame_slots, k);
      qa_frame = qa;
      qu_frame = qu;
      schedule = controller::schedule_frame(qa, qu, k);
    }

    const model::ChannelRealization channel =
        model::draw_channels(topo, channel_rng, t);
    const Eigen::VectorXd arrivals =
        queueing::draw_arrivals(config.traffic, arrival_rng);

    slot_solver::PerSlotProblem prob;
    prob.topology = &topo;
    prob.channel = &channel;
    prob.schedule = schedule;
    prob.q_access_now = qa;
    prob.q_access_frame = qa_frame;
    prob.q_processing_frame = qu_frame;
    prob.harvest_slot_mw = harvest.per_slot_mw(frame_slots);
    prob.prices = config.prices;
    prob.v = config.control.v;

    const slot_solver::SlotResult res = dispatch(config.algorithm, prob);
    if (!res.ok()) {
      const std::string dump_path =
          (config.out_path.empty() ? std::string("trace") : config.out_path) +
          ".slot" + std::to_string(t) + ".socp";
      std::ofstream dump(dump_path);
      slot_solver::dump_fixed_phi(prob, res.decision.phi, dump);
      throw std::runtime_error("slot solver failed at slot " +
                               std::to_string(t) + " (" + res.detail +
                               "); problem dumped to " + dump_path);
    }
    const slot_solver::SlotDecision& d = res.decision;

    metrics::TraceRecord rec;
    rec.slot = t;
    rec.frame = k;
    rec.algorithm = config.algorithm;
    rec.seed = config.seed;
    rec.v = config.control.v;
    rec.phi = d.phi;
    rec.total_cost_cents = d.grid_cost_cents.sum();
    rec.bst_cost_cents = d.grid_cost_cents;
    rec.delta_mw = d.exchange.delta_mw;
    rec.q_access = qa;
    rec.q_processing = qu;
    rec.rate = d.rates;
    rec.arrival = arrivals;
    trace.push_back(std::move(rec));

    if (observer) observer(t, prob, d);

    for (int u = 0; u < total_ues; ++u) {
      qu(u) = queueing::step_processing(qu(u), config.traffic.processing_rate(u),
                                        d.rates(u));
      qa(u) = queueing::step_access(qa(u), d.rates(u), arrivals(u));
    }
  }
  return trace;
}

std::string run_to_file(const SimConfig& config) {
  const std::vector<metrics::TraceRecord> trace = run(config);
  write_trace_csv(trace, config.topology, config.out_path);
  return config.out_path;
}

void write_trace_csv(const std::vector<metrics::TraceRecord>& trace,
                     const model::Topology& topology, const std::string& path) {
  std::string out = "slot,frame,algorithm,seed,v,phi,cost_total";
  for (int m = 0; m < topology.num_bsts; ++m)
    out += ",cost_bst" + std::to_string(m);
  for (const model::PowerLine& line : topology.lines)
    out += ",delta_" + std::to_string(line.bst_a) + "_" +
           std::to_string(line.bst_b);
  for (const char* prefix : {"qa", "qu", "rate", "arr"})
    for (int m = 0; m < topology.num_bsts; ++m)
      for (int n = 0; n < topology.ues_per_bst[m]; ++n)
        out += "," + std::string(prefix) + "_" + std::to_string(m) + "_" +
               std::to_string(n);
  out += "\n";

  for (const metrics::TraceRecord& r : trace) {
    out += std::to_string(r.slot) + "," + std::to_string(r.frame) + "," +
           r.algorithm + "," + std::to_string(r.seed) + "," +
           format_double(r.v) + "," + format_double(r.phi) + "," +
           format_double(r.total_cost_cents);
    auto append_vec = [&out](const Eigen::VectorXd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        out += "," + format_double(v(i));
    };
    append_vec(r.bst_cost_cents);
    append_vec(r.delta_mw);
    append_vec(r.q_access);
    append_vec(r.q_processing);
    append_vec(r.rate);
    append_vec(r.arrival);
    out += "\n";
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open trace file: " + path);
  file << out;
}

std::vector<metrics::TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open trace file: " + path);
  std::string header;
  if (!std::getline(file, header))
    throw std::runtime_error("empty trace file: " + path);
  const std::vector<std::string> cols = split(header, ',');
  auto count_prefix = [&cols](const std::string& prefix) {
    int n = 0;
    for (const std::string& c : cols)
      if (c.rfind(prefix, 0) == 0) ++n;
    return n;
  };
  const int num_bsts = count_prefix("cost_bst");
  const int num_edges = count_prefix("delta_");
  const int num_ues = count_prefix("qa_");
  const std::size_t expected = 7 + num_bsts + num_edges + 4 * num_ues;
  if (cols.size() != expected || cols.empty() || cols[0] != "slot")
    throw std::runtime_error("trace schema mismatch in " + path);

  std::vector<metrics::TraceRecord> out;
  std::string line;
  while (std::getline(file, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != expected)
      throw std::runtime_error("trace schema mismatch in " + path);
    metrics::TraceRecord r;
    std::size_t i = 0;
    r.slot = std::stol(f[i++]);
    r.frame = std::stol(f[i++]);
    r.algorithm = f[i++];
    r.seed = std::stoull(f[i++]);
    r.v = std::stod(f[i++]);
    r.phi = std::stod(f[i++]);
    r.total_cost_cents = std::stod(f[i++]);
    auto read_vec = [&](int n) {
      Eigen::VectorXd v(n);
      for (int k = 0; k < n; ++k) v(k) = std::stod(f[i++]);
      return v;
    };
    r.bst_cost_cents = read_vec(num_bsts);
    r.delta_mw = read_vec(num_edges);
    r.q_access = read_vec(num_ues);
    r.q_processing = read_vec(num_ues);
    r.rate = read_vec(num_ues);
    r.arrival = read_vec(num_ues);
    out.push_back(std::move(r));
  }
  return out;
}

Summary summarize(const std::vector<std::string>& paths, int window) {
  if (paths.empty()) throw std::invalid_argument("summarize: need at least one trace");
  Summary summary;
  for (const std::string& path : paths) {
    const std::vector<metrics::TraceRecord> trace = read_trace_csv(path);
    RunSummary rs;
    rs.path = path;
    rs.slots = static_cast<long>(trace.size());
    if (!trace.empty()) {
      rs.algorithm = trace.front().algorithm;
      rs.seed = trace.front().seed;
      rs.v = trace.front().v;
      std::vector<double> cost(trace.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        cost[i] = trace[i].total_cost_cents;
        acc += cost[i];
      }
      rs.mean_cost_cents = acc / static_cast<double>(trace.size());
      rs.annualized_dollars = metrics::annualize(rs.mean_cost_cents, 1.0, 1000.0);
      rs.delay_slots = metrics::little_delay(trace, static_cast<int>(trace.size()));
      rs.cost_moving_average = metrics::moving_average(cost, window);
    }
    summary.runs.push_back(std::move(rs));
  }

  std::map<std::pair<std::string, double>, std::vector<const RunSummary*>> groups;
  for (const RunSummary& rs : summary.runs)
    groups[{rs.algorithm, rs.v}].push_back(&rs);
  for (const auto& [key, members] : groups) {
    GroupSummary g;
    g.algorithm = key.first;
    g.v = key.second;
    g.runs = static_cast<int>(members.size());
    double cost_acc = 0.0, delay_acc = 0.0;
    int delay_n = 0;
    for (const RunSummary* rs : members) {
      cost_acc += rs->mean_cost_cents;
      if (rs->delay_slots) {
        delay_acc += *rs->delay_slots;
        ++delay_n;
      }
    }
    g.mean_cost_cents = cost_acc / g.runs;
    g.mean_delay_slots = delay_n > 0 ? delay_acc / delay_n : 0.0;
    double cost_var = 0.0, delay_var = 0.0;
    for (const RunSummary* rs : members) {
      cost_var += std::pow(rs->mean_cost_cents - g.mean_cost_cents, 2);
      if (rs->delay_slots)
        delay_var += std::pow(*rs->delay_slots - g.mean_delay_slots, 2);
    }
    g.std_cost_cents = g.runs > 1 ? std::sqrt(cost_var / (g.runs - 1)) : 0.0;
    g.std_delay_slots = delay_n > 1 ? std::sqrt(delay_var / (delay_n - 1)) : 0.0;
    summary.groups.push_back(std::move(g));
  }
  return summary;
}

}  // namespace sgpcn::harness
