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

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "sgpcn/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Smart-grid powered cellular network simulator"};
  app.require_subcommand(1);

  std::string config_path, algorithm, out_path;
  long slots = -1;
  long long seed = -1;
  double v = 0.0;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one trace");
  run_cmd->add_option("--config", config_path, "Config file (defaults apply)");
  run_cmd->add_option("--seed", seed, "Override run.seed");
  run_cmd->add_option("--slots", slots, "Override run.slots");
  run_cmd->add_option("--algorithm", algorithm, "tsube | wolpe | zfbf");
  run_cmd->add_option("--v", v, "Override the control parameter V");
  run_cmd->add_option("--out", out_path, "Trace CSV path");

  int window = 10;
  std::vector<std::string> paths;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "Aggregate trace CSVs");
  sum_cmd->add_option("--window", window, "Moving-average window");
  sum_cmd->add_option("paths", paths, "Trace CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      sgpcn::harness::SimConfig cfg = sgpcn::harness::load_config(config_path);
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (slots >= 0) cfg.num_slots = slots;
      if (!algorithm.empty()) cfg.algorithm = algorithm;
      if (v > 0.0)
        cfg.control = sgpcn::controller::LyapunovConfig::make(
            v, cfg.control.frame_slots, cfg.traffic, cfg.topology.total_ues());
      if (!out_path.empty()) cfg.out_path = out_path;
      cfg.validate();

      const std::string path = sgpcn::harness::run_to_file(cfg);
      std::printf("wrote %s\n", path.c_str());
      const sgpcn::harness::Summary s =
          sgpcn::harness::summarize({path}, cfg.ma_window);
      if (!s.runs.empty() && s.runs[0].slots > 0) {
        const auto& r = s.runs[0];
        std::printf("algorithm=%s seed=%llu V=%g slots=%ld\n", r.algorithm.c_str(),
                    static_cast<unsigned long long>(r.seed), r.v, r.slots);
        std::printf("mean grid cost  %.6e cents/slot  (%.2f $/yr at 1 ms, 1000 BSTs)\n",
                    r.mean_cost_cents, r.annualized_dollars);
        if (r.delay_slots)
          std::printf("little delay    %.3f slots\n", *r.delay_slots);
      }
    } else if (sum_cmd->parsed()) {
      const sgpcn::harness::Summary s = sgpcn::harness::summarize(paths, window);
      std::printf("%-28s %-6s %-10s %6s %14s %12s\n", "path", "alg", "V", "slots",
                  "cost(c/slot)", "delay(slots)");
      for (const auto& r : s.runs)
        std::printf("%-28s %-6s %-10g %6ld %14.6e %12s\n", r.path.c_str(),
                    r.algorithm.c_str(), r.v, r.slots, r.mean_cost_cents,
                    r.delay_slots ? std::to_string(*r.delay_slots).c_str() : "-");
      std::printf("\nper (algorithm, V) group, mean +- std across runs:\n");
      for (const auto& g : s.groups)
        std::printf("%-6s V=%-8g runs=%d cost %.6e +- %.2e  delay %.3f +- %.3f\n",
                    g.algorithm.c_str(), g.v, g.runs, g.mean_cost_cents,
                    g.std_cost_cents, g.mean_delay_slots, g.std_delay_slots);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
