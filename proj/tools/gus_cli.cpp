/*
 * Copyright 2026 The gus Authors.
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gus/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sampling-aware SUM estimation over relational plans"};
  app.require_subcommand(1);

  std::string plan_path;
  gus::RunOptions options;
  std::string subsample;
  std::string format = "json";
  auto* estimate = app.add_subcommand("estimate", "Run a sampled plan and report the estimate with error bounds");
  estimate->add_option("plan", plan_path, "Plan document (JSON)")->required();
  estimate->add_option("--seed", options.seed, "Run seed");
  estimate->add_flag("--explain", options.explain, "Include the GUS rewrite trace");
  estimate->add_flag("--oracle", options.oracle, "Attach exact or Monte Carlo ground truth");
  estimate->add_option("--oracle-trials", options.oracle_trials, "Monte Carlo trials when enumeration is infeasible");
  estimate->add_option("--subsample", subsample, "Lineage sub-sample for the variance terms, e.g. l=0.2,o=0.3");
  estimate->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string scale = "l=1000,o=250,c=50,p=100";
  std::uint64_t gen_seed = 7;
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "Write a small TPC-H-like data set and example plans");
  generate->add_option("--scale", scale, "Rows per table, e.g. l=1000,o=250,c=50,p=100");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) {
      if (!subsample.empty()) options.subsample = subsample;
      const auto doc = gus::load_plan(plan_path);
      const auto catalog = gus::load_tables(doc);
      const auto report = gus::run(doc, catalog, options);
      if (format == "text") {
        std::cout << gus::render_text(report);
      } else {
        std::cout << report.dump(2) << "\n";
      }
    } else {
      for (const auto& path : gus::generate_tpch_tiny(gus::parse_scale(scale), gen_seed, out_dir)) {
        std::cout << path.string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gus::exit_code_for(e);
  }
  return 0;
}
