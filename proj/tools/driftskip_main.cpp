// Copyright 2026 The driftskip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <iostream>

#include "driftskip/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"driftskip: drift-aware VQE experiments on a statevector simulator"};
  app.require_subcommand(1);

  driftskip::CliOptions opts;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config, "experiment config (JSON)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override every seed in the config");
    sub->add_option("--out", out, "output directory (trace file for gen-noise)");
    sub->add_flag("--exact", opts.exact, "analytic expectations instead of sampling");
    sub->add_option("--shots", shots, "samples per observable circuit");
  };

  auto* run = app.add_subcommand("run", "run the first controller in the config");
  add_common(run, true);
  auto* compare = app.add_subcommand("compare", "run every controller on one shared trace");
  add_common(compare, true);
  auto* sweep = app.add_subcommand("sweep", "one run per value of the sweep axis");
  add_common(sweep, true);
  auto* gen = app.add_subcommand("gen-noise", "generate and save a drift trace");
  add_common(gen, true);
  auto* report = app.add_subcommand("report", "summarize or compare saved RunRecord files");
  add_common(report, false);
  report->add_option("records", opts.records, "RunRecord JSON files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {run, compare, sweep, gen, report}) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--out")) opts.out = out;
    if (sub->count("--shots")) opts.shots = shots;
  }

  if (*run) return driftskip::cmd_run(opts, std::cerr);
  if (*compare) return driftskip::cmd_compare(opts, std::cerr);
  if (*sweep) return driftskip::cmd_sweep(opts, std::cerr);
  if (*gen) return driftskip::cmd_gen_noise(opts, std::cerr);
  if (*report) return driftskip::cmd_report(opts, std::cerr);
  return 1;
}
