// Copyright 2026 The SBPlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sbplan: dataset generation, training, planning and evaluation sweeps.
//
//   sbplan gen-data  --config sweep.toml
//   sbplan train     --config sweep.toml --steps 2000
//   sbplan refs      --maze umaze
//   sbplan eval      --config sweep.toml --engine i2sb --nfe 1,16
//   sbplan plan      --config sweep.toml --episode 3
//   sbplan plot-data --config sweep.toml [--figure sb_nfe]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sbplan/error.h"
#include "sbplan/experiment.h"

namespace {

struct Flags {
  std::string config;
  std::string maze, engine, prior, nfe, steps, seed, out;
  int episodes = 0;
  bool quiet = false;
  bool resume = false;
};

void AddCommon(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Sweep config file (key = value)");
  cmd->add_option("--maze", f.maze, "open | umaze | medium | large");
  cmd->add_option("--engine", f.engine, "ddpm | i2sb | expert | random");
  cmd->add_option("--prior", f.prior, "gaussian | straight_line | learned");
  cmd->add_option("--nfe", f.nfe, "Comma-separated NFE list (N list for ddpm)");
  cmd->add_option("--steps", f.steps, "Comma-separated training-steps list");
  cmd->add_option("--seed", f.seed, "Comma-separated seed list");
  cmd->add_option("--out", f.out, "Output root (SBPLAN_OUT overrides)");
  cmd->add_option("--episodes", f.episodes, "Evaluation episodes");
  cmd->add_flag("-q,--quiet", f.quiet, "Suppress progress output");
  cmd->add_flag("--resume", f.resume, "Keep checkpoints that already exist");
}

sbplan::ExperimentConfig BuildConfig(const Flags& f) {
  sbplan::ExperimentConfig cfg =
      f.config.empty() ? sbplan::ExperimentConfig{}
                       : sbplan::ExperimentConfig::Load(f.config);
  if (!f.maze.empty()) cfg.Set("maze", f.maze);
  if (!f.engine.empty()) cfg.Set("engine", f.engine);
  if (!f.prior.empty()) cfg.Set("prior", f.prior);
  if (!f.nfe.empty()) cfg.Set("nfe", f.nfe);
  if (!f.steps.empty()) cfg.Set("training_steps", f.steps);
  if (!f.seed.empty()) cfg.Set("seeds", f.seed);
  if (!f.out.empty()) cfg.Set("out", f.out);
  if (f.episodes > 0) cfg.episodes = f.episodes;
  if (f.resume) cfg.resume = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion and Schrodinger-bridge trajectory planning sweeps"};
  app.require_subcommand(1);
  Flags f;
  int episode = 0;
  std::string figure;

  auto* gen = app.add_subcommand("gen-data", "Generate expert datasets");
  auto* train = app.add_subcommand("train", "Train denoisers (and priors)");
  auto* plan = app.add_subcommand("plan", "Plan one episode and dump JSON");
  auto* eval = app.add_subcommand("eval", "Evaluate and write metrics");
  auto* plot = app.add_subcommand("plot-data", "Write per-figure tables");
  auto* refs = app.add_subcommand("refs", "Compute or show reference scores");
  for (auto* c : {gen, train, plan, eval, plot, refs}) AddCommon(c, f);
  plan->add_option("--episode", episode, "Reference episode index");
  plot->add_option("--figure", figure, "Only this figure");

  CLI11_PARSE(app, argc, argv);

  try {
    const sbplan::ExperimentConfig cfg = BuildConfig(f);
    std::ostream* log = f.quiet ? nullptr : &std::cerr;
    if (gen->parsed()) {
      sbplan::CmdGenData(cfg, log);
    } else if (train->parsed()) {
      sbplan::CmdTrain(cfg, log);
    } else if (plan->parsed()) {
      std::cout << sbplan::CmdPlan(cfg, episode, log).string() << "\n";
    } else if (eval->parsed()) {
      std::cout << sbplan::CmdEval(cfg, log).ToCsv();
    } else if (plot->parsed()) {
      const std::optional<std::string> fig =
          figure.empty() ? std::nullopt : std::optional<std::string>(figure);
      for (const auto& p : sbplan::CmdPlotData(cfg, fig, log)) {
        std::cout << p.string() << "\n";
      }
    } else if (refs->parsed()) {
      const sbplan::ReferenceScores r = sbplan::CmdRefs(cfg, log);
      std::cout << r.maze << " cap=" << r.episode_cap
                << " episodes=" << r.episodes << " seed=" << r.seed
                << " random_ref=" << r.random_ref
                << " expert_ref=" << r.expert_ref << "\n";
    }
  } catch (const sbplan::Error& e) {
    std::cerr << "sbplan: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sbplan: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
