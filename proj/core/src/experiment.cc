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

#include "sbplan/experiment.h"

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "binary_io.h"
#include "json.hpp"
#include "sbplan/checkpoint.h"
#include "sbplan/dataset_gen.h"
#include "sbplan/error.h"
#include "sbplan/training.h"

namespace sbplan {
namespace fs = std::filesystem;

fs::path OutputRoot(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("SBPLAN_OUT"); env && *env) return env;
  return cfg.out;
}

fs::path RunPaths::Dataset(const ExperimentConfig& cfg, int64_t steps,
                           uint64_t seed) const {
  std::ostringstream n;
  n << cfg.maze << "_h" << cfg.EffectiveHorizon() << "_b" << cfg.batch << "_r"
    << cfg.segment_reuse << "_t" << steps << "_s" << seed << ".sbd";
  return root / "data" / n.str();
}

fs::path RunPaths::Denoiser(const ExperimentConfig& cfg,
                            const std::string& engine, int n_steps,
                            int64_t steps, uint64_t seed) const {
  std::ostringstream n;
  n << cfg.maze << "_" << engine << "_"
    << (engine == "ddpm" ? std::string("none") : cfg.prior) << "_N" << n_steps
    << "_" << (engine == "ddpm" ? cfg.schedule : std::string("bridge")) << "_h"
    << cfg.EffectiveHorizon() << "_w" << cfg.widths[0] << "-" << cfg.widths[1]
    << "-" << cfg.widths[2] << "_b" << cfg.batch << "_lr" << cfg.learning_rate
    << "_t" << steps << "_s" << seed << ".ckpt";
  return root / "ckpt" / n.str();
}

fs::path RunPaths::PriorNet(const ExperimentConfig& cfg, int64_t steps,
                            uint64_t seed) const {
  std::ostringstream n;
  n << cfg.maze << "_priornet_h" << cfg.EffectiveHorizon() << "_b" << cfg.batch
    << "_lr" << cfg.learning_rate << "_t" << steps << "_s" << seed << ".ckpt";
  return root / "ckpt" / n.str();
}

fs::path RunPaths::LossCsv(const fs::path& ckpt) const {
  return root / "logs" / (ckpt.stem().string() + ".loss.csv");
}

fs::path RunPaths::References(const ExperimentConfig& cfg) const {
  const MazeSpec spec = MakeMaze(cfg.maze);
  std::ostringstream n;
  n << cfg.maze << "_cap" << spec.episode_cap() << "_seed"
    << cfg.reference_seed << "_ep" << cfg.reference_episodes << ".json";
  return root / "refs" / n.str();
}

namespace {

void Log(std::ostream* log, const std::string& msg) {
  if (log) *log << msg << std::endl;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  internal::WriteFileAtomic(path, text);
}

std::string LossCsvText(const std::vector<double>& loss) {
  std::ostringstream o;
  o << "step,loss\n";
  char buf[40];
  for (size_t i = 0; i < loss.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", loss[i]);
    o << (i + 1) << ',' << buf << '\n';
  }
  return o.str();
}

std::vector<int> DenoiserStepCounts(const ExperimentConfig& cfg) {
  if (cfg.engine == "ddpm") return cfg.nfe;
  return {cfg.n_steps};
}

sbplan::Dataset LoadTrainingData(const ExperimentConfig& cfg,
                                 const RunPaths& paths, int64_t steps,
                                 uint64_t seed) {
  const fs::path p = paths.Dataset(cfg, steps, seed);
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kIo,
                "dataset " + p.string() + " missing; run gen-data first");
  }
  sbplan::Dataset ds = LoadDataset(p);
  if (ds.horizon() != cfg.EffectiveHorizon()) {
    throw Error(ErrorCode::kShapeMismatch,
                "dataset horizon " + std::to_string(ds.horizon()) +
                    " differs from config horizon " +
                    std::to_string(cfg.EffectiveHorizon()));
  }
  return ds;
}

ProgressFn MakeProgress(std::ostream* log, int64_t total) {
  if (!log || total <= 0) return {};
  const int64_t every = std::max<int64_t>(1, total / 10);
  return [log, total, every](int64_t step, double loss) {
    if (step % every == 0 || step == total) {
      *log << "  step " << step << "/" << total << " loss " << loss
           << std::endl;
    }
  };
}

uint64_t EpisodePlanSeed(uint64_t seed, int episode) {
  return MixBits(MixBits(seed) + static_cast<uint64_t>(episode));
}

}  // namespace

std::vector<double> EvaluateModel(const MazeSpec& spec,
                                  const PlanningModel& model, Engine engine,
                                  PriorKind prior, int nfe,
                                  const ReferenceScores& refs, int episodes,
                                  uint64_t plan_seed, int workers) {
  std::vector<double> scores(episodes);
  std::vector<std::string> errors(std::max(1, workers));
  auto run = [&](int worker) {
    try {
      for (int i = worker; i < episodes; i += workers) {
        const StartGoal sg = EpisodeStartGoal(spec, refs.seed, i);
        PlanRequest req;
        req.start_state << sg.start, 0.0, 0.0;
        req.goal_position = sg.goal;
        req.engine = engine;
        req.prior = prior;
        req.nfe = nfe;
        req.seed = EpisodePlanSeed(plan_seed, i);
        SampleTrace trace;
        const Trajectory plan = Plan(req, model, &trace);
        if (trace.nfe != nfe) {
          throw Error(ErrorCode::kInvalidArgument,
                      "sampler used " + std::to_string(trace.nfe) +
                          " evaluations, expected " + std::to_string(nfe));
        }
        const EpisodeResult r = Execute(spec, plan, sg.goal);
        scores[i] =
            NormalizedScore(r.total_reward, refs.random_ref, refs.expert_ref);
      }
    } catch (const std::exception& e) {
      errors[worker] = e.what();
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  return scores;
}

std::vector<fs::path> CmdGenData(const ExperimentConfig& cfg,
                                 std::ostream* log) {
  cfg.Validate();
  const RunPaths paths{OutputRoot(cfg)};
  std::vector<fs::path> out;
  for (int64_t steps : cfg.training_steps) {
    for (uint64_t seed : cfg.seeds) {
      GenConfig g;
      g.maze_id = cfg.maze;
      g.horizon = cfg.EffectiveHorizon();
      g.seed = seed;
      g.total_steps = std::max<int64_t>(
          TotalStepsForTraining(steps, cfg.batch, cfg.segment_reuse),
          10 * static_cast<int64_t>(g.horizon));
      const fs::path p = paths.Dataset(cfg, steps, seed);
      Log(log, "gen-data " + p.string() + " (" +
                   std::to_string(g.total_steps) + " steps)");
      fs::create_directories(p.parent_path());
      SaveDataset(Generate(g), p);
      out.push_back(p);
    }
  }
  return out;
}

std::vector<fs::path> CmdTrain(const ExperimentConfig& cfg,
                               std::ostream* log) {
  cfg.Validate();
  if (cfg.engine == "expert" || cfg.engine == "random") return {};
  const RunPaths paths{OutputRoot(cfg)};
  const Engine engine = ParseEngine(cfg.engine);
  const PriorKind prior_kind = ParsePriorKind(cfg.prior);
  AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;
  std::vector<fs::path> out;
  for (int64_t steps : cfg.training_steps) {
    for (uint64_t seed : cfg.seeds) {
      const bool learned =
          engine == Engine::kI2sb && prior_kind == PriorKind::kLearned;
      const fs::path pp = paths.PriorNet(cfg, steps, seed);
      if (cfg.resume) {
        bool all = !learned || fs::exists(pp);
        for (int n : DenoiserStepCounts(cfg)) {
          all = all && fs::exists(paths.Denoiser(cfg, cfg.engine, n, steps, seed));
        }
        if (all) {
          Log(log, "keep existing checkpoints for seed " + std::to_string(seed));
          if (learned) out.push_back(pp);
          for (int n : DenoiserStepCounts(cfg)) {
            out.push_back(paths.Denoiser(cfg, cfg.engine, n, steps, seed));
          }
          continue;
        }
      }
      const sbplan::Dataset ds = LoadTrainingData(cfg, paths, steps, seed);
      std::optional<PriorSampler> prior;
      if (learned) {
        if (cfg.resume && fs::exists(pp)) {
          prior.emplace(PriorFromCheckpoint(LoadCheckpoint(pp)), ds.stats);
        } else {
          Log(log, "train prior network -> " + pp.string());
          PriorTrainOutcome pt =
              TrainPriorNetwork(ds, steps, cfg.batch, adam, seed,
                                MakeProgress(log, steps));
          fs::create_directories(pp.parent_path());
          SaveCheckpoint(MakeCheckpoint(pt.net, StatsMetadata(ds.stats)), pp);
          WriteText(paths.LossCsv(pp), LossCsvText(pt.loss));
          prior.emplace(std::move(pt.net), ds.stats);
        }
        out.push_back(pp);
      } else if (engine == Engine::kI2sb) {
        prior.emplace(prior_kind, ds.stats, ds.horizon(), ds.dim());
      }
      for (int n : DenoiserStepCounts(cfg)) {
        const fs::path p = paths.Denoiser(cfg, cfg.engine, n, steps, seed);
        if (cfg.resume && fs::exists(p)) {
          out.push_back(p);
          continue;
        }
        TrainSpec spec;
        spec.engine = engine;
        spec.n_steps = n;
        spec.schedule = ParseScheduleKind(cfg.schedule);
        spec.net.horizon = ds.horizon();
        spec.net.transition_dim = ds.dim();
        spec.net.widths = cfg.widths;
        spec.steps = steps;
        spec.batch = cfg.batch;
        spec.adam = adam;
        spec.seed = seed;
        Log(log, "train " + p.string());
        TrainOutcome t = TrainDenoiser(ds, spec, prior ? &*prior : nullptr,
                                       MakeProgress(log, steps));
        auto meta = StatsMetadata(ds.stats);
        meta["engine"] = cfg.engine;
        meta["n_steps"] = std::to_string(n);
        meta["schedule"] = cfg.schedule;
        meta["prior"] = engine == Engine::kDdpm ? "none" : cfg.prior;
        meta["training_steps"] = std::to_string(steps);
        meta["seed"] = std::to_string(seed);
        meta["maze"] = cfg.maze;
        fs::create_directories(p.parent_path());
        SaveCheckpoint(MakeCheckpoint(t.net, std::move(meta)), p);
        WriteText(paths.LossCsv(p), LossCsvText(t.loss));
        if (t.skipped > 0) {
          Log(log, "  skipped " + std::to_string(t.skipped) +
                       " non-finite gradient steps");
        }
        out.push_back(p);
      }
    }
  }
  return out;
}

ReferenceScores CmdRefs(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.Validate();
  const RunPaths paths{OutputRoot(cfg)};
  const MazeSpec spec = MakeMaze(cfg.maze);
  const fs::path p = paths.References(cfg);
  if (fs::exists(p)) {
    ReferenceScores r;
    try {
      const auto j = nlohmann::json::parse(internal::ReadFile(p));
      r.maze = j.at("maze").get<std::string>();
      r.episode_cap = j.at("episode_cap").get<int>();
      r.episodes = j.at("episodes").get<int>();
      r.seed = j.at("seed").get<uint64_t>();
      r.random_ref = j.at("random_ref").get<double>();
      r.expert_ref = j.at("expert_ref").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kStaleReference,
                  "unreadable reference cache " + p.string() + ": " + e.what());
    }
    if (r.maze != spec.name() || r.episode_cap != spec.episode_cap() ||
        r.episodes != cfg.reference_episodes || r.seed != cfg.reference_seed) {
      throw Error(ErrorCode::kStaleReference,
                  "reference cache " + p.string() +
                      " does not match (maze, cap, seed, episodes)");
    }
    Log(log, "refs cached " + p.string());
    return r;
  }
  Log(log, "refs computing " + p.string());
  const ReferenceScores r =
      ComputeReferenceScores(spec, cfg.reference_episodes, cfg.reference_seed);
  const nlohmann::json j = {{"maze", r.maze},
                            {"episode_cap", r.episode_cap},
                            {"episodes", r.episodes},
                            {"seed", r.seed},
                            {"random_ref", r.random_ref},
                            {"expert_ref", r.expert_ref}};
  WriteText(p, j.dump(1) + "\n");
  return r;
}

SweepReport CmdEval(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.Validate();
  const RunPaths paths{OutputRoot(cfg)};
  const MazeSpec spec = MakeMaze(cfg.maze);
  const ReferenceScores refs = CmdRefs(cfg, log);
  SweepReport produced;

  if (cfg.engine == "expert" || cfg.engine == "random") {
    std::vector<std::vector<double>> per_seed;
    for (size_t s = 0; s < cfg.seeds.size(); ++s) {
      std::vector<double> scores;
      for (int i = 0; i < cfg.episodes; ++i) {
        const StartGoal sg = EpisodeStartGoal(spec, refs.seed, i);
        EpisodeResult r;
        if (cfg.engine == "expert") {
          r = RunExpertEpisode(spec, sg);
        } else {
          Rng rng = RandomPolicyRng(refs.seed, i);
          r = RunRandomEpisode(spec, sg, rng);
        }
        scores.push_back(
            NormalizedScore(r.total_reward, refs.random_ref, refs.expert_ref));
      }
      per_seed.push_back(std::move(scores));
    }
    const Aggregate a = AggregateScores(per_seed);
    produced.Upsert({cfg.engine, "none", 0, 0, 0, a.mean, a.stderr_value,
                     cfg.episodes, static_cast<int>(cfg.seeds.size())});
  } else {
    const Engine engine = ParseEngine(cfg.engine);
    const PriorKind prior = engine == Engine::kDdpm
                                ? PriorKind::kGaussian
                                : ParsePriorKind(cfg.prior);
    for (int64_t steps : cfg.training_steps) {
      for (int n : DenoiserStepCounts(cfg)) {
        // DDPM: one row per N at nfe = N. I2SB: one row per nfe.
        const std::vector<int> nfes =
            engine == Engine::kDdpm ? std::vector<int>{n} : cfg.nfe;
        std::vector<std::vector<std::vector<double>>> by_nfe(nfes.size());
        for (uint64_t seed : cfg.seeds) {
          const fs::path p = paths.Denoiser(cfg, cfg.engine, n, steps, seed);
          const Checkpoint ckpt = LoadCheckpoint(p);
          std::optional<Checkpoint> prior_ckpt;
          if (engine == Engine::kI2sb && prior == PriorKind::kLearned) {
            prior_ckpt = LoadCheckpoint(paths.PriorNet(cfg, steps, seed));
          }
          const PlanningModel model =
              PlanningModel::FromCheckpoint(ckpt, prior_ckpt);
          for (size_t k = 0; k < nfes.size(); ++k) {
            Log(log, "eval " + p.filename().string() + " nfe " +
                         std::to_string(nfes[k]));
            by_nfe[k].push_back(EvaluateModel(
                spec, model, engine, model.has_prior() ? model.prior().kind()
                                                       : PriorKind::kGaussian,
                nfes[k], refs, cfg.episodes, seed, cfg.workers));
          }
        }
        for (size_t k = 0; k < nfes.size(); ++k) {
          const Aggregate a = AggregateScores(by_nfe[k]);
          produced.Upsert({cfg.engine,
                           engine == Engine::kDdpm ? "none" : cfg.prior, n,
                           nfes[k], steps, a.mean, a.stderr_value,
                           cfg.episodes, static_cast<int>(cfg.seeds.size())});
        }
      }
    }
  }

  SweepReport merged;
  if (fs::exists(paths.MetricsCsv())) {
    merged = SweepReport::FromCsv(internal::ReadFile(paths.MetricsCsv()));
  }
  for (const auto& r : produced.rows()) merged.Upsert(r);
  WriteText(paths.MetricsCsv(), merged.ToCsv());
  WriteText(paths.MetricsJson(), merged.ToJson() + "\n");
  Log(log, "metrics -> " + paths.MetricsCsv().string());
  return produced;
}

fs::path CmdPlan(const ExperimentConfig& cfg, int episode, std::ostream* log) {
  cfg.Validate();
  if (episode < 0) {
    throw Error(ErrorCode::kInvalidArgument, "episode must be >= 0");
  }
  const RunPaths paths{OutputRoot(cfg)};
  const Engine engine = ParseEngine(cfg.engine);
  const MazeSpec spec = MakeMaze(cfg.maze);
  const int64_t steps = cfg.training_steps.front();
  const uint64_t seed = cfg.seeds.front();
  const int n = engine == Engine::kDdpm ? cfg.nfe.front() : cfg.n_steps;
  const Checkpoint ckpt =
      LoadCheckpoint(paths.Denoiser(cfg, cfg.engine, n, steps, seed));
  std::optional<Checkpoint> prior_ckpt;
  if (engine == Engine::kI2sb && ParsePriorKind(cfg.prior) == PriorKind::kLearned) {
    prior_ckpt = LoadCheckpoint(paths.PriorNet(cfg, steps, seed));
  }
  const PlanningModel model = PlanningModel::FromCheckpoint(ckpt, prior_ckpt);
  const StartGoal sg = EpisodeStartGoal(spec, cfg.reference_seed, episode);
  PlanRequest req;
  req.start_state << sg.start, 0.0, 0.0;
  req.goal_position = sg.goal;
  req.engine = engine;
  req.prior = model.has_prior() ? model.prior().kind() : PriorKind::kGaussian;
  req.nfe = engine == Engine::kDdpm ? n : cfg.nfe.front();
  req.seed = EpisodePlanSeed(seed, episode);
  const Trajectory plan = Plan(req, model);
  const EpisodeResult r = Execute(spec, plan, sg.goal);
  std::map<std::string, std::string> meta = {
      {"maze", cfg.maze},
      {"episode", std::to_string(episode)},
      {"training_steps", std::to_string(steps)},
      {"N", std::to_string(n)},
      {"total_reward", std::to_string(r.total_reward)},
      {"reached", r.reached ? "true" : "false"}};
  std::ostringstream name;
  name << cfg.maze << "_" << cfg.engine << "_N" << n << "_nfe" << req.nfe
       << "_t" << steps << "_s" << seed << "_ep" << episode << ".json";
  const fs::path p = paths.PlanDir() / name.str();
  WriteText(p, PlanToJson(plan, req, meta) + "\n");
  Log(log, "plan -> " + p.string());
  return p;
}

std::vector<fs::path> CmdPlotData(const ExperimentConfig& cfg,
                                  const std::optional<std::string>& figure,
                                  std::ostream* log) {
  const RunPaths paths{OutputRoot(cfg)};
  if (!fs::exists(paths.MetricsCsv())) {
    throw Error(ErrorCode::kEmptyOutput,
                "no report at " + paths.MetricsCsv().string());
  }
  const SweepReport report =
      SweepReport::FromCsv(internal::ReadFile(paths.MetricsCsv()));
  if (report.empty()) {
    throw Error(ErrorCode::kEmptyOutput, "report has no rows");
  }
  std::vector<std::string> names =
      figure ? std::vector<std::string>{*figure} : FigureNames();
  std::vector<fs::path> out;
  for (const auto& name : names) {
    std::string csv;
    try {
      csv = FigureCsv(report, name);
    } catch (const Error& e) {
      if (figure || e.code() != ErrorCode::kEmptyOutput) throw;
      Log(log, "skip empty figure " + name);
      continue;
    }
    const fs::path p = paths.PlotDir() / (name + ".csv");
    WriteText(p, csv);
    Log(log, "plot-data -> " + p.string());
    out.push_back(p);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyOutput, "every figure is empty");
  }
  return out;
}

}  // namespace sbplan
