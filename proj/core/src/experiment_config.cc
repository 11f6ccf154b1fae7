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

#include "sbplan/experiment_config.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "binary_io.h"
#include "sbplan/dataset_gen.h"
#include "sbplan/ddpm.h"
#include "sbplan/error.h"
#include "sbplan/maze.h"
#include "sbplan/planner.h"
#include "sbplan/priors.h"

namespace sbplan {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kInvalidArgument, "bad value '" + std::string(value) +
                                               "' for key '" +
                                               std::string(key) + "'");
}

std::string Unquote(std::string_view v) {
  v = Trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view v) {
  v = Trim(v);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Bad(key, v);
  return out;
}

template <typename T>
std::vector<T> ParseList(std::string_view key, std::string_view v) {
  v = Trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') Bad(key, v);
    v = v.substr(1, v.size() - 2);
  }
  std::vector<T> out;
  while (!Trim(v).empty()) {
    const auto comma = v.find(',');
    out.push_back(ParseNumber<T>(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

template <typename T>
std::string Join(const std::vector<T>& v) {
  std::ostringstream o;
  o << '[';
  for (size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << v[i];
  o << ']';
  return o.str();
}

}  // namespace

void ExperimentConfig::Set(std::string_view key, std::string_view value) {
  if (key == "maze") {
    maze = Unquote(value);
  } else if (key == "horizon") {
    horizon = ParseNumber<int>(key, value);
  } else if (key == "engine") {
    engine = Unquote(value);
  } else if (key == "prior") {
    prior = Unquote(value);
  } else if (key == "n_steps") {
    n_steps = ParseNumber<int>(key, value);
  } else if (key == "schedule") {
    schedule = Unquote(value);
  } else if (key == "nfe") {
    nfe = ParseList<int>(key, value);
  } else if (key == "training_steps") {
    training_steps = ParseList<int64_t>(key, value);
  } else if (key == "episodes") {
    episodes = ParseNumber<int>(key, value);
  } else if (key == "seeds") {
    seeds = ParseList<uint64_t>(key, value);
  } else if (key == "out") {
    out = Unquote(value);
  } else if (key == "batch") {
    batch = ParseNumber<int>(key, value);
  } else if (key == "widths") {
    widths = ParseList<int>(key, value);
  } else if (key == "learning_rate") {
    learning_rate = ParseNumber<double>(key, value);
  } else if (key == "segment_reuse") {
    segment_reuse = ParseNumber<int>(key, value);
  } else if (key == "reference_episodes") {
    reference_episodes = ParseNumber<int>(key, value);
  } else if (key == "reference_seed") {
    reference_seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "workers") {
    workers = ParseNumber<int>(key, value);
  } else if (key == "resume") {
    const std::string v = Unquote(value);
    if (v == "true") {
      resume = true;
    } else if (v == "false") {
      resume = false;
    } else {
      Bad(key, value);
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig ExperimentConfig::Parse(std::string_view text) {
  ExperimentConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    // Strip comments outside of quoted strings.
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "config line " + std::to_string(line_no) +
                      " is not key = value");
    }
    cfg.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  return Parse(internal::ReadFile(path));
}

int ExperimentConfig::EffectiveHorizon() const {
  return horizon > 0 ? horizon : DefaultHorizon(maze);
}

void ExperimentConfig::Validate() const {
  MakeMaze(maze);
  if (engine != "expert" && engine != "random") ParseEngine(engine);
  ParsePriorKind(prior);
  ParseScheduleKind(schedule);
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  if (EffectiveHorizon() % 4 != 0) fail("horizon must be a multiple of 4");
  if (n_steps < 1) fail("n_steps must be >= 1");
  if (nfe.empty()) fail("nfe list is empty");
  for (int v : nfe) {
    if (v < 1) fail("nfe entries must be >= 1");
    if (engine == "i2sb" && v > n_steps) {
      fail("nfe " + std::to_string(v) + " exceeds n_steps " +
           std::to_string(n_steps));
    }
  }
  if (training_steps.empty()) fail("training_steps list is empty");
  for (int64_t v : training_steps) {
    if (v < 0) fail("training_steps entries must be >= 0");
  }
  if (episodes < 1) fail("episodes must be >= 1");
  if (seeds.empty()) fail("seeds list is empty");
  if (batch < 1) fail("batch must be >= 1");
  if (segment_reuse < 1) fail("segment_reuse must be >= 1");
  if (reference_episodes < 100) fail("reference_episodes must be >= 100");
  if (workers < 1) fail("workers must be >= 1");
}

std::string ExperimentConfig::ToText() const {
  std::ostringstream o;
  o << "maze = \"" << maze << "\"\n"
    << "horizon = " << horizon << "\n"
    << "engine = \"" << engine << "\"\n"
    << "prior = \"" << prior << "\"\n"
    << "n_steps = " << n_steps << "\n"
    << "schedule = \"" << schedule << "\"\n"
    << "nfe = " << Join(nfe) << "\n"
    << "training_steps = " << Join(training_steps) << "\n"
    << "episodes = " << episodes << "\n"
    << "seeds = " << Join(seeds) << "\n"
    << "out = \"" << out << "\"\n"
    << "batch = " << batch << "\n"
    << "widths = " << Join(widths) << "\n"
    << "learning_rate = " << learning_rate << "\n"
    << "segment_reuse = " << segment_reuse << "\n"
    << "reference_episodes = " << reference_episodes << "\n"
    << "reference_seed = " << reference_seed << "\n"
    << "workers = " << workers << "\n"
    << "resume = " << (resume ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace sbplan
