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

#include "sbplan/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sbplan/error.h"

namespace sbplan {
namespace {

auto Key(const ReportRow& r) {
  return std::tie(r.engine, r.prior, r.n_steps, r.nfe, r.training_steps);
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void SweepReport::Upsert(const ReportRow& row) {
  auto it = std::find_if(rows_.begin(), rows_.end(), [&](const ReportRow& r) {
    return Key(r) == Key(row);
  });
  if (it != rows_.end()) {
    *it = row;
  } else {
    rows_.push_back(row);
  }
  std::sort(rows_.begin(), rows_.end(),
            [](const ReportRow& a, const ReportRow& b) { return Key(a) < Key(b); });
}

std::string SweepReport::ToCsv() const {
  std::ostringstream o;
  o << kCsvHeader << '\n';
  for (const auto& r : rows_) {
    o << r.engine << ',' << r.prior << ',' << r.n_steps << ',' << r.nfe << ','
      << r.training_steps << ',' << Num(r.mean_score) << ','
      << Num(r.stderr_score) << ',' << r.episodes << ',' << r.seeds << '\n';
  }
  return o.str();
}

std::string SweepReport::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rows_) {
    rows.push_back({{"engine", r.engine},
                    {"prior", r.prior},
                    {"N", r.n_steps},
                    {"nfe", r.nfe},
                    {"training_steps", r.training_steps},
                    {"mean_score", r.mean_score},
                    {"stderr", r.stderr_score},
                    {"episodes", r.episodes},
                    {"seeds", r.seeds}});
  }
  return nlohmann::json{{"rows", rows}}.dump(1);
}

SweepReport SweepReport::FromCsv(std::string_view text) {
  SweepReport report;
  bool header = true;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::kVersionMismatch, "unexpected metrics header");
      }
      header = false;
      continue;
    }
    const auto f = SplitCsv(line);
    if (f.size() != 9) {
      throw Error(ErrorCode::kShapeMismatch,
                  "metrics line " + std::to_string(line_no) + " has " +
                      std::to_string(f.size()) + " fields");
    }
    try {
      ReportRow r;
      r.engine = f[0];
      r.prior = f[1];
      r.n_steps = std::stoi(f[2]);
      r.nfe = std::stoi(f[3]);
      r.training_steps = std::stoll(f[4]);
      r.mean_score = std::stod(f[5]);
      r.stderr_score = std::stod(f[6]);
      r.episodes = std::stoi(f[7]);
      r.seeds = std::stoi(f[8]);
      report.Upsert(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kShapeMismatch,
                  "malformed metrics line " + std::to_string(line_no));
    }
  }
  return report;
}

Aggregate AggregateScores(const std::vector<std::vector<double>>& per_seed) {
  Aggregate a;
  std::vector<double> means;
  std::vector<double> pooled;
  for (const auto& s : per_seed) {
    if (s.empty()) continue;
    double m = 0.0;
    for (double v : s) m += v;
    means.push_back(m / s.size());
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  if (pooled.empty()) return a;
  const std::vector<double>& spread = means.size() > 1 ? means : pooled;
  double mean = 0.0;
  for (double v : pooled) mean += v;
  a.mean = mean / pooled.size();
  if (spread.size() > 1) {
    double mu = 0.0;
    for (double v : spread) mu += v;
    mu /= spread.size();
    double ss = 0.0;
    for (double v : spread) ss += (v - mu) * (v - mu);
    a.stderr_value =
        std::sqrt(ss / (spread.size() - 1)) / std::sqrt(spread.size());
  }
  return a;
}

const std::vector<std::string>& FigureNames() {
  static const std::vector<std::string> names = {
      "score_training", "ddpm_nfe", "sb_nfe", "prior", "sb_priors_nfe_1"};
  return names;
}

namespace {

struct Point {
  double x;
  std::string series;
  double mean;
  double stderr_value;
};

int64_t MaxSteps(const SweepReport& report, std::string_view engine) {
  int64_t best = -1;
  for (const auto& r : report.rows()) {
    if (engine.empty() || r.engine == engine) {
      best = std::max(best, r.training_steps);
    }
  }
  return best;
}

bool IsModel(const ReportRow& r) {
  return r.engine == "ddpm" || r.engine == "i2sb";
}

}  // namespace

std::string FigureCsv(const SweepReport& report, std::string_view figure) {
  std::vector<Point> pts;
  if (figure == "score_training") {
    for (const auto& r : report.rows()) {
      if (!IsModel(r)) continue;
      pts.push_back({static_cast<double>(r.training_steps),
                     r.engine + ":" + r.prior + ":N" +
                         std::to_string(r.n_steps) + ":nfe" +
                         std::to_string(r.nfe),
                     r.mean_score, r.stderr_score});
    }
  } else if (figure == "ddpm_nfe") {
    const int64_t ts = MaxSteps(report, "ddpm");
    for (const auto& r : report.rows()) {
      if (r.engine != "ddpm" || r.training_steps != ts) continue;
      pts.push_back({static_cast<double>(r.nfe), "ddpm", r.mean_score,
                     r.stderr_score});
    }
  } else if (figure == "sb_nfe") {
    const int64_t ts = MaxSteps(report, "i2sb");
    for (const auto& r : report.rows()) {
      if (r.engine != "i2sb" || r.prior != "straight_line" ||
          r.training_steps != ts) {
        continue;
      }
      pts.push_back({static_cast<double>(r.nfe), "i2sb", r.mean_score,
                     r.stderr_score});
    }
  } else if (figure == "prior") {
    const int64_t ts = MaxSteps(report, "i2sb");
    for (const auto& r : report.rows()) {
      if (r.engine != "i2sb" || r.training_steps != ts) continue;
      pts.push_back({static_cast<double>(r.nfe), r.prior, r.mean_score,
                     r.stderr_score});
    }
  } else if (figure == "sb_priors_nfe_1") {
    for (const auto& r : report.rows()) {
      if (!IsModel(r) || r.nfe != 1) continue;
      pts.push_back({static_cast<double>(r.training_steps),
                     r.engine == "ddpm" ? "ddpm" : "i2sb:" + r.prior,
                     r.mean_score, r.stderr_score});
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown figure '" + std::string(figure) + "'");
  }
  if (pts.empty()) {
    throw Error(ErrorCode::kEmptyOutput,
                "no report rows for figure '" + std::string(figure) + "'");
  }
  std::ostringstream o;
  o << "x,series,mean,stderr\n";
  for (const auto& p : pts) {
    o << Num(p.x) << ',' << p.series << ',' << Num(p.mean) << ','
      << Num(p.stderr_value) << '\n';
  }
  return o.str();
}

}  // namespace sbplan
