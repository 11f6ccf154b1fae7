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

#ifndef SBPLAN_REPORT_H_
#define SBPLAN_REPORT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sbplan {

// One aggregated evaluation cell. Metrics CSV columns, in order:
// engine,prior,N,nfe,training_steps,mean_score,stderr,episodes,seeds
struct ReportRow {
  std::string engine;
  std::string prior;
  int n_steps = 0;
  int nfe = 0;
  int64_t training_steps = 0;
  double mean_score = 0.0;
  double stderr_score = 0.0;
  int episodes = 0;
  int seeds = 0;
};

class SweepReport {
 public:
  static constexpr std::string_view kCsvHeader =
      "engine,prior,N,nfe,training_steps,mean_score,stderr,episodes,seeds";

  const std::vector<ReportRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  // Replaces any row with the same (engine, prior, N, nfe, training_steps)
  // and keeps rows sorted by that key.
  void Upsert(const ReportRow& row);

  std::string ToCsv() const;
  std::string ToJson() const;
  static SweepReport FromCsv(std::string_view text);

 private:
  std::vector<ReportRow> rows_;
};

// Mean and standard error of per-seed means; with a single seed the error
// is taken over the pooled per-episode values.
struct Aggregate {
  double mean = 0.0;
  double stderr_value = 0.0;
};
Aggregate AggregateScores(const std::vector<std::vector<double>>& per_seed);

// Plot tables with columns x,series,mean,stderr.
const std::vector<std::string>& FigureNames();
// Throws kEmptyOutput when no rows feed the figure, kInvalidArgument for an
// unknown name.
std::string FigureCsv(const SweepReport& report, std::string_view figure);

}  // namespace sbplan

#endif  // SBPLAN_REPORT_H_
