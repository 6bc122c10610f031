//
// Copyright 2026 The gossipmia Authors
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
//

#include "gossipmia/experiment.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "gossipmia/attack.h"
#include "json.hpp"

namespace gossipmia {
namespace {

namespace fs = std::filesystem;

constexpr absl::string_view kMetricsHeader =
    "round,mean_test_acc,mean_mia_acc,mean_tpr_at_1fpr,mean_gen_error,"
    "max_canary_tpr,messages_cumulative,eps_spent";

std::string Real(double v) { return absl::StrFormat("%.17g", v); }
std::string OptionalReal(const std::optional<double>& v) {
  return v.has_value() ? Real(*v) : std::string();
}

absl::Status WriteFile(const fs::path& path, absl::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  out << content;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path.string()));
  return absl::OkStatus();
}

absl::StatusOr<std::optional<double>> ParseOptional(absl::string_view cell,
                                                    size_t row,
                                                    absl::string_view column) {
  if (cell.empty()) return std::optional<double>();
  double v = 0.0;
  if (!absl::SimpleAtod(cell, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("metrics row ", row, ": bad ", column, " \"", cell, "\""));
  }
  return std::optional<double>(v);
}

// Column accessors shared by the aggregate writer.
struct MetricColumn {
  absl::string_view name;
  std::optional<double> (*get)(const MetricsRow&);
};

constexpr MetricColumn kColumns[] = {
    {"mean_test_acc", [](const MetricsRow& r) -> std::optional<double> { return r.mean_test_acc; }},
    {"mean_mia_acc", [](const MetricsRow& r) -> std::optional<double> { return r.mean_mia_acc; }},
    {"mean_tpr_at_1fpr", [](const MetricsRow& r) -> std::optional<double> { return r.mean_tpr_at_1fpr; }},
    {"mean_gen_error", [](const MetricsRow& r) -> std::optional<double> { return r.mean_gen_error; }},
    {"max_canary_tpr", [](const MetricsRow& r) { return r.max_canary_tpr; }},
    {"messages_cumulative",
     [](const MetricsRow& r) -> std::optional<double> {
       return static_cast<double>(r.messages_cumulative);
     }},
    {"eps_spent", [](const MetricsRow& r) { return r.eps_spent; }},
};

}  // namespace

std::string MetricsToCsv(const std::vector<MetricsRow>& rows) {
  std::string out = absl::StrCat(kMetricsHeader, "\n");
  for (const MetricsRow& r : rows) {
    absl::StrAppend(&out, r.round, ",", Real(r.mean_test_acc), ",",
                    Real(r.mean_mia_acc), ",", Real(r.mean_tpr_at_1fpr), ",",
                    Real(r.mean_gen_error), ",", OptionalReal(r.max_canary_tpr),
                    ",", r.messages_cumulative, ",", OptionalReal(r.eps_spent),
                    "\n");
  }
  return out;
}

absl::StatusOr<std::vector<MetricsRow>> MetricsFromCsv(absl::string_view csv) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  if (lines.empty() || lines[0] != kMetricsHeader) {
    return absl::InvalidArgumentError("metrics CSV has an unexpected header");
  }
  std::vector<MetricsRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[i], ',');
    if (cells.size() != 8) {
      return absl::InvalidArgumentError(
          absl::StrCat("metrics row ", i, ": ", cells.size(), " cells, want 8"));
    }
    MetricsRow r;
    if (!absl::SimpleAtoi(cells[0], &r.round) ||
        !absl::SimpleAtod(cells[1], &r.mean_test_acc) ||
        !absl::SimpleAtod(cells[2], &r.mean_mia_acc) ||
        !absl::SimpleAtod(cells[3], &r.mean_tpr_at_1fpr) ||
        !absl::SimpleAtod(cells[4], &r.mean_gen_error) ||
        !absl::SimpleAtoi(cells[6], &r.messages_cumulative)) {
      return absl::InvalidArgumentError(
          absl::StrCat("metrics row ", i, ": unparsable value"));
    }
    absl::StatusOr<std::optional<double>> canary =
        ParseOptional(cells[5], i, "max_canary_tpr");
    if (!canary.ok()) return canary.status();
    absl::StatusOr<std::optional<double>> eps =
        ParseOptional(cells[7], i, "eps_spent");
    if (!eps.ok()) return eps.status();
    r.max_canary_tpr = *canary;
    r.eps_spent = *eps;
    rows.push_back(r);
  }
  return rows;
}

absl::StatusOr<std::string> AggregateCsv(
    const std::vector<std::vector<MetricsRow>>& runs) {
  if (runs.empty()) return absl::InvalidArgumentError("no runs to aggregate");
  const size_t num_rows = runs.front().size();
  for (const auto& run : runs) {
    if (run.size() != num_rows) {
      return absl::InvalidArgumentError("runs cover different numbers of rounds");
    }
  }
  std::string out = "round";
  for (const MetricColumn& col : kColumns) {
    absl::StrAppend(&out, ",", col.name, "_mean,", col.name, "_std");
  }
  out += "\n";
  for (size_t row = 0; row < num_rows; ++row) {
    const int round = runs.front()[row].round;
    absl::StrAppend(&out, round);
    for (const MetricColumn& col : kColumns) {
      std::vector<double> values;
      for (const auto& run : runs) {
        if (run[row].round != round) {
          return absl::InvalidArgumentError(
              absl::StrCat("runs disagree on the round at row ", row));
        }
        if (std::optional<double> v = col.get(run[row])) values.push_back(*v);
      }
      if (values.size() != runs.size()) {
        out += ",,";
        continue;
      }
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - mean) * (v - mean);
      const double stddev =
          values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1))
                            : 0.0;
      absl::StrAppend(&out, ",", Real(mean), ",", Real(stddev));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& cfg) {
  if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) return s;
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }

  ExperimentResult result;
  std::vector<std::vector<MetricsRow>> all_metrics;
  nlohmann::json runs_meta = nlohmann::json::array();
  SimulationOptions options;
  options.keep_snapshots = cfg.save_models || cfg.dump_scores;
  for (int r = 0; r < cfg.repeat; ++r) {
    SimConfig sim = cfg.sim;
    sim.seed = cfg.sim.seed + static_cast<uint64_t>(r);
    absl::StatusOr<RunLog> log = RunSimulation(sim, options);
    if (!log.ok()) {
      return absl::Status(log.status().code(),
                          absl::StrCat("run ", r, ": ", log.status().message()));
    }
    const fs::path run_file = dir / absl::StrCat("run_", r, ".csv");
    if (absl::Status s = WriteFile(run_file, MetricsToCsv(log->metrics)); !s.ok()) {
      return s;
    }
    result.run_files.push_back(run_file.string());

    if (cfg.save_models) {
      const fs::path models = dir / "models";
      fs::create_directories(models, ec);
      for (size_t round = 0; round < log->snapshots.size(); ++round) {
        std::ofstream out(models / absl::StrCat("run_", r, "_round_", round + 1, ".bin"),
                          std::ios::binary | std::ios::trunc);
        for (const ParamVector& m : log->snapshots[round]) WriteModel(m, out);
        if (!out) return absl::DataLossError("cannot write model snapshot");
      }
    }
    if (cfg.dump_scores && !log->snapshots.empty()) {
      absl::StatusOr<SimulationSetup> setup = PrepareSimulation(sim);
      if (!setup.ok()) return setup.status();
      std::vector<AttackRecord> records;
      const std::vector<ParamVector>& last = log->snapshots.back();
      for (size_t i = 0; i < last.size(); ++i) {
        std::vector<AttackRecord> node = ScoreAttackSet(last[i], setup->attack_sets[i]);
        records.insert(records.end(), node.begin(), node.end());
      }
      if (absl::Status s = WriteFile(dir / absl::StrCat("scores_run_", r, ".csv"),
                                     AttackRecordsToCsv(records));
          !s.ok()) {
        return s;
      }
    }

    nlohmann::json privacy = nlohmann::json::array();
    for (size_t i = 0; i < log->privacy.size(); ++i) {
      privacy.push_back({{"node", i},
                         {"steps", log->privacy[i].steps},
                         {"sigma", cfg.sim.dp.noise_multiplier},
                         {"clip_norm", cfg.sim.dp.clip_norm},
                         {"delta", cfg.sim.dp.delta},
                         {"epsilon", log->privacy[i].epsilon}});
    }
    runs_meta.push_back({{"run", r},
                         {"seed", sim.seed},
                         {"wake_events", log->wake_events},
                         {"rejected_messages", log->rejected_messages},
                         {"privacy", cfg.sim.dp.enabled ? privacy : nlohmann::json()}});
    all_metrics.push_back(log->metrics);
    log->snapshots.clear();
    result.logs.push_back(*std::move(log));
  }

  absl::StatusOr<std::string> aggregate = AggregateCsv(all_metrics);
  if (!aggregate.ok()) return aggregate.status();
  result.aggregate_file = (dir / "aggregate.csv").string();
  if (absl::Status s = WriteFile(result.aggregate_file, *aggregate); !s.ok()) return s;

  nlohmann::json config = nlohmann::json::object();
  for (absl::string_view line :
       absl::StrSplit(SerializeConfig(cfg), '\n', absl::SkipEmpty())) {
    const size_t eq = line.find('=');
    config[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json meta = {
      {"config", config},
      {"decisions",
       {{"label_flip", "(y + 1) mod C"},
        {"canaries", "sources removed from the partition pool; flipped copies "
                     "appended to the owner's train split"},
        {"canary_non_members", "label-flipped global test pool samples"},
        {"mpe_log", "natural"},
        {"dp_noise_stddev", "noise_multiplier * clip_norm / batch"},
        {"rdp_subsampling_amplification", false},
        {"rdp_orders", "1.5, 2, ..., 512"},
        {"message_latency_ticks", 0},
        {"threshold", "optimized per node per snapshot"},
        {"eps_spent", "max over nodes"},
        {"run_seeds", "seed + run index"}}},
      {"runs", runs_meta},
      {"wall_time_seconds", wall},
  };
  result.metadata_file = (dir / "metadata.json").string();
  if (absl::Status s = WriteFile(result.metadata_file, meta.dump(2) + "\n"); !s.ok()) {
    return s;
  }
  return result;
}

absl::StatusOr<std::string> RunLambdaExperiment(const ExperimentConfig& cfg) {
  if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) return s;
  if (absl::Status s = ValidateLambdaDegrees(cfg); !s.ok()) return s;
  std::string csv = LambdaCsvHeader();
  for (int k : cfg.lambda.degrees) {
    for (MixingMode mode : cfg.lambda.modes) {
      LambdaCurveOptions opts;
      opts.n = cfg.sim.n;
      opts.k = k;
      opts.iterations = cfg.lambda.iterations;
      opts.runs = cfg.lambda.runs;
      opts.mode = mode;
      opts.seed = cfg.sim.seed;
      absl::StatusOr<ContractionSeries> series = LambdaCurve(opts);
      if (!series.ok()) return series.status();
      csv += LambdaCsvRows(*series);
    }
  }
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  const fs::path file = dir / "lambda.csv";
  if (absl::Status s = WriteFile(file, csv); !s.ok()) return s;
  return file.string();
}

}  // namespace gossipmia
