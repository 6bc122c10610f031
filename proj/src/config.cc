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

#include "gossipmia/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace gossipmia {
namespace {

struct Field {
  absl::string_view key;
  std::function<absl::Status(ExperimentConfig&, absl::string_view)> parse;
  std::function<std::string(const ExperimentConfig&)> print;
};

absl::Status BadValue(absl::string_view key, absl::string_view value,
                      absl::string_view want) {
  return absl::InvalidArgumentError(
      absl::StrCat("key \"", key, "\": cannot parse \"", value, "\" as ", want));
}

// Shortest text that parses back to the same double.
std::string PrintDouble(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <typename Get>
Field IntField(absl::string_view key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            if (!absl::SimpleAtoi(v, &get(c))) return BadValue(key, v, "integer");
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) { return absl::StrCat(get(c)); }};
}

template <typename Get>
Field DoubleField(absl::string_view key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            if (!absl::SimpleAtod(v, &get(c))) return BadValue(key, v, "number");
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) { return PrintDouble(get(c)); }};
}

template <typename Get>
Field BoolField(absl::string_view key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, absl::string_view v) -> absl::Status {
            if (!absl::SimpleAtob(v, &get(c))) return BadValue(key, v, "boolean");
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) {
            return std::string(get(c) ? "true" : "false");
          }};
}

template <typename Get, typename Enum>
Field EnumField(absl::string_view key, Get get,
                absl::StatusOr<Enum> (*parse)(absl::string_view),
                absl::string_view (*name)(Enum)) {
  return {key,
          [key, get, parse](ExperimentConfig& c,
                            absl::string_view v) -> absl::Status {
            absl::StatusOr<Enum> e = parse(v);
            if (!e.ok()) {
              return absl::InvalidArgumentError(
                  absl::StrCat("key \"", key, "\": ", e.status().message()));
            }
            get(c) = *e;
            return absl::OkStatus();
          },
          [get, name](const ExperimentConfig& c) {
            return std::string(name(get(c)));
          }};
}

const std::vector<Field>& Fields() {
  using C = ExperimentConfig;
  static const std::vector<Field>* fields = new std::vector<Field>{
      EnumField("protocol", [](auto& c) -> auto& { return c.sim.protocol; },
                          &ParseProtocol, &ProtocolName),
      EnumField("topology", [](auto& c) -> auto& { return c.sim.topology; },
                          &ParseTopology, &TopologyName),
      IntField("n", [](auto& c) -> auto& { return c.sim.n; }),
      IntField("k", [](auto& c) -> auto& { return c.sim.k; }),
      IntField("rounds", [](auto& c) -> auto& { return c.sim.rounds; }),
      IntField("ticks_per_round",
                    [](auto& c) -> auto& { return c.sim.ticks_per_round; }),
      DoubleField("mu", [](auto& c) -> auto& { return c.sim.mu; }),
      DoubleField("sigma2", [](auto& c) -> auto& { return c.sim.sigma2; }),
      DoubleField("lr", [](auto& c) -> auto& { return c.sim.sgd.lr; }),
      DoubleField("momentum", [](auto& c) -> auto& { return c.sim.sgd.momentum; }),
      DoubleField("weight_decay",
                  [](auto& c) -> auto& { return c.sim.sgd.weight_decay; }),
      IntField("local_epochs",
                    [](auto& c) -> auto& { return c.sim.sgd.local_epochs; }),
      IntField("batch_size", [](auto& c) -> auto& { return c.sim.sgd.batch_size; }),
      IntField("classes", [](auto& c) -> auto& { return c.sim.data.num_classes; }),
      IntField("dim", [](auto& c) -> auto& { return c.sim.data.dim; }),
      IntField("per_class", [](auto& c) -> auto& { return c.sim.data.per_class; }),
      DoubleField("sep", [](auto& c) -> auto& { return c.sim.data.separation; }),
      IntField("hidden", [](auto& c) -> auto& { return c.sim.hidden; }),
      EnumField("partition",
                           [](auto& c) -> auto& { return c.sim.partition; },
                           &ParsePartition, &PartitionName),
      DoubleField("beta", [](auto& c) -> auto& { return c.sim.beta; }),
      DoubleField("test_frac", [](auto& c) -> auto& { return c.sim.test_frac; }),
      IntField("canaries", [](auto& c) -> auto& { return c.sim.canaries; }),
      IntField("attack_size", [](auto& c) -> auto& { return c.sim.attack_size; }),
      DoubleField("fpr_cap", [](auto& c) -> auto& { return c.sim.fpr_cap; }),
      BoolField("dp_enabled", [](auto& c) -> auto& { return c.sim.dp.enabled; }),
      DoubleField("clip_norm", [](auto& c) -> auto& { return c.sim.dp.clip_norm; }),
      DoubleField("noise_multiplier",
                  [](auto& c) -> auto& { return c.sim.dp.noise_multiplier; }),
      DoubleField("delta", [](auto& c) -> auto& { return c.sim.dp.delta; }),
      IntField("seed", [](auto& c) -> auto& { return c.sim.seed; }),
      IntField("repeat", [](auto& c) -> auto& { return c.repeat; }),
      {"out_dir",
       [](C& c, absl::string_view v) -> absl::Status {
         if (v.empty()) return BadValue("out_dir", v, "directory path");
         c.out_dir = std::string(v);
         return absl::OkStatus();
       },
       [](const C& c) { return c.out_dir; }},
      BoolField("save_models", [](auto& c) -> auto& { return c.save_models; }),
      BoolField("dump_scores", [](auto& c) -> auto& { return c.dump_scores; }),
      {"lambda_k",
       [](C& c, absl::string_view v) -> absl::Status {
         std::vector<int> ks;
         for (absl::string_view part : absl::StrSplit(v, ',', absl::SkipWhitespace())) {
           int k = 0;
           if (!absl::SimpleAtoi(part, &k)) {
             return BadValue("lambda_k", v, "comma-separated integers");
           }
           ks.push_back(k);
         }
         if (ks.empty()) return BadValue("lambda_k", v, "comma-separated integers");
         c.lambda.degrees = std::move(ks);
         return absl::OkStatus();
       },
       [](const C& c) { return absl::StrJoin(c.lambda.degrees, ","); }},
      IntField("lambda_iterations",
                    [](auto& c) -> auto& { return c.lambda.iterations; }),
      IntField("lambda_runs", [](auto& c) -> auto& { return c.lambda.runs; }),
      {"lambda_modes",
       [](C& c, absl::string_view v) -> absl::Status {
         std::vector<MixingMode> modes;
         for (absl::string_view part : absl::StrSplit(v, ',', absl::SkipWhitespace())) {
           absl::StatusOr<MixingMode> mode =
               ParseMixingMode(absl::StripAsciiWhitespace(part));
           if (!mode.ok()) {
             return absl::InvalidArgumentError(
                 absl::StrCat("key \"lambda_modes\": ", mode.status().message()));
           }
           modes.push_back(*mode);
         }
         if (modes.empty()) return BadValue("lambda_modes", v, "mode list");
         c.lambda.modes = std::move(modes);
         return absl::OkStatus();
       },
       [](const C& c) {
         return absl::StrJoin(c.lambda.modes, ",",
                              [](std::string* out, MixingMode m) {
                                absl::StrAppend(out, MixingModeName(m));
                              });
       }},
  };
  return *fields;
}

}  // namespace

absl::StatusOr<ExperimentConfig> ParseConfigText(absl::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected key=value"));
    }
    absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    const Field* field = nullptr;
    for (const Field& f : Fields()) {
      if (f.key == key) field = &f;
    }
    if (field == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": unknown key \"", key, "\""));
    }
    if (!seen.insert(std::string(key)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": key \"", key, "\" given twice"));
    }
    if (absl::Status s = field->parse(cfg, value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", s.message()));
    }
  }
  if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) return s;
  return cfg;
}

absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ExperimentConfig> cfg = ParseConfigText(buffer.str());
  if (!cfg.ok()) {
    return absl::Status(cfg.status().code(),
                        absl::StrCat(path, ": ", cfg.status().message()));
  }
  return cfg;
}

std::string SerializeConfig(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : Fields()) {
    absl::StrAppend(&out, f.key, "=", f.print(cfg), "\n");
  }
  return out;
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg) {
  if (absl::Status s = ValidateSimConfig(cfg.sim); !s.ok()) return s;
  if (cfg.repeat < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("repeat must be >= 1, got ", cfg.repeat));
  }
  if (cfg.lambda.iterations < 1 || cfg.lambda.runs < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "lambda_iterations and lambda_runs must be >= 1, got ",
        cfg.lambda.iterations, " and ", cfg.lambda.runs));
  }
  return absl::OkStatus();
}

absl::Status ValidateLambdaDegrees(const ExperimentConfig& cfg) {
  for (int k : cfg.lambda.degrees) {
    if (k < 1 || k >= cfg.sim.n || (static_cast<int64_t>(k) * cfg.sim.n) % 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "lambda_k entry ", k, " is not a valid degree for n=", cfg.sim.n));
    }
  }
  return absl::OkStatus();
}

bool SameConfig(const ExperimentConfig& a, const ExperimentConfig& b) {
  return SerializeConfig(a) == SerializeConfig(b);
}

}  // namespace gossipmia
